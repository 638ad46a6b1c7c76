//! Brute-force ground truth derived directly from the shared triples.
//!
//! A triple is reachable at `Share` iff the user shared it, and an observer
//! spoke is reachable iff some shared triple carries that factor value.

use std::collections::BTreeSet;

use crate::checker::{check_in, CheckError};
use crate::model::{Factor, FactorTriple, InformationType, Network, RecipientRole, TrustSource};
use crate::query::{bind, QueryAst, Quantifier, StateFormula};
use crate::semantics::explore;
use crate::synthesis::{ObserverKind, SHARE, USER_PROCESS};

/// `E<> (user.Share and information_type.X and trust_source.Y and recipient_role.Z)`
pub fn triple_query(triple: FactorTriple) -> QueryAst {
    QueryAst {
        quantifier: Quantifier::ExistsEventually,
        body: StateFormula::And(vec![
            StateFormula::location(USER_PROCESS, SHARE),
            StateFormula::location(
                ObserverKind::InformationType.process_name(),
                triple.info_type.location_name(),
            ),
            StateFormula::location(ObserverKind::TrustSource.process_name(), triple.trust_source.location_name()),
            StateFormula::location(
                ObserverKind::RecipientRole.process_name(),
                triple.recipient_role.location_name(),
            ),
        ]),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRow {
    pub triple: FactorTriple,
    pub expected: bool,
    pub actual: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub rows: Vec<OracleRow>,
}

impl OracleReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &OracleRow> {
        self.rows.iter().filter(|r| r.expected != r.actual)
    }

    pub fn is_clean(&self) -> bool {
        self.mismatches().next().is_none()
    }
}

/// Checks all 48 triple queries against membership in `shared`.
///
/// A user process without a `Share` location (nothing shared) cannot reach
/// it, so every triple then counts as unreachable.
pub fn triple_oracle(network: &Network, shared: &BTreeSet<FactorTriple>) -> Result<OracleReport, CheckError> {
    let space = explore(network)?;
    let has_share = network
        .process_index(USER_PROCESS)
        .is_some_and(|p| network.process(p).find_location(SHARE).is_some());
    let rows = FactorTriple::all()
        .enumerate()
        .map(|(index, triple)| {
            let actual = has_share && {
                let q = bind(&triple_query(triple), network).map_err(|source| CheckError::Bind { index, source })?;
                check_in(&space, &q).satisfied
            };
            Ok(OracleRow { triple, expected: shared.contains(&triple), actual })
        })
        .collect::<Result<_, CheckError>>()?;
    Ok(OracleReport { rows })
}

/// One observer-spoke reachability property, e.g. `E<> trust_source.Expert`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorProperty {
    pub query: QueryAst,
    /// Whether the spoke is reachable given the shared triples.
    pub expected: bool,
}

/// The eleven spoke-reachability properties in factor order, with the
/// verdict each should produce for a user sharing exactly `shared`.
pub fn factor_properties(shared: &BTreeSet<FactorTriple>) -> Vec<FactorProperty> {
    fn spoke(kind: ObserverKind, location: &str, expected: bool) -> FactorProperty {
        FactorProperty {
            query: QueryAst {
                quantifier: Quantifier::ExistsEventually,
                body: StateFormula::location(kind.process_name(), location),
            },
            expected,
        }
    }
    let mut out = Vec::with_capacity(11);
    for &v in InformationType::ALL {
        let hit = shared.iter().any(|t| t.info_type == v);
        out.push(spoke(ObserverKind::InformationType, v.location_name(), hit));
    }
    for &v in TrustSource::ALL {
        let hit = shared.iter().any(|t| t.trust_source == v);
        out.push(spoke(ObserverKind::TrustSource, v.location_name(), hit));
    }
    for &v in RecipientRole::ALL {
        let hit = shared.iter().any(|t| t.recipient_role == v);
        out.push(spoke(ObserverKind::RecipientRole, v.location_name(), hit));
    }
    out
}
