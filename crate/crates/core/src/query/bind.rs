use thiserror::Error;

use super::ast::{QueryAst, Quantifier, StateFormula};
use crate::model::{CmpOp, Network};
use crate::semantics::{is_deadlock, Configuration, SemanticsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BindError {
    #[error("unknown process `{name}` (known: {})", .candidates.join(", "))]
    UnknownProcess { name: String, candidates: Vec<String> },
    #[error("process `{process}` has no location `{name}` (known: {})", .candidates.join(", "))]
    UnknownLocation { process: String, name: String, candidates: Vec<String> },
    #[error("unknown variable `{name}` (known: {})", .candidates.join(", "))]
    UnknownVariable { name: String, candidates: Vec<String> },
}

/// State formula with every name resolved against a network.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoundFormula {
    True,
    False,
    Location { process: usize, location: usize },
    VarCmp { var: String, op: CmpOp, value: i64 },
    Deadlock,
    And(Vec<BoundFormula>),
    Or(Vec<BoundFormula>),
    Not(Box<BoundFormula>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundQuery {
    pub quantifier: Quantifier,
    pub body: BoundFormula,
    /// The query as written, for reports.
    pub source: QueryAst,
}

impl BoundFormula {
    pub fn negate(self) -> BoundFormula {
        BoundFormula::Not(Box::new(self))
    }

    /// Evaluates with a caller-supplied deadlock oracle, consulted only if needed.
    pub fn eval_with(&self, config: &Configuration, deadlock: &mut dyn FnMut() -> bool) -> bool {
        match self {
            BoundFormula::True => true,
            BoundFormula::False => false,
            BoundFormula::Location { process, location } => config.locations[*process] == *location,
            BoundFormula::VarCmp { var, op, value } => {
                config.valuation.get(var).is_some_and(|v| op.apply(v, *value))
            }
            BoundFormula::Deadlock => deadlock(),
            BoundFormula::And(xs) => xs.iter().all(|x| x.eval_with(config, deadlock)),
            BoundFormula::Or(xs) => xs.iter().any(|x| x.eval_with(config, deadlock)),
            BoundFormula::Not(x) => !x.eval_with(config, deadlock),
        }
    }

    pub fn mentions_deadlock(&self) -> bool {
        match self {
            BoundFormula::Deadlock => true,
            BoundFormula::And(xs) | BoundFormula::Or(xs) => xs.iter().any(Self::mentions_deadlock),
            BoundFormula::Not(x) => x.mentions_deadlock(),
            _ => false,
        }
    }
}

/// Resolves process, location and variable names.
///
/// Process names match exactly (including declared aliases); location names
/// match case-insensitively.
pub fn bind_formula(formula: &StateFormula, network: &Network) -> Result<BoundFormula, BindError> {
    let all = |xs: &[StateFormula]| xs.iter().map(|x| bind_formula(x, network)).collect::<Result<Vec<_>, _>>();
    Ok(match formula {
        StateFormula::True => BoundFormula::True,
        StateFormula::False => BoundFormula::False,
        StateFormula::Deadlock => BoundFormula::Deadlock,
        StateFormula::Location { process, location } => {
            let p = network.process_index(process).ok_or_else(|| BindError::UnknownProcess {
                name: process.clone(),
                candidates: network.processes().iter().map(|p| p.name().to_string()).collect(),
            })?;
            let proc = network.process(p);
            let l = proc.find_location(location).ok_or_else(|| BindError::UnknownLocation {
                process: proc.name().to_string(),
                name: location.clone(),
                candidates: proc.locations().iter().map(|l| l.name.clone()).collect(),
            })?;
            BoundFormula::Location { process: p, location: l }
        }
        StateFormula::VarCmp { var, op, value } => {
            if network.variable(var).is_none() {
                return Err(BindError::UnknownVariable {
                    name: var.clone(),
                    candidates: network.variables().iter().map(|v| v.name.clone()).collect(),
                });
            }
            BoundFormula::VarCmp { var: var.clone(), op: *op, value: *value }
        }
        StateFormula::And(xs) => BoundFormula::And(all(xs)?),
        StateFormula::Or(xs) => BoundFormula::Or(all(xs)?),
        StateFormula::Not(x) => BoundFormula::Not(Box::new(bind_formula(x, network)?)),
    })
}

pub fn bind(query: &QueryAst, network: &Network) -> Result<BoundQuery, BindError> {
    Ok(BoundQuery { quantifier: query.quantifier, body: bind_formula(&query.body, network)?, source: query.clone() })
}

/// Evaluates a bound formula on one configuration.
pub fn eval_formula(
    config: &Configuration,
    network: &Network,
    formula: &BoundFormula,
) -> Result<bool, SemanticsError> {
    let mut failure = None;
    let result = formula.eval_with(config, &mut || match is_deadlock(network, config) {
        Ok(d) => d,
        Err(e) => {
            failure = Some(e);
            false
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(result),
    }
}
