//! A guarded workday/quota scenario layered on a synthesized network.
//!
//! Two behavioral paths receive environment guards:
//!
//! * the relationship/expert/family path starts with a `day : [lo,hi]` select
//!   and only proceeds past the expert hop on weekdays (`1 <= day <= 5`);
//! * the health/family/online path may complete at most twice, tracked by a
//!   bounded `counter`.
//!
//! Once the quota is spent the user process is stuck right before the online
//! hop. [`repair`] adds the escape edge back to `Idle`.

use std::collections::BTreeSet;

use crate::model::{
    EdgeSelector, FactorTriple, GuardExpr, CmpOp, InformationType, ModelError, Network, RecipientRole, Select,
    SyncAction, TrustSource, UpdateStmt, VariableDecl,
};
use crate::synthesis::{SymbolMapping, IDLE, USER_PROCESS};

pub const DAY: &str = "day";
pub const COUNTER: &str = "counter";
pub const COUNTER_LIMIT: i64 = 2;

/// The weekday-guarded path.
pub const DAY_PATH: FactorTriple =
    FactorTriple::new(InformationType::Relationship, TrustSource::Expert, RecipientRole::Family);
/// The quota-guarded path.
pub const COUNTER_PATH: FactorTriple =
    FactorTriple::new(InformationType::Health, TrustSource::Family, RecipientRole::OnlineService);

/// Six shared triples containing both guarded paths.
pub fn shared_triples() -> BTreeSet<FactorTriple> {
    use InformationType::*;
    use RecipientRole as R;
    use TrustSource as T;
    BTreeSet::from([
        COUNTER_PATH,
        DAY_PATH,
        FactorTriple::new(Relationship, T::Friend, R::Colleague),
        FactorTriple::new(Finance, T::Friend, R::Friend),
        FactorTriple::new(Finance, T::SelfSearch, R::Colleague),
        FactorTriple::new(Health, T::Expert, R::Colleague),
    ])
}

fn location_after(network: &Network, channels: &[&str]) -> Result<String, ModelError> {
    let user = network.process(user_index(network)?);
    let id = user.follow_emissions(channels).ok_or_else(|| ModelError::NoSuchEdge {
        automaton: user.name().to_string(),
        edge: channels.join(" "),
    })?;
    Ok(user.location(id).name.clone())
}

fn user_index(network: &Network) -> Result<usize, ModelError> {
    network.process_index(USER_PROCESS).ok_or_else(|| ModelError::UnknownLocation {
        automaton: USER_PROCESS.to_string(),
        location: IDLE.to_string(),
    })
}

/// Location reached by the quota path just before its final hop.
pub fn quota_location(network: &Network) -> Result<String, ModelError> {
    let m = SymbolMapping::standard();
    let [it, ts, _] = m.triple_channels(COUNTER_PATH);
    location_after(network, &[it, ts])
}

/// Adds `day` and `counter` and guards both paths; `day_range` is the select range.
pub fn apply_guards(network: &Network, day_range: (i64, i64)) -> Result<Network, ModelError> {
    let m = SymbolMapping::standard();
    let (lo, hi) = day_range;
    let mut variables = network.variables().to_vec();
    variables.push(VariableDecl::new(DAY, lo.min(1), hi.max(7), lo)?);
    variables.push(VariableDecl::new(COUNTER, 0, COUNTER_LIMIT, 0)?);
    let network = network.with_variables(variables)?;

    let [d_it, d_ts, _] = m.triple_channels(DAY_PATH);
    let d1 = location_after(&network, &[d_it])?;
    let d2 = location_after(&network, &[d_it, d_ts])?;
    let [c_it, c_ts, c_rr] = m.triple_channels(COUNTER_PATH);
    let c2 = location_after(&network, &[c_it, c_ts])?;
    let c3 = location_after(&network, &[c_it, c_ts, c_rr])?;

    let idx = user_index(&network)?;
    let user = network
        .process(idx)
        .attach_guard(
            &EdgeSelector::new(IDLE, &d1).on_channel(d_it),
            GuardExpr::True,
            UpdateStmt::empty(),
            Some(Select::new(DAY, lo, hi)),
        )?
        .attach_guard(
            &EdgeSelector::new(&d1, &d2).on_channel(d_ts),
            GuardExpr::And(vec![GuardExpr::cmp(DAY, CmpOp::Ge, 1), GuardExpr::cmp(DAY, CmpOp::Le, 5)]),
            UpdateStmt::empty(),
            None,
        )?
        .attach_guard(
            &EdgeSelector::new(&c2, &c3).on_channel(c_rr),
            GuardExpr::cmp(COUNTER, CmpOp::Lt, COUNTER_LIMIT),
            UpdateStmt::increment(COUNTER),
            None,
        )?;
    network.with_process(idx, user)
}

/// Adds the `counter >= 2` escape edge from the quota location back to `Idle`.
pub fn repair(network: &Network) -> Result<Network, ModelError> {
    let m = SymbolMapping::standard();
    let at = quota_location(network)?;
    let idx = user_index(network)?;
    let user = network.process(idx).add_edge(
        &at,
        IDLE,
        GuardExpr::cmp(COUNTER, CmpOp::Ge, COUNTER_LIMIT),
        SyncAction::emit(m.done_channel()),
        UpdateStmt::empty(),
    )?;
    network.with_process(idx, user)
}
