//! Fixtures shared by the benchmarks.

use std::collections::BTreeSet;

use privcheck_core::model::{FactorTriple, InformationType as I, Network, RecipientRole as R, TrustSource as T};
use privcheck_core::scenario;
use privcheck_core::synthesis::{synthesize_triples, SymbolMapping, SynthesisOptions};

pub fn user_89_triples() -> BTreeSet<FactorTriple> {
    BTreeSet::from([
        FactorTriple::new(I::Relationship, T::Expert, R::Family),
        FactorTriple::new(I::Health, T::Family, R::Family),
        FactorTriple::new(I::Finance, T::Expert, R::Friend),
    ])
}

/// Every `step`-th triple in canonical order.
pub fn strided_triples(step: usize) -> BTreeSet<FactorTriple> {
    FactorTriple::all().step_by(step.max(1)).collect()
}

pub fn network(shared: &BTreeSet<FactorTriple>) -> Network {
    synthesize_triples(shared, &SymbolMapping::standard(), &SynthesisOptions::default())
        .expect("fixture synthesis")
        .network
}

/// The day/quota guarded model, without the repair edge.
pub fn guarded_network() -> Network {
    scenario::apply_guards(&network(&scenario::shared_triples()), (1, 7)).expect("fixture guards")
}
