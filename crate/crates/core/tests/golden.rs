use std::collections::BTreeSet;

use privcheck_core::checker::{check, check_suite, deadlock_freedom, Verdict};
use privcheck_core::model::{FactorTriple, InformationType as I, Network, RecipientRole as R, TrustSource as T};
use privcheck_core::oracle::{factor_properties, triple_oracle};
use privcheck_core::query::{bind, parse_query};
use privcheck_core::scenario;
use privcheck_core::synthesis::{synthesize_triples, SymbolMapping, SynthesisOptions};

fn user_89_shared() -> BTreeSet<FactorTriple> {
    BTreeSet::from([
        FactorTriple::new(I::Relationship, T::Expert, R::Family),
        FactorTriple::new(I::Health, T::Family, R::Family),
        FactorTriple::new(I::Finance, T::Expert, R::Friend),
    ])
}

fn build(shared: &BTreeSet<FactorTriple>) -> Network {
    synthesize_triples(shared, &SymbolMapping::standard(), &SynthesisOptions::default()).unwrap().network
}

fn run(net: &Network, q: &str) -> Verdict {
    let v = check(net, &bind(&parse_query(q).unwrap(), net).unwrap()).unwrap();
    if let Some(t) = &v.trace {
        t.replay(net).unwrap();
    }
    v
}

#[test]
fn user_89_verdicts() {
    let net = build(&user_89_shared());
    assert!(run(&net, "E<> (user.Share and information_type.Health and trust_source.Family and recipient_role.Family)").satisfied);
    assert!(
        !run(
            &net,
            "E<> (user.Share and information_type.Health and trust_source.Family and (recipient_role.Friend or recipient_role.Online))"
        )
        .satisfied
    );
    let v = run(&net, "A[] not (user.Share and information_type.Finance and trust_source.Expert and recipient_role.Friend)");
    assert!(!v.satisfied);
    let seq = v.trace.unwrap().location_sequence(&net, 0).into_iter().map(String::from).collect::<Vec<_>>();
    assert_eq!(seq.len(), 4);
    assert_eq!(seq[0], "Idle");
    assert_eq!(seq[3], "Share");
    assert!(seq[1].starts_with('s') && seq[2].starts_with('s'));
    assert!(run(&net, "E<> not deadlock").satisfied);
    assert!(!run(&net, "E[] not user.Share").satisfied);
    assert!(run(&net, "A<> user.Share").satisfied);
    assert!(deadlock_freedom(&net).unwrap().satisfied);
}

#[test]
fn user_89_factor_properties_and_oracle() {
    let shared = user_89_shared();
    let net = build(&shared);
    let props = factor_properties(&shared);
    let queries: Vec<_> = props.iter().map(|p| p.query.clone()).collect();
    let report = check_suite(&net, &queries).unwrap();
    let got: Vec<bool> = report.entries.iter().map(|(_, v)| v.satisfied).collect();
    assert_eq!(got, [true, true, true, true, false, true, false, true, true, false, false]);
    assert_eq!(got, props.iter().map(|p| p.expected).collect::<Vec<_>>());
    assert!(triple_oracle(&net, &shared).unwrap().is_clean());
}

#[test]
fn guarded_scenario() {
    let base = build(&scenario::shared_triples());
    let guarded = scenario::apply_guards(&base, (1, 7)).unwrap();
    let v = deadlock_freedom(&guarded).unwrap();
    assert!(!v.satisfied);
    let last = v.trace.as_ref().unwrap().last().clone();
    let at = scenario::quota_location(&guarded).unwrap();
    assert_eq!(guarded.process(0).location(last.locations[0]).name, at);
    assert_eq!(last.valuation.get(scenario::COUNTER), Some(2));
    v.trace.unwrap().replay(&guarded).unwrap();

    let fixed = scenario::repair(&guarded).unwrap();
    assert!(deadlock_freedom(&fixed).unwrap().satisfied);

    let q = "E<> (user.Share and information_type.Relationship and trust_source.Expert and recipient_role.Family)";
    assert!(run(&guarded, q).satisfied);
    let weekend = scenario::apply_guards(&base, (6, 7)).unwrap();
    assert!(!run(&weekend, q).satisfied);
    assert!(run(&scenario::repair(&weekend).unwrap(), "E<> user.Share").satisfied);
}
