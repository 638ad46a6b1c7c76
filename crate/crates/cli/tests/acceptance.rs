//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any failure.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::ExitCode;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use privcheck_core::checker::{check, check_in, check_suite, deadlock_freedom, Verdict};
use privcheck_core::io::load_records;
use privcheck_core::model::{FactorTriple, Network};
use privcheck_core::oracle::{factor_properties, triple_oracle};
use privcheck_core::query::{bind, parse_query, QueryAst, Quantifier, StateFormula};
use privcheck_core::random::{random_formula, random_network, random_triples};
use privcheck_core::scenario;
use privcheck_core::semantics::{explore, simulate, Trace};
use privcheck_core::synthesis::{
    build_union_regex, compile_regex, determinize, minimize, shared_triples, synthesize_triples, word, Regex, Symbol,
    SymbolMapping, SynthesisOptions, ALPHABET_SIZE,
};

const RECORDS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/records.csv");
const MAX_STATES: usize = 10_000;
const MAX_QUERY_TIME: Duration = Duration::from_secs(1);

type Outcome = Result<String, String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn network_for(shared: &BTreeSet<FactorTriple>) -> Network {
    synthesize_triples(shared, &SymbolMapping::standard(), &SynthesisOptions::default()).expect("synthesis").network
}

fn user_network(user: &str) -> Result<(BTreeSet<FactorTriple>, Network), String> {
    let records = load_records(Path::new(RECORDS)).map_err(|e| e.to_string())?;
    let shared = shared_triples(&records, user).map_err(|e| e.to_string())?;
    let net = network_for(&shared);
    Ok((shared, net))
}

fn run(net: &Network, text: &str) -> Result<Verdict, String> {
    let q = bind(&parse_query(text).map_err(|e| e.to_string())?, net).map_err(|e| e.to_string())?;
    let v = check(net, &q).map_err(|e| e.to_string())?;
    ensure(v.stats.states_explored < MAX_STATES, || format!("{} states for `{text}`", v.stats.states_explored))?;
    ensure(v.stats.elapsed < MAX_QUERY_TIME, || format!("`{text}` took {:?}", v.stats.elapsed))?;
    if let Some(t) = &v.trace {
        t.replay(net).map_err(|e| format!("trace of `{text}` does not replay: {e}"))?;
    }
    Ok(v)
}

fn user_89_golden() -> Outcome {
    let (_, net) = user_network("89")?;
    let shared_scenarios = [
        "E<> (user.share and information_type.Health and trust_source.Family and recipient_role.Family)",
        "E<> (user.share and information_type.Relationship and trust_source.Expert and recipient_role.Family)",
        "E<> (user.share and information_type.Finance and trust_source.Expert and recipient_role.Friend)",
    ];
    for q in shared_scenarios {
        ensure(run(&net, q)?.satisfied, || format!("`{q}` not satisfied"))?;
    }
    let queries = [
        ("E<>(user.Share and info_type.Health and trust_source.Family and recipient_role.Family)", true),
        (
            "E<>(user.Share and info_type.Health and trust_source.Family and (recipient_role.Friend or recipient_role.Online))",
            false,
        ),
        ("A[] not (user.Share and info_type.Finance and trust_source.Expert and recipient_role.Friend)", false),
        ("E<> not deadlock", true),
    ];
    let mut counterexample = None;
    for (i, (q, want)) in queries.iter().enumerate() {
        let v = run(&net, q)?;
        ensure(v.satisfied == *want, || format!("query {} gave {}", i + 1, v.label()))?;
        if i == 2 {
            counterexample = v.trace;
        }
    }
    let trace = counterexample.ok_or("query 3 produced no counterexample")?;
    let seq = trace.location_sequence(&net, 0);
    let shape_ok = seq.len() == 4
        && seq[0] == "Idle"
        && seq[3] == "Share"
        && seq[1..3].iter().all(|l| l.starts_with('s') && l[1..].parse::<u32>().is_ok());
    ensure(shape_ok, || format!("counterexample path {}", seq.join(" -> ")))?;
    Ok(format!("3/3 properties, 4/4 verdicts, counterexample {}", seq.join(" -> ")))
}

fn all_strings_up_to(n: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..n {
        frontier = frontier
            .iter()
            .flat_map(|w: &Vec<Symbol>| {
                Symbol::all().map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

fn dfa_pipeline() -> Outcome {
    let words: Vec<Vec<Symbol>> = ["rCa", "hAa", "fCb"].iter().map(|w| word(w).unwrap()).collect();
    let min = minimize(&determinize(&compile_regex(&build_union_regex(words.iter().map(Vec::as_slice)))));
    ensure(min.num_states() == 7, || format!("{} live states", min.num_states()))?;
    let strings = all_strings_up_to(4);
    let accepted: Vec<&Vec<Symbol>> = strings.iter().filter(|w| min.accepts(w)).collect();
    let mut expected: Vec<&Vec<Symbol>> = words.iter().collect();
    expected.sort();
    let mut got = accepted.clone();
    got.sort();
    ensure(got == expected, || format!("accepts {} strings", accepted.len()))?;
    let factored = Regex::parse("(rC+hA)a+fCb").map_err(|e| e.to_string())?;
    let other = minimize(&determinize(&compile_regex(&factored)));
    ensure(other.canonical() == min.canonical(), || "factored form gives a different minimal DFA".into())?;
    Ok(format!("7 states, {} strings checked, isomorphic to factored form", strings.len()))
}

fn oracle_equivalence() -> Outcome {
    let (shared, net) = user_network("89")?;
    let mut users = vec![("89".to_string(), shared, net)];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..24 {
        let p = rng.gen_range(0.05..0.5);
        let s = random_triples(&mut rng, p);
        let n = network_for(&s);
        users.push((format!("synthetic-{i}"), s, n));
    }
    let mut checked = 0;
    for (user, shared, net) in &users {
        let report = triple_oracle(net, shared).map_err(|e| e.to_string())?;
        if let Some(m) = report.mismatches().next() {
            return Err(format!("user {user}: {} expected {} got {}", m.triple, m.expected, m.actual));
        }
        checked += report.rows.len();
    }
    Ok(format!("{} users, {checked} triple queries, 0 mismatches", users.len()))
}

fn guard_scenario() -> Outcome {
    let (_, base) = user_network("242")?;
    ensure(base.process(0).edges().len() > 0, || "empty user-242 model".into())?;
    let guarded = scenario::apply_guards(&base, (1, 7)).map_err(|e| e.to_string())?;

    let v = deadlock_freedom(&guarded).map_err(|e| e.to_string())?;
    ensure(!v.satisfied, || "pre-fix model is deadlock free".into())?;
    let trace = v.trace.ok_or("no deadlock counterexample")?;
    trace.replay(&guarded).map_err(|e| e.to_string())?;
    let last = trace.last();
    let at = &guarded.process(0).location(last.locations[0]).name;
    let quota = scenario::quota_location(&guarded).map_err(|e| e.to_string())?;
    ensure(*at == quota && last.valuation.get(scenario::COUNTER) == Some(2), || {
        format!("deadlock at {at} with {}", last.valuation)
    })?;

    let fixed = scenario::repair(&guarded).map_err(|e| e.to_string())?;
    ensure(deadlock_freedom(&fixed).map_err(|e| e.to_string())?.satisfied, || "repaired model deadlocks".into())?;

    let q = "E<> (user.Share and information_type.Relationship and trust_source.Expert and recipient_role.Family)";
    ensure(run(&guarded, q)?.satisfied, || "weekday path unreachable with day in [1,7]".into())?;
    let weekend = scenario::apply_guards(&base, (6, 7)).map_err(|e| e.to_string())?;
    ensure(!run(&weekend, q)?.satisfied, || "weekday path reachable with day in [6,7]".into())?;
    Ok(format!("deadlock at {at} with counter=2 after {} steps; repaired; day guard [1,7] vs [6,7]", trace.len()))
}

fn factor_properties_89() -> Outcome {
    let (shared, net) = user_network("89")?;
    let props = factor_properties(&shared);
    let queries: Vec<QueryAst> = props.iter().map(|p| p.query.clone()).collect();
    let report = check_suite(&net, &queries).map_err(|e| e.to_string())?;
    let satisfied: Vec<String> =
        report.entries.iter().filter(|(_, v)| v.satisfied).map(|(q, _)| q.body.to_string()).collect();
    let expected = [
        "information_type.Health",
        "information_type.Finance",
        "information_type.Relationship",
        "trust_source.Family",
        "trust_source.Expert",
        "recipient_role.Family",
        "recipient_role.Friend",
    ];
    ensure(satisfied == expected, || format!("satisfied set {satisfied:?}"))?;
    Ok(format!("{}/11 satisfied as expected", satisfied.len()))
}

fn replays(trace: &Option<Trace>, net: &Network) -> Result<(), String> {
    match trace {
        Some(t) => t.replay(net).map_err(|e| e.to_string()),
        None => Ok(()),
    }
}

fn duality_and_replay() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let mut traces = 0;
    for i in 0..500 {
        let net = if i % 5 == 0 { network_for(&random_triples(&mut rng, 0.1)) } else { random_network(&mut rng) };
        let f = random_formula(&mut rng, &net, 3);
        let space = explore(&net).map_err(|e| e.to_string())?;
        let verdict = |q: Quantifier, body: &StateFormula| -> Result<Verdict, String> {
            let b = bind(&QueryAst { quantifier: q, body: body.clone() }, &net).map_err(|e| e.to_string())?;
            Ok(check_in(&space, &b))
        };
        let not_f = StateFormula::not(f.clone());
        let ef = verdict(Quantifier::ExistsEventually, &f)?;
        let ag = verdict(Quantifier::ForAllGlobally, &not_f)?;
        let af = verdict(Quantifier::ForAllEventually, &f)?;
        let eg = verdict(Quantifier::ExistsGlobally, &not_f)?;
        ensure(ef.satisfied != ag.satisfied, || format!("pair {i}: E<> vs A[] disagree on {f}"))?;
        ensure(af.satisfied != eg.satisfied, || format!("pair {i}: A<> vs E[] disagree on {f}"))?;
        for v in [&ef, &ag, &af, &eg] {
            replays(&v.trace, &net).map_err(|e| format!("pair {i}: {e}"))?;
            traces += usize::from(v.trace.is_some());
        }
    }
    Ok(format!("500 pairs dual; {traces} traces replay"))
}

/// Walks all strings up to length 4 as a prefix tree, stepping each
/// automaton once per edge.
fn language_preservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for case in 0..200 {
        let words: BTreeSet<Vec<Symbol>> = (0..rng.gen_range(0..8))
            .map(|_| {
                (0..rng.gen_range(0..=4)).map(|_| Symbol::from_index(rng.gen_range(0..ALPHABET_SIZE)).unwrap()).collect()
            })
            .collect();
        let nfa = compile_regex(&build_union_regex(words.iter().map(Vec::as_slice)));
        let dfa = determinize(&nfa);
        let min = minimize(&dfa);
        let start = nfa.epsilon_closure(&BTreeSet::from([nfa.initial()]));
        let mut stack = vec![(Vec::new(), start, Some(dfa.initial()), Some(min.initial()))];
        while let Some((w, n, d, m)) = stack.pop() {
            let expected = words.contains(&w);
            let got = [
                n.iter().any(|&s| nfa.is_accepting(s)),
                d.is_some_and(|s| dfa.is_accepting(s)),
                m.is_some_and(|s| min.is_accepting(s)),
            ];
            ensure(got.iter().all(|&g| g == expected), || format!("case {case}: word {w:?} gives {got:?}"))?;
            if w.len() == 4 {
                continue;
            }
            for s in Symbol::all() {
                let mut w2 = w.clone();
                w2.push(s);
                stack.push((w2, nfa.step(&n, s), d.and_then(|x| dfa.next(x, s)), m.and_then(|x| min.next(x, s))));
            }
        }
    }
    Ok("200 word sets, all strings up to length 4".into())
}

fn observer_reset() -> Outcome {
    let (_, net) = user_network("89")?;
    let mut dones = 0;
    for seed in 0..10 {
        let sim = simulate(&net, seed, 1000).map_err(|e| e.to_string())?;
        ensure(sim.trace.len() == 1000, || format!("seed {seed}: stopped after {} steps", sim.trace.len()))?;
        sim.trace.replay(&net).map_err(|e| e.to_string())?;
        for (i, (step, c)) in sim.trace.steps.iter().enumerate() {
            if step.is_broadcast_on("done") {
                dones += 1;
                for p in 1..net.processes().len() {
                    ensure(c.locations[p] == net.process(p).initial(), || {
                        format!("seed {seed} step {}: {} not at hub", i + 1, net.process(p).name())
                    })?;
                }
            }
        }
    }
    Ok(format!("10 seeds x 1000 steps, {dones} done broadcasts, observers always at hubs"))
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("privcheck").chain(args.iter().copied());
    let code = privcheck_cli::run(argv, &mut &b""[..], &mut out, &mut err);
    (code, out)
}

fn determinism() -> Outcome {
    let suites = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/suites/user89_verification.txt");
    let base = tempfile::tempdir().map_err(|e| e.to_string())?;
    let work = base.path().join("work");
    let mut runs = Vec::new();
    for _ in 0..2 {
        if work.exists() {
            std::fs::remove_dir_all(&work).map_err(|e| e.to_string())?;
        }
        std::fs::create_dir(&work).map_err(|e| e.to_string())?;
        let model = work.join("u.model");
        let m = model.to_str().unwrap();
        let dots = work.join("dot");
        let mut outputs = vec![
            cli(&["build", "--records", RECORDS, "--user", "242", "--guarded", "--out", m]).1,
            std::fs::read(&model).map_err(|e| e.to_string())?,
            cli(&["check", "--model", m, "--query", "A[] not deadlock", "--trace", "json"]).1,
            cli(&["check", "--model", m, "--query", "E[] not user.Share", "--trace", "text", "--stats"]).1,
            cli(&["suite", "--model", m, "--queries", suites]).1,
            cli(&["simulate", "--model", m, "--seed", "42", "--steps", "200"]).1,
        ];
        let (code, _) = cli(&["export", "--model", m, "--dot", dots.to_str().unwrap()]);
        ensure(code == 0, || "export failed".into())?;
        for name in ["user", "information_type", "trust_source", "recipient_role"] {
            outputs.push(std::fs::read(dots.join(format!("{name}.dot"))).map_err(|e| e.to_string())?);
        }
        runs.push(outputs);
    }
    ensure(runs[0] == runs[1], || {
        let i = runs[0].iter().zip(&runs[1]).position(|(a, b)| a != b).unwrap_or(0);
        format!("output {i} differs between runs")
    })?;
    let model = tempfile::NamedTempFile::new().map_err(|e| e.to_string())?;
    let m = model.path().to_str().unwrap();
    cli(&["build", "--records", RECORDS, "--user", "89", "--out", m]);
    let a = cli(&["simulate", "--model", m, "--seed", "1", "--steps", "100"]).1;
    let b = cli(&["simulate", "--model", m, "--seed", "2", "--steps", "100"]).1;
    ensure(a != b, || "different seeds produced identical runs".into())?;
    Ok(format!("{} artifacts byte-identical across runs", runs[0].len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 user-89 golden suite", user_89_golden),
        ("2 DFA pipeline", dfa_pipeline),
        ("3 oracle equivalence", oracle_equivalence),
        ("4 guarded scenario", guard_scenario),
        ("5 factor properties", factor_properties_89),
        ("6a duality and replay", duality_and_replay),
        ("6b language preservation", language_preservation),
        ("6c observer reset", observer_reset),
        ("7 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
