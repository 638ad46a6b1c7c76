//! Seeded generators for small networks, formulas and triple sets.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{
    Automaton, Channel, CmpOp, Edge, FactorTriple, GuardExpr, IntExpr, Location, Network, Select, SyncAction,
    UpdateStmt, Assignment, VariableDecl,
};
use crate::query::StateFormula;

/// Variable shared by generated networks, ranging over `[0, RANDOM_VAR_MAX]`.
pub const RANDOM_VAR: &str = "x";
pub const RANDOM_VAR_MAX: i64 = 3;

const OPS: [CmpOp; 6] = [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge];

/// A network of 1-3 processes with 2-4 locations each over binary channels
/// `a`, `b`, broadcast channel `c` and the variable [`RANDOM_VAR`].
///
/// Updates only assign constants inside the declared range, so exploration
/// never fails.
pub fn random_network<R: Rng>(rng: &mut R) -> Network {
    let channels = vec![Channel::binary("a"), Channel::binary("b"), Channel::broadcast("c")];
    let names = ["a", "b", "c"];
    let processes = (0..rng.gen_range(1..=3))
        .map(|p| {
            let n = rng.gen_range(2..=4);
            let locations = (0..n)
                .map(|i| {
                    let mut l = Location::new(format!("l{i}"));
                    if i == 0 {
                        l = l.initial();
                    }
                    if rng.gen_bool(0.2) {
                        l = l.committed();
                    }
                    l
                })
                .collect();
            let edges = (0..rng.gen_range(0..=6))
                .map(|_| {
                    let mut e = Edge::new(rng.gen_range(0..n), rng.gen_range(0..n));
                    let ch = *names.choose(rng).expect("non-empty");
                    e = e.with_sync(match rng.gen_range(0..3) {
                        0 => SyncAction::None,
                        1 => SyncAction::emit(ch),
                        _ => SyncAction::receive(ch),
                    });
                    if rng.gen_bool(0.4) {
                        e = e.with_guard(random_guard(rng));
                    }
                    if rng.gen_bool(0.1) {
                        e = e.with_select(Some(Select::new(RANDOM_VAR, 0, RANDOM_VAR_MAX)));
                    } else if rng.gen_bool(0.3) {
                        let value = IntExpr::Const(rng.gen_range(0..=RANDOM_VAR_MAX));
                        e = e.with_update(UpdateStmt(vec![Assignment::new(RANDOM_VAR, value)]));
                    }
                    e
                })
                .collect();
            Automaton::new(format!("p{p}"), locations, edges).expect("generated automaton is well formed")
        })
        .collect();
    let vars = vec![VariableDecl::new(RANDOM_VAR, 0, RANDOM_VAR_MAX, 0).expect("valid bounds")];
    Network::new(processes, channels, vars).expect("generated network is well formed")
}

fn random_guard<R: Rng>(rng: &mut R) -> GuardExpr {
    let atom = |rng: &mut R| GuardExpr::cmp(RANDOM_VAR, *OPS.choose(rng).expect("ops"), rng.gen_range(0..=RANDOM_VAR_MAX));
    match rng.gen_range(0..4) {
        0 => GuardExpr::And(vec![atom(rng), atom(rng)]),
        1 => GuardExpr::Not(Box::new(atom(rng))),
        _ => atom(rng),
    }
}

/// A state formula over the processes, locations and variables of `network`,
/// nested up to `depth` connectives.
pub fn random_formula<R: Rng>(rng: &mut R, network: &Network, depth: u32) -> StateFormula {
    if depth == 0 || rng.gen_bool(0.35) {
        return match rng.gen_range(0..10) {
            0 => StateFormula::Deadlock,
            1 => {
                if rng.gen_bool(0.5) {
                    StateFormula::True
                } else {
                    StateFormula::False
                }
            }
            2..=3 if !network.variables().is_empty() => {
                let v = network.variables().choose(rng).expect("non-empty");
                StateFormula::VarCmp {
                    var: v.name.clone(),
                    op: *OPS.choose(rng).expect("ops"),
                    value: rng.gen_range(v.min..=v.max),
                }
            }
            _ => {
                let p = network.processes().choose(rng).expect("at least one process");
                let l = p.locations().choose(rng).expect("at least one location");
                StateFormula::location(p.name(), &l.name)
            }
        };
    }
    match rng.gen_range(0..3) {
        0 => StateFormula::not(random_formula(rng, network, depth - 1)),
        1 => StateFormula::And(vec![random_formula(rng, network, depth - 1), random_formula(rng, network, depth - 1)]),
        _ => StateFormula::Or(vec![random_formula(rng, network, depth - 1), random_formula(rng, network, depth - 1)]),
    }
}

/// Each of the 48 triples independently with probability `p`.
pub fn random_triples<R: Rng>(rng: &mut R, p: f64) -> BTreeSet<FactorTriple> {
    FactorTriple::all().filter(|_| rng.gen_bool(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::bind_formula;
    use crate::semantics::explore;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_models_explore_and_bind() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = random_network(&mut rng);
            explore(&n).unwrap();
            bind_formula(&random_formula(&mut rng, &n, 3), &n).unwrap();
        }
    }
}
