//! Deciding `E<>`, `A[]`, `E[]` and `A<>` over the explored state space.
//!
//! Paths are maximal: infinite, or ending in a deadlocked configuration.
//! `A[]` and `A<>` are answered through their existential duals, so every
//! evidence trace is either a shortest path to a target configuration or a
//! lasso (path plus a cycle back to one of its configurations).

use std::collections::{HashMap, VecDeque};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::model::Network;
use crate::query::{bind, BindError, BoundFormula, BoundQuery, QueryAst, Quantifier, StateFormula};
use crate::semantics::{explore, SemanticsError, StateId, StateSpace, Step, Trace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("query {index}: {source}")]
    Bind { index: usize, source: BindError },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub states_explored: usize,
    pub transitions: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub satisfied: bool,
    /// Witness for satisfied `E<>`/`E[]`, counterexample for violated `A[]`/`A<>`.
    pub trace: Option<Trace>,
    pub stats: Stats,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        if self.satisfied {
            "Satisfied"
        } else {
            "Not Satisfied"
        }
    }
}

/// Explores `network` and decides `query`.
pub fn check(network: &Network, query: &BoundQuery) -> Result<Verdict, CheckError> {
    let start = Instant::now();
    let space = explore(network)?;
    let mut v = check_in(&space, query);
    v.stats.elapsed = start.elapsed();
    Ok(v)
}

/// Decides `query` on an already explored state space.
pub fn check_in(space: &StateSpace, query: &BoundQuery) -> Verdict {
    let start = Instant::now();
    let (satisfied, trace) = match query.quantifier {
        Quantifier::ExistsEventually => {
            let t = reach(space, &query.body);
            (t.is_some(), t)
        }
        Quantifier::ForAllGlobally => {
            let t = reach(space, &query.body.clone().negate());
            (t.is_none(), t)
        }
        Quantifier::ExistsGlobally => {
            let t = always_path(space, &query.body);
            (t.is_some(), t)
        }
        Quantifier::ForAllEventually => {
            let t = always_path(space, &query.body.clone().negate());
            (t.is_none(), t)
        }
    };
    Verdict {
        satisfied,
        trace,
        stats: Stats {
            states_explored: space.len(),
            transitions: space.transition_count(),
            elapsed: start.elapsed(),
        },
    }
}

fn holds(space: &StateSpace, id: StateId, f: &BoundFormula) -> bool {
    f.eval_with(space.state(id), &mut || space.is_deadlock(id))
}

/// Shortest trace to a configuration satisfying `f`.
fn reach(space: &StateSpace, f: &BoundFormula) -> Option<Trace> {
    (0..space.len()).find(|&id| holds(space, id, f)).map(|id| space.trace_to(id))
}

/// Evidence of a maximal path on which `f` holds everywhere.
fn always_path(space: &StateSpace, f: &BoundFormula) -> Option<Trace> {
    let good: Vec<bool> = (0..space.len()).map(|id| holds(space, id, f)).collect();
    if !good[0] {
        return None;
    }
    // shortest paths inside the f-subgraph
    let mut parent: HashMap<StateId, Option<(StateId, Step)>> = HashMap::from([(0, None)]);
    let mut order = vec![0];
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for (step, v) in space.successors(u) {
            if good[*v] && !parent.contains_key(v) {
                parent.insert(*v, Some((u, step.clone())));
                order.push(*v);
                queue.push_back(*v);
            }
        }
    }

    let on_cycle = cyclic_states(space, &order, &good);
    let target = order.iter().copied().find(|&id| space.is_deadlock(id) || on_cycle[id])?;

    let mut rev = Vec::new();
    let mut at = target;
    while let Some(Some((p, step))) = parent.get(&at) {
        rev.push((step.clone(), space.state(at).clone()));
        at = *p;
    }
    rev.reverse();
    let mut trace = Trace { initial: space.state(0).clone(), steps: rev, cycle_start: None };
    if !space.is_deadlock(target) {
        let entry = trace.len();
        trace.steps.extend(cycle_through(space, target, &good));
        trace.cycle_start = Some(entry);
    }
    Some(trace)
}

/// Marks states of `nodes` lying on a cycle of the subgraph induced by `keep`
/// (iterative Tarjan).
fn cyclic_states(space: &StateSpace, nodes: &[StateId], keep: &[bool]) -> Vec<bool> {
    let n = space.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut result = vec![false; n];
    let mut counter = 0;
    let succ = |u: StateId| space.successors(u).iter().map(|(_, v)| *v).filter(|&v| keep[v]);

    for &root in nodes {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(StateId, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (u, ref mut next)) = call.last_mut() {
            let targets: Vec<StateId> = succ(u).collect();
            if let Some(&v) = targets.get(*next) {
                *next += 1;
                if index[v] == usize::MAX {
                    index[v] = counter;
                    low[v] = counter;
                    counter += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
                continue;
            }
            call.pop();
            if let Some(&(p, _)) = call.last() {
                low[p] = low[p].min(low[u]);
            }
            if low[u] == index[u] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    component.push(w);
                    if w == u {
                        break;
                    }
                }
                let cyclic = component.len() > 1 || succ(u).any(|v| v == u);
                if cyclic {
                    for w in component {
                        result[w] = true;
                    }
                }
            }
        }
    }
    result
}

/// Shortest cycle from `start` back to itself within `keep`.
fn cycle_through(space: &StateSpace, start: StateId, keep: &[bool]) -> Vec<(Step, crate::semantics::Configuration)> {
    let mut parent: HashMap<StateId, (StateId, Step)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = vec![false; space.len()];
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        for (step, v) in space.successors(u) {
            if !keep[*v] {
                continue;
            }
            if *v == start {
                let mut rev = vec![(step.clone(), space.state(start).clone())];
                let mut at = u;
                while at != start {
                    let (p, s) = &parent[&at];
                    rev.push((s.clone(), space.state(at).clone()));
                    at = *p;
                }
                rev.reverse();
                return rev;
            }
            if !seen[*v] {
                seen[*v] = true;
                parent.insert(*v, (u, step.clone()));
                queue.push_back(*v);
            }
        }
    }
    unreachable!("start state was classified as cyclic")
}

/// Per-query verdicts, in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub entries: Vec<(QueryAst, Verdict)>,
}

impl SuiteReport {
    pub fn all_satisfied(&self) -> bool {
        self.entries.iter().all(|(_, v)| v.satisfied)
    }
}

/// Binds every query (aborting on the first failure), explores once and
/// checks each query on the shared state space.
pub fn check_suite(network: &Network, queries: &[QueryAst]) -> Result<SuiteReport, CheckError> {
    let bound: Vec<BoundQuery> = queries
        .iter()
        .enumerate()
        .map(|(index, q)| bind(q, network).map_err(|source| CheckError::Bind { index, source }))
        .collect::<Result<_, _>>()?;
    if bound.is_empty() {
        return Ok(SuiteReport { entries: Vec::new() });
    }
    let space = explore(network)?;
    let entries = bound.into_iter().map(|q| {
        let v = check_in(&space, &q);
        (q.source, v)
    });
    Ok(SuiteReport { entries: entries.collect() })
}

/// `A[] not deadlock`, with a shortest path to a deadlock when violated.
pub fn deadlock_freedom(network: &Network) -> Result<Verdict, CheckError> {
    let query = QueryAst { quantifier: Quantifier::ForAllGlobally, body: StateFormula::not(StateFormula::Deadlock) };
    let bound = bind(&query, network).map_err(|source| CheckError::Bind { index: 0, source })?;
    check(network, &bound)
}
