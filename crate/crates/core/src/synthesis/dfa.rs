//! Subset construction and Hopcroft minimisation.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use super::alphabet::{Symbol, ALPHABET_SIZE};
use super::nfa::Nfa;

pub type Row = [Option<usize>; ALPHABET_SIZE];

/// Deterministic automaton with a partial transition function.
///
/// Missing transitions lead to an implicit, non-accepting dead state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    transitions: Vec<Row>,
    accepting: Vec<bool>,
    initial: usize,
}

impl Dfa {
    /// # Panics
    /// If any index is out of range or the tables differ in length.
    pub fn new(transitions: Vec<Row>, accepting: Vec<bool>, initial: usize) -> Self {
        assert_eq!(transitions.len(), accepting.len());
        assert!(initial < transitions.len());
        assert!(transitions.iter().flatten().flatten().all(|&t| t < transitions.len()));
        Self { transitions, accepting, initial }
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn next(&self, state: usize, sym: Symbol) -> Option<usize> {
        self.transitions[state][sym.index()]
    }

    /// Defined transitions out of `state`, in symbol order.
    pub fn transitions_from(&self, state: usize) -> impl Iterator<Item = (Symbol, usize)> + '_ {
        Symbol::all().filter_map(move |s| self.next(state, s).map(|t| (s, t)))
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        let mut q = self.initial;
        for &s in w {
            match self.next(q, s) {
                Some(t) => q = t,
                None => return false,
            }
        }
        self.accepting[q]
    }

    /// States from which some accepting state is reachable.
    pub fn live_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut preds = vec![Vec::new(); n];
        for (q, row) in self.transitions.iter().enumerate() {
            for t in row.iter().flatten() {
                preds[*t].push(q);
            }
        }
        let mut live = self.accepting.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&q| live[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// Renumbers reachable states in breadth-first order (symbols in
    /// alphabet order), dropping unreachable ones. Two DFAs are isomorphic
    /// exactly when their canonical forms are equal.
    pub fn canonical(&self) -> Dfa {
        let mut order = vec![self.initial];
        let mut index: BTreeMap<usize, usize> = BTreeMap::from([(self.initial, 0)]);
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for (_, t) in self.transitions_from(q) {
                if !index.contains_key(&t) {
                    index.insert(t, order.len());
                    order.push(t);
                }
            }
            i += 1;
        }
        let transitions = order.iter().map(|&q| self.transitions[q].map(|t| t.map(|t| index[&t]))).collect();
        let accepting = order.iter().map(|&q| self.accepting[q]).collect();
        Dfa { transitions, accepting, initial: 0 }
    }
}

/// Subset construction over reachable subsets only.
pub fn determinize(nfa: &Nfa) -> Dfa {
    let start = nfa.epsilon_closure(&BTreeSet::from([nfa.initial()]));
    let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::from([(start.clone(), 0)]);
    let mut subsets = vec![start];
    let mut transitions: Vec<Row> = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        let mut row = [None; ALPHABET_SIZE];
        for sym in Symbol::all() {
            let next = nfa.step(&subsets[i], sym);
            if next.is_empty() {
                continue;
            }
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = subsets.len();
                    index.insert(next.clone(), id);
                    subsets.push(next);
                    id
                }
            };
            row[sym.index()] = Some(id);
        }
        transitions.push(row);
        i += 1;
    }
    let accepting = subsets.iter().map(|s| s.iter().any(|&q| nfa.is_accepting(q))).collect();
    Dfa { transitions, accepting, initial: 0 }
}

/// Minimal DFA over live states, canonically numbered.
///
/// Uses Hopcroft's partition refinement on the completed automaton, then
/// removes the dead class again. For the empty language the result is a
/// single non-accepting initial state with no transitions.
pub fn minimize(dfa: &Dfa) -> Dfa {
    let reach = dfa.canonical();
    let n = reach.num_states();
    let dead = n;
    let total = n + 1;
    let delta = |q: usize, s: usize| if q == dead { dead } else { reach.transitions[q][s].unwrap_or(dead) };

    let mut inverse: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); ALPHABET_SIZE]; total];
    for q in 0..total {
        for s in 0..ALPHABET_SIZE {
            inverse[delta(q, s)][s].push(q);
        }
    }

    let accepting: Vec<usize> = (0..n).filter(|&q| reach.accepting[q]).collect();
    let rejecting: Vec<usize> = (0..total).filter(|&q| q == dead || !reach.accepting[q]).collect();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![0usize; total];
    for b in [accepting, rejecting] {
        if !b.is_empty() {
            for &q in &b {
                block_of[q] = blocks.len();
            }
            blocks.push(b);
        }
    }

    let mut work: VecDeque<(usize, usize)> = VecDeque::new();
    let mut queued: HashSet<(usize, usize)> = HashSet::new();
    if blocks.len() == 2 {
        let smaller = if blocks[0].len() <= blocks[1].len() { 0 } else { 1 };
        for s in 0..ALPHABET_SIZE {
            work.push_back((smaller, s));
            queued.insert((smaller, s));
        }
    }

    while let Some((splitter, s)) = work.pop_front() {
        queued.remove(&(splitter, s));
        let mut hit: BTreeSet<usize> = BTreeSet::new();
        for &q in &blocks[splitter] {
            hit.extend(inverse[q][s].iter().copied());
        }
        let touched: BTreeSet<usize> = hit.iter().map(|&q| block_of[q]).collect();
        for y in touched {
            let (inside, outside): (Vec<usize>, Vec<usize>) = blocks[y].iter().partition(|q| hit.contains(q));
            if outside.is_empty() {
                continue;
            }
            let new_id = blocks.len();
            for &q in &outside {
                block_of[q] = new_id;
            }
            let (in_len, out_len) = (inside.len(), outside.len());
            blocks[y] = inside;
            blocks.push(outside);
            for c in 0..ALPHABET_SIZE {
                let pick = if queued.contains(&(y, c)) || in_len > out_len { new_id } else { y };
                if queued.insert((pick, c)) {
                    work.push_back((pick, c));
                }
            }
        }
    }

    let dead_block = block_of[dead];
    let initial_block = block_of[reach.initial];
    if initial_block == dead_block {
        return Dfa { transitions: vec![[None; ALPHABET_SIZE]], accepting: vec![false], initial: 0 };
    }
    let transitions = (0..blocks.len())
        .map(|b| {
            if b == dead_block {
                return [None; ALPHABET_SIZE];
            }
            let rep = blocks[b][0];
            let mut row = [None; ALPHABET_SIZE];
            for (s, slot) in row.iter_mut().enumerate() {
                let t = block_of[delta(rep, s)];
                *slot = (t != dead_block).then_some(t);
            }
            row
        })
        .collect();
    let accepting = (0..blocks.len()).map(|b| b != dead_block && reach.accepting[blocks[b][0]]).collect();
    Dfa { transitions, accepting, initial: initial_block }.canonical()
}
