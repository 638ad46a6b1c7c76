//! Thompson construction.

use std::collections::BTreeSet;

use super::alphabet::Symbol;
use super::regex::Regex;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NfaState {
    pub epsilon: Vec<usize>,
    pub transitions: Vec<(Symbol, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    states: Vec<NfaState>,
    initial: usize,
    accepting: BTreeSet<usize>,
}

impl Nfa {
    pub fn states(&self) -> &[NfaState] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting.contains(&state)
    }

    /// Adds every state reachable through ε-moves.
    pub fn epsilon_closure(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut closure = set.clone();
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for &t in &self.states[s].epsilon {
                if closure.insert(t) {
                    stack.push(t);
                }
            }
        }
        closure
    }

    pub fn step(&self, set: &BTreeSet<usize>, sym: Symbol) -> BTreeSet<usize> {
        let moved = set
            .iter()
            .flat_map(|&s| self.states[s].transitions.iter())
            .filter(|(a, _)| *a == sym)
            .map(|&(_, t)| t)
            .collect();
        self.epsilon_closure(&moved)
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        let mut current = self.epsilon_closure(&BTreeSet::from([self.initial]));
        for &s in w {
            current = self.step(&current, s);
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|s| self.accepting.contains(s))
    }
}

/// Builds an ε-NFA accepting exactly the language of `regex`.
pub fn compile_regex(regex: &Regex) -> Nfa {
    let mut b = Builder { states: Vec::new() };
    let (start, end) = b.build(regex);
    Nfa { states: b.states, initial: start, accepting: BTreeSet::from([end]) }
}

struct Builder {
    states: Vec<NfaState>,
}

impl Builder {
    fn fresh(&mut self) -> usize {
        self.states.push(NfaState::default());
        self.states.len() - 1
    }

    fn eps(&mut self, from: usize, to: usize) {
        self.states[from].epsilon.push(to);
    }

    fn build(&mut self, r: &Regex) -> (usize, usize) {
        match r {
            Regex::Empty => (self.fresh(), self.fresh()),
            Regex::Epsilon => {
                let (s, e) = (self.fresh(), self.fresh());
                self.eps(s, e);
                (s, e)
            }
            Regex::Symbol(sym) => {
                let (s, e) = (self.fresh(), self.fresh());
                self.states[s].transitions.push((*sym, e));
                (s, e)
            }
            Regex::Concat(parts) => {
                let Some((first, rest)) = parts.split_first() else {
                    return self.build(&Regex::Epsilon);
                };
                let (start, mut end) = self.build(first);
                for p in rest {
                    let (s, e) = self.build(p);
                    self.eps(end, s);
                    end = e;
                }
                (start, end)
            }
            Regex::Union(alts) => {
                let (s, e) = (self.fresh(), self.fresh());
                for a in alts {
                    let (as_, ae) = self.build(a);
                    self.eps(s, as_);
                    self.eps(ae, e);
                }
                (s, e)
            }
            Regex::Star(inner) => {
                let (s, e) = (self.fresh(), self.fresh());
                let (is, ie) = self.build(inner);
                self.eps(s, is);
                self.eps(s, e);
                self.eps(ie, is);
                self.eps(ie, e);
                (s, e)
            }
        }
    }
}
