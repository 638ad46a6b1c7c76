//! Turning a minimal activity DFA into the user's behavioural process.

use std::collections::BTreeMap;

use super::alphabet::SymbolMapping;
use super::dfa::Dfa;
use super::SynthesisError;
use crate::model::{Automaton, Edge, Location, SyncAction};

pub const IDLE: &str = "Idle";
pub const SHARE: &str = "Share";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BehavioralOptions {
    /// Mark s1..sN urgent instead of plain.
    pub urgent_intermediates: bool,
}

/// Builds the behavioural automaton.
///
/// The initial state becomes `Idle`, the accepting state `Share` (both
/// committed) and the rest `s1..sN` in breadth-first order. Every
/// transition emits the channel of its symbol and `Share` returns to
/// `Idle` by emitting the done channel.
pub fn dfa_to_behavioral(
    dfa: &Dfa,
    mapping: &SymbolMapping,
    process_name: &str,
    options: BehavioralOptions,
) -> Result<Automaton, SynthesisError> {
    let live = dfa.live_states();
    if !live[dfa.initial()] {
        return Ok(Automaton::new(process_name, vec![Location::new(IDLE).initial().committed()], vec![])?);
    }

    // breadth-first over live states; every edge must go one level deeper
    let mut depth: BTreeMap<usize, usize> = BTreeMap::from([(dfa.initial(), 0)]);
    let mut order = vec![dfa.initial()];
    let mut edges_bfs = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        let d = depth[&q];
        if dfa.is_accepting(q) && d != 3 {
            return Err(SynthesisError::WordLength { length: d });
        }
        for (sym, t) in dfa.transitions_from(q) {
            if !live[t] {
                continue;
            }
            if d >= 3 {
                return Err(SynthesisError::WordLength { length: d + 1 });
            }
            if sym.class().position() != d {
                return Err(SynthesisError::SymbolOrder { symbol: sym.as_char(), position: d });
            }
            match depth.get(&t) {
                Some(&dt) if dt != d + 1 => return Err(SynthesisError::WordLength { length: dt.max(d + 1) }),
                Some(_) => {}
                None => {
                    depth.insert(t, d + 1);
                    order.push(t);
                }
            }
            edges_bfs.push((q, sym, t));
        }
        i += 1;
    }

    let accepting: Vec<usize> = order.iter().copied().filter(|&q| dfa.is_accepting(q)).collect();
    let share = match accepting.as_slice() {
        [one] => *one,
        _ => return Err(SynthesisError::NotMinimal { accepting: accepting.len() }),
    };

    let mut locations = vec![Location::new(IDLE).initial().committed()];
    let mut loc_of: BTreeMap<usize, usize> = BTreeMap::from([(dfa.initial(), 0)]);
    for &q in order.iter().filter(|&&q| q != dfa.initial() && q != share) {
        let mut loc = Location::new(format!("s{}", locations.len()));
        if options.urgent_intermediates {
            loc = loc.urgent();
        }
        loc_of.insert(q, locations.len());
        locations.push(loc);
    }
    loc_of.insert(share, locations.len());
    locations.push(Location::new(SHARE).committed());

    let mut edges: Vec<Edge> = edges_bfs
        .into_iter()
        .map(|(q, sym, t)| Edge::new(loc_of[&q], loc_of[&t]).with_sync(SyncAction::emit(mapping.channel(sym))))
        .collect();
    edges.push(Edge::new(loc_of[&share], 0).with_sync(SyncAction::emit(mapping.done_channel())));
    Ok(Automaton::new(process_name, locations, edges)?)
}
