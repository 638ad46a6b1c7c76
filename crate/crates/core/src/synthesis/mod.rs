//! From disclosure records to a composed network.
//!
//! Shared activities become 3-letter words, the words a union regex, and the
//! regex a minimal DFA (Thompson, subset construction, Hopcroft). The DFA is
//! then rendered as the behavioural process and composed with the three
//! observers.

mod alphabet;
mod behavioral;
mod dfa;
mod nfa;
mod observer;
mod regex;

pub use alphabet::{word, word_to_string, Symbol, SymbolClass, SymbolMapping, ALPHABET_SIZE};
pub use behavioral::{dfa_to_behavioral, BehavioralOptions, IDLE, SHARE};
pub use dfa::{determinize, minimize, Dfa, Row};
pub use nfa::{compile_regex, Nfa, NfaState};
pub use observer::{assemble_network, build_observer, standard_channels, ObserverKind};
pub use regex::{build_union_regex, Regex};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{check_consistency, records_for_user, DisclosureRecord, FactorTriple, ModelError, Network};

/// Name of the behavioural process in synthesised networks.
pub const USER_PROCESS: &str = "user";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("scenario {scenario} of user {user} was not shared; only shared activities are modelled")]
    NotShared { user: String, scenario: u32 },
    #[error("accepted word of length {length}; activities must have exactly 3 symbols")]
    WordLength { length: usize },
    #[error("symbol `{symbol}` cannot appear at position {position} of an activity")]
    SymbolOrder { symbol: char, position: usize },
    #[error("expected exactly one accepting state, found {accepting}; minimise first")]
    NotMinimal { accepting: usize },
    #[error("regex syntax error at byte {position}: {message}")]
    RegexSyntax { position: usize, message: String },
    #[error("channel `{0}` must be a broadcast channel")]
    DoneNotBroadcast(String),
    #[error("no records for user {0}")]
    UnknownUser(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The 3-symbol word of a shared activity.
pub fn encode_record(record: &DisclosureRecord, mapping: &SymbolMapping) -> Result<[Symbol; 3], SynthesisError> {
    if !record.shared {
        return Err(SynthesisError::NotShared { user: record.user_id.clone(), scenario: record.scenario_id });
    }
    Ok(mapping.triple_word(record.triple))
}

#[derive(Debug, Clone, Default)]
pub struct SynthesisOptions {
    pub behavioral: BehavioralOptions,
    /// Leave the observers out (a one-process network).
    pub without_observers: bool,
}

/// Every artefact of one synthesis run.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub shared: BTreeSet<FactorTriple>,
    pub regex: Regex,
    pub dfa: Dfa,
    pub network: Network,
}

/// Runs the whole pipeline for one triple set.
pub fn synthesize_triples(
    shared: &BTreeSet<FactorTriple>,
    mapping: &SymbolMapping,
    options: &SynthesisOptions,
) -> Result<Synthesis, SynthesisError> {
    let words: Vec<[Symbol; 3]> = shared.iter().map(|&t| mapping.triple_word(t)).collect();
    let regex = build_union_regex(words.iter().map(|w| w.as_slice()));
    let dfa = minimize(&determinize(&compile_regex(&regex)));
    let behavioral = dfa_to_behavioral(&dfa, mapping, USER_PROCESS, options.behavioral)?;
    let observers = if options.without_observers {
        Vec::new()
    } else {
        ObserverKind::ALL.iter().map(|&k| build_observer(k, mapping)).collect()
    };
    let network = assemble_network(behavioral, observers, Vec::new(), standard_channels(mapping), mapping)?;
    Ok(Synthesis { shared: shared.clone(), regex, dfa, network })
}

/// Triples `user` chose to share, after checking the records are consistent.
pub fn shared_triples(records: &[DisclosureRecord], user: &str) -> Result<BTreeSet<FactorTriple>, SynthesisError> {
    let mine: Vec<DisclosureRecord> = records_for_user(records, user).cloned().collect();
    if mine.is_empty() {
        return Err(SynthesisError::UnknownUser(user.to_string()));
    }
    check_consistency(&mine)?;
    Ok(mine.iter().filter(|r| r.shared).map(|r| r.triple).collect())
}

/// Runs the pipeline on one user's records.
pub fn synthesize_user(
    records: &[DisclosureRecord],
    user: &str,
    mapping: &SymbolMapping,
    options: &SynthesisOptions,
) -> Result<Synthesis, SynthesisError> {
    let shared = shared_triples(records, user)?;
    synthesize_triples(&shared, mapping, options)
}
