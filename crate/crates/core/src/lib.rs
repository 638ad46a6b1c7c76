//! Synthesis and explicit-state verification of personal privacy-disclosure models.
//!
//! Disclosure records become a behavioral automaton (regex, NFA, minimal DFA),
//! which is composed with observer automata into a [`Network`]. Queries in a
//! small CTL subset are then decided by exhaustive state-space search.

pub mod checker;
pub mod io;
pub mod model;
pub mod oracle;
pub mod query;
pub mod random;
pub mod scenario;
pub mod semantics;
pub mod synthesis;

pub use checker::{check, check_suite, deadlock_freedom, Verdict};
pub use model::{DisclosureRecord, FactorTriple, Network};
pub use query::{bind, parse_query};
pub use semantics::Trace;
