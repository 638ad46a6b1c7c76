//! Domain types shared by every other module.

mod automaton;
mod expr;
mod factors;
mod network;

pub use automaton::{Automaton, Channel, ChannelKind, Edge, EdgeSelector, Location, Select, SyncAction};
pub use expr::{
    apply_update, eval_guard, Assignment, CmpOp, GuardExpr, IntExpr, UpdateStmt, Valuation, VariableDecl,
};
pub use factors::{
    check_consistency, records_for_user, DisclosureRecord, Factor, FactorTriple, InformationType, RecipientRole,
    TrustSource,
};
pub use network::Network;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("variable `{variable}` would become {value}, outside [{min},{max}]")]
    BoundsViolation { variable: String, value: i64, min: i64, max: i64 },
    #[error("integer overflow evaluating `{0}`")]
    ArithmeticOverflow(String),
    #[error("invalid variable `{name}`: {reason}")]
    InvalidVariable { name: String, reason: String },
    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("automaton `{automaton}` has no location `{location}`")]
    UnknownLocation { automaton: String, location: String },
    #[error("automaton `{automaton}` must have exactly one initial location, found {count}")]
    InitialLocation { automaton: String, count: usize },
    #[error("location `{automaton}.{location}` cannot be both committed and urgent")]
    CommittedAndUrgent { automaton: String, location: String },
    #[error("process `{process}` uses undeclared channel `{channel}`")]
    UndeclaredChannel { process: String, channel: String },
    #[error("invalid select in `{automaton}`: {reason}")]
    InvalidSelect { automaton: String, reason: String },
    #[error("automaton `{automaton}` has no edge {edge}")]
    NoSuchEdge { automaton: String, edge: String },
    #[error("edge {edge} of `{automaton}` is ambiguous; name its channel")]
    AmbiguousEdge { automaton: String, edge: String },
    #[error("edge {edge} of `{automaton}` is already guarded")]
    AlreadyGuarded { automaton: String, edge: String },
    #[error("automaton `{automaton}` already has edge {edge}")]
    DuplicateEdge { automaton: String, edge: String },
    #[error("user {user} answered {triple} differently in scenarios {first_scenario} and {second_scenario}")]
    ConflictingRecords { user: String, triple: FactorTriple, first_scenario: u32, second_scenario: u32 },
}
