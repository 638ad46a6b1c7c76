//! The CTL-subset query language: one path quantifier over a state formula.

mod ast;
mod bind;
mod parser;

pub use ast::{QueryAst, Quantifier, StateFormula};
pub use bind::{bind, bind_formula, eval_formula, BindError, BoundFormula, BoundQuery};
pub use parser::{parse_formula, parse_guard, parse_query, parse_select, parse_sync, parse_update, ParseError};
