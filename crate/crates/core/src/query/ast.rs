use std::fmt;

use crate::model::CmpOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    /// `E<>`
    ExistsEventually,
    /// `A[]`
    ForAllGlobally,
    /// `E[]`
    ExistsGlobally,
    /// `A<>`
    ForAllEventually,
}

impl Quantifier {
    pub const ALL: [Quantifier; 4] = [
        Quantifier::ExistsEventually,
        Quantifier::ForAllGlobally,
        Quantifier::ExistsGlobally,
        Quantifier::ForAllEventually,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Quantifier::ExistsEventually => "E<>",
            Quantifier::ForAllGlobally => "A[]",
            Quantifier::ExistsGlobally => "E[]",
            Quantifier::ForAllEventually => "A<>",
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Unbound state formula, as written.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StateFormula {
    True,
    False,
    Location { process: String, location: String },
    VarCmp { var: String, op: CmpOp, value: i64 },
    Deadlock,
    And(Vec<StateFormula>),
    Or(Vec<StateFormula>),
    Not(Box<StateFormula>),
}

impl StateFormula {
    pub fn location(process: impl Into<String>, location: impl Into<String>) -> Self {
        StateFormula::Location { process: process.into(), location: location.into() }
    }

    pub fn not(inner: StateFormula) -> Self {
        StateFormula::Not(Box::new(inner))
    }

    fn precedence(&self) -> u8 {
        match self {
            StateFormula::Or(_) => 0,
            StateFormula::And(_) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for StateFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, xs: &[StateFormula], sep: &str, wrap_at: u8| {
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                if x.precedence() <= wrap_at {
                    write!(f, "({x})")?;
                } else {
                    write!(f, "{x}")?;
                }
            }
            Ok(())
        };
        match self {
            StateFormula::True => f.write_str("true"),
            StateFormula::False => f.write_str("false"),
            StateFormula::Location { process, location } => write!(f, "{process}.{location}"),
            StateFormula::VarCmp { var, op, value } => write!(f, "{var} {op} {value}"),
            StateFormula::Deadlock => f.write_str("deadlock"),
            StateFormula::And(xs) => join(f, xs, " and ", 1),
            StateFormula::Or(xs) => join(f, xs, " or ", 0),
            StateFormula::Not(x) if x.precedence() < 2 => write!(f, "not ({x})"),
            StateFormula::Not(x) => write!(f, "not {x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueryAst {
    pub quantifier: Quantifier,
    pub body: StateFormula,
}

impl fmt::Display for QueryAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.quantifier, self.body)
    }
}
