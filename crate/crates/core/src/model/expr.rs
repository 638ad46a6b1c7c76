//! Integer variables, guard expressions and update statements.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// A bounded integer variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableDecl {
    pub name: String,
    pub min: i64,
    pub max: i64,
    pub init: i64,
}

impl VariableDecl {
    pub fn new(name: impl Into<String>, min: i64, max: i64, init: i64) -> Result<Self, ModelError> {
        let decl = Self { name: name.into(), min, max, init };
        decl.validate()?;
        Ok(decl)
    }

    pub(crate) fn validate(&self) -> Result<(), ModelError> {
        if !(self.min <= self.init && self.init <= self.max) {
            return Err(ModelError::InvalidVariable {
                name: self.name.clone(),
                reason: format!("requires min <= init <= max, got {} <= {} <= {}", self.min, self.init, self.max),
            });
        }
        Ok(())
    }

    pub fn contains(&self, value: i64) -> bool {
        self.min <= value && value <= self.max
    }
}

/// Assignment of a value to every declared variable.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation(BTreeMap<String, i64>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every variable at its declared initial value.
    pub fn initial(decls: &[VariableDecl]) -> Self {
        Self(decls.iter().map(|d| (d.name.clone(), d.init)).collect())
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.0.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<i64, ModelError> {
        self.get(name).ok_or_else(|| ModelError::UndeclaredVariable(name.to_string()))
    }

    pub fn set(&mut self, name: impl Into<String>, value: i64) {
        self.0.insert(name.into(), value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Writes `value` into `name` after checking the declared range.
    pub fn assign(&mut self, decls: &[VariableDecl], name: &str, value: i64) -> Result<(), ModelError> {
        let decl = decls
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| ModelError::UndeclaredVariable(name.to_string()))?;
        if !decl.contains(value) {
            return Err(ModelError::BoundsViolation {
                variable: name.to_string(),
                value,
                min: decl.min,
                max: decl.max,
            });
        }
        self.0.insert(name.to_string(), value);
        Ok(())
    }
}

impl<S: Into<String>> FromIterator<(S, i64)> for Valuation {
    fn from_iter<T: IntoIterator<Item = (S, i64)>>(iter: T) -> Self {
        Self(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn apply(self, lhs: i64, rhs: i64) -> bool {
        match self {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }

    /// The operator that gives the same result with operands swapped.
    pub fn flipped(self) -> Self {
        match self {
            CmpOp::Lt => CmpOp::Gt,
            CmpOp::Le => CmpOp::Ge,
            CmpOp::Gt => CmpOp::Lt,
            CmpOp::Ge => CmpOp::Le,
            other => other,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Boolean condition over integer variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GuardExpr {
    True,
    Cmp { var: String, op: CmpOp, value: i64 },
    And(Vec<GuardExpr>),
    Or(Vec<GuardExpr>),
    Not(Box<GuardExpr>),
}

impl GuardExpr {
    pub fn cmp(var: impl Into<String>, op: CmpOp, value: i64) -> Self {
        GuardExpr::Cmp { var: var.into(), op, value }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, GuardExpr::True)
    }

    /// Variables referenced anywhere in the expression.
    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            GuardExpr::True => {}
            GuardExpr::Cmp { var, .. } => out.push(var),
            GuardExpr::And(xs) | GuardExpr::Or(xs) => xs.iter().for_each(|x| x.collect_vars(out)),
            GuardExpr::Not(x) => x.collect_vars(out),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            GuardExpr::Or(_) => 0,
            GuardExpr::And(_) => 1,
            _ => 2,
        }
    }
}

/// Evaluates a guard under `valuation`.
pub fn eval_guard(guard: &GuardExpr, valuation: &Valuation) -> Result<bool, ModelError> {
    Ok(match guard {
        GuardExpr::True => true,
        GuardExpr::Cmp { var, op, value } => op.apply(valuation.lookup(var)?, *value),
        GuardExpr::And(xs) => {
            for x in xs {
                if !eval_guard(x, valuation)? {
                    return Ok(false);
                }
            }
            true
        }
        GuardExpr::Or(xs) => {
            for x in xs {
                if eval_guard(x, valuation)? {
                    return Ok(true);
                }
            }
            false
        }
        GuardExpr::Not(x) => !eval_guard(x, valuation)?,
    })
}

fn write_joined<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: &[T],
    sep: &str,
    wrap: impl Fn(&T) -> bool,
) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        if wrap(item) {
            write!(f, "({item})")?;
        } else {
            write!(f, "{item}")?;
        }
    }
    Ok(())
}

impl fmt::Display for GuardExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuardExpr::True => f.write_str("true"),
            GuardExpr::Cmp { var, op, value } => write!(f, "{var} {op} {value}"),
            GuardExpr::And(xs) => write_joined(f, xs, " and ", |x| x.precedence() <= 1),
            GuardExpr::Or(xs) => write_joined(f, xs, " or ", |x| x.precedence() == 0),
            GuardExpr::Not(x) if x.precedence() < 2 => write!(f, "not ({x})"),
            GuardExpr::Not(x) => write!(f, "not {x}"),
        }
    }
}

/// Integer-valued expression used on the right-hand side of assignments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IntExpr {
    Const(i64),
    Var(String),
    Neg(Box<IntExpr>),
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
}

impl IntExpr {
    pub fn var(name: impl Into<String>) -> Self {
        IntExpr::Var(name.into())
    }

    pub fn add(lhs: IntExpr, rhs: IntExpr) -> Self {
        IntExpr::Add(Box::new(lhs), Box::new(rhs))
    }

    pub fn sub(lhs: IntExpr, rhs: IntExpr) -> Self {
        IntExpr::Sub(Box::new(lhs), Box::new(rhs))
    }

    pub fn eval(&self, valuation: &Valuation) -> Result<i64, ModelError> {
        let overflow = || ModelError::ArithmeticOverflow(self.to_string());
        Ok(match self {
            IntExpr::Const(c) => *c,
            IntExpr::Var(v) => valuation.lookup(v)?,
            IntExpr::Neg(x) => x.eval(valuation)?.checked_neg().ok_or_else(overflow)?,
            IntExpr::Add(a, b) => a.eval(valuation)?.checked_add(b.eval(valuation)?).ok_or_else(overflow)?,
            IntExpr::Sub(a, b) => a.eval(valuation)?.checked_sub(b.eval(valuation)?).ok_or_else(overflow)?,
            IntExpr::Mul(a, b) => a.eval(valuation)?.checked_mul(b.eval(valuation)?).ok_or_else(overflow)?,
        })
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            IntExpr::Const(_) => {}
            IntExpr::Var(v) => out.push(v),
            IntExpr::Neg(x) => x.collect_vars(out),
            IntExpr::Add(a, b) | IntExpr::Sub(a, b) | IntExpr::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            IntExpr::Add(..) | IntExpr::Sub(..) => 0,
            IntExpr::Mul(..) => 1,
            IntExpr::Neg(_) => 2,
            IntExpr::Const(c) if *c < 0 => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for IntExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Left operands bind at the same level, right operands need strictly higher.
        let side = |f: &mut fmt::Formatter<'_>, e: &IntExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            IntExpr::Const(c) => write!(f, "{c}"),
            IntExpr::Var(v) => f.write_str(v),
            IntExpr::Neg(x) => {
                f.write_str("-")?;
                side(f, x, 3)
            }
            IntExpr::Add(a, b) => {
                side(f, a, 0)?;
                f.write_str(" + ")?;
                side(f, b, 1)
            }
            IntExpr::Sub(a, b) => {
                side(f, a, 0)?;
                f.write_str(" - ")?;
                side(f, b, 1)
            }
            IntExpr::Mul(a, b) => {
                side(f, a, 1)?;
                f.write_str(" * ")?;
                side(f, b, 2)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub var: String,
    pub value: IntExpr,
}

impl Assignment {
    pub fn new(var: impl Into<String>, value: IntExpr) -> Self {
        Self { var: var.into(), value }
    }
}

/// Ordered list of assignments, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct UpdateStmt(pub Vec<Assignment>);

impl UpdateStmt {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn single(var: impl Into<String>, value: IntExpr) -> Self {
        Self(vec![Assignment::new(var, value)])
    }

    /// `var := var + 1`
    pub fn increment(var: &str) -> Self {
        Self::single(var, IntExpr::add(IntExpr::var(var), IntExpr::Const(1)))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn assignments(&self) -> &[Assignment] {
        &self.0
    }

    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for a in &self.0 {
            out.push(a.var.as_str());
            a.value.collect_vars(&mut out);
        }
        out
    }
}

impl fmt::Display for UpdateStmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} := {}", a.var, a.value)?;
        }
        Ok(())
    }
}

/// Applies `update` to a copy of `valuation`.
pub fn apply_update(
    update: &UpdateStmt,
    valuation: &Valuation,
    decls: &[VariableDecl],
) -> Result<Valuation, ModelError> {
    let mut next = valuation.clone();
    for a in &update.0 {
        let value = a.value.eval(&next)?;
        next.assign(decls, &a.var, value)?;
    }
    Ok(next)
}
