//! Lexer and recursive-descent parser for queries and model-file labels.
//!
//! ```text
//! query    := quant formula
//! quant    := "E<>" | "A[]" | "E[]" | "A<>"
//! formula  := conj ("or" conj)*
//! conj     := unary ("and" unary)*
//! unary    := "not" unary | "(" formula ")" | atom
//! atom     := IDENT "." IDENT | IDENT CMP INT | INT CMP IDENT
//!           | "deadlock" | "true" | "false"
//! update   := (IDENT ":=" expr ("," IDENT ":=" expr)*)?
//! select   := IDENT ":" "[" INT "," INT "]"
//! sync     := (IDENT "!" | IDENT "?")?
//! ```
//!
//! Keywords are case-insensitive, identifiers are not. `&&`, `||` and `!`
//! are accepted as spellings of and/or/not.

use std::fmt;

use thiserror::Error;

use super::ast::{QueryAst, Quantifier, StateFormula};
use crate::model::{Assignment, CmpOp, GuardExpr, IntExpr, Select, SyncAction, UpdateStmt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {}: {message}", position_text(*.position, *.at_end))]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub at_end: bool,
    pub message: String,
}

fn position_text(position: usize, at_end: bool) -> String {
    if at_end {
        "end of input".to_string()
    } else {
        format!("position {position}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Quant(Quantifier),
    Cmp(CmpOp),
    And,
    Or,
    Not,
    Deadlock,
    True,
    False,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Dot,
    Comma,
    Colon,
    Assign,
    Plus,
    Minus,
    Star,
    Question,
    LeadsTo,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(i) => write!(f, "integer {i}"),
            Tok::Quant(q) => write!(f, "`{q}`"),
            Tok::Cmp(op) => write!(f, "`{op}`"),
            Tok::And => f.write_str("`and`"),
            Tok::Or => f.write_str("`or`"),
            Tok::Not => f.write_str("`not`"),
            Tok::Deadlock => f.write_str("`deadlock`"),
            Tok::True => f.write_str("`true`"),
            Tok::False => f.write_str("`false`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Assign => f.write_str("`:=`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Question => f.write_str("`?`"),
            Tok::LeadsTo => f.write_str("`-->`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |position: usize, message: String| ParseError { position, at_end: false, message };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &text[i..];
        let two = rest.get(..2).unwrap_or("");
        let tok = if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let after = text.get(i..i + 2).unwrap_or("");
            match (word, after) {
                ("E", "<>") => Some(Tok::Quant(Quantifier::ExistsEventually)),
                ("A", "[]") => Some(Tok::Quant(Quantifier::ForAllGlobally)),
                ("E", "[]") => Some(Tok::Quant(Quantifier::ExistsGlobally)),
                ("A", "<>") => Some(Tok::Quant(Quantifier::ForAllEventually)),
                _ => None,
            }
            .inspect(|_| i += 2)
            .unwrap_or_else(|| match word.to_ascii_lowercase().as_str() {
                "and" => Tok::And,
                "or" => Tok::Or,
                "not" => Tok::Not,
                "deadlock" => Tok::Deadlock,
                "true" => Tok::True,
                "false" => Tok::False,
                _ => Tok::Ident(word.to_string()),
            })
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let digits = &text[start..i];
            Tok::Int(digits.parse().map_err(|_| err(start, format!("integer `{digits}` out of range")))?)
        } else if rest.starts_with("-->") {
            i += 3;
            Tok::LeadsTo
        } else {
            let (tok, len) = match two {
                "<=" => (Tok::Cmp(CmpOp::Le), 2),
                ">=" => (Tok::Cmp(CmpOp::Ge), 2),
                "==" => (Tok::Cmp(CmpOp::Eq), 2),
                "!=" => (Tok::Cmp(CmpOp::Ne), 2),
                ":=" => (Tok::Assign, 2),
                "&&" => (Tok::And, 2),
                "||" => (Tok::Or, 2),
                "->" => return Err(err(start, "unknown operator `->`".into())),
                _ => match c {
                    b'<' => (Tok::Cmp(CmpOp::Lt), 1),
                    b'>' => (Tok::Cmp(CmpOp::Gt), 1),
                    b'=' => (Tok::Assign, 1),
                    b'!' => (Tok::Not, 1),
                    b'(' => (Tok::LParen, 1),
                    b')' => (Tok::RParen, 1),
                    b'[' => (Tok::LBracket, 1),
                    b']' => (Tok::RBracket, 1),
                    b'.' => (Tok::Dot, 1),
                    b',' => (Tok::Comma, 1),
                    b':' => (Tok::Colon, 1),
                    b'+' => (Tok::Plus, 1),
                    b'-' => (Tok::Minus, 1),
                    b'*' => (Tok::Star, 1),
                    b'?' => (Tok::Question, 1),
                    _ => {
                        let ch = rest.chars().next().expect("non-empty");
                        return Err(err(start, format!("unexpected character `{ch}`")));
                    }
                },
            };
            i += len;
            tok
        };
        out.push((start, tok));
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Self { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (position, tok) = &self.toks[self.pos];
        ParseError { position: *position, at_end: *tok == Tok::Eof, message: message.into() }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Tok::LeadsTo => self.error("the leads-to operator `-->` is unsupported"),
            tok => self.error(format!("expected {wanted}, found {tok}")),
        }
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn ident(&mut self, wanted: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(if negative { -v } else { v })
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn formula(&mut self) -> Result<StateFormula, ParseError> {
        let mut parts = vec![self.conjunction()?];
        while *self.peek() == Tok::Or {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one") } else { StateFormula::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<StateFormula, ParseError> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one") } else { StateFormula::And(parts) })
    }

    fn unary(&mut self) -> Result<StateFormula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(StateFormula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Deadlock => {
                self.bump();
                Ok(StateFormula::Deadlock)
            }
            Tok::True => {
                self.bump();
                Ok(StateFormula::True)
            }
            Tok::False => {
                self.bump();
                Ok(StateFormula::False)
            }
            Tok::Ident(name) => {
                self.bump();
                match self.peek().clone() {
                    Tok::Dot => {
                        self.bump();
                        let location = self.ident("a location name")?;
                        Ok(StateFormula::Location { process: name, location })
                    }
                    Tok::Cmp(op) => {
                        self.bump();
                        let value = self.int()?;
                        Ok(StateFormula::VarCmp { var: name, op, value })
                    }
                    _ => Err(self.unexpected("`.` or a comparison")),
                }
            }
            Tok::Int(_) | Tok::Minus => {
                let value = self.int()?;
                let Tok::Cmp(op) = self.peek().clone() else {
                    return Err(self.unexpected("a comparison"));
                };
                self.bump();
                let var = self.ident("a variable name")?;
                Ok(StateFormula::VarCmp { var, op: op.flipped(), value })
            }
            _ => Err(self.unexpected("a state formula")),
        }
    }

    fn int_sum(&mut self) -> Result<IntExpr, ParseError> {
        let mut lhs = self.int_product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = IntExpr::add(lhs, self.int_product()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = IntExpr::sub(lhs, self.int_product()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn int_product(&mut self) -> Result<IntExpr, ParseError> {
        let mut lhs = self.int_unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = IntExpr::Mul(Box::new(lhs), Box::new(self.int_unary()?));
        }
        Ok(lhs)
    }

    fn int_unary(&mut self) -> Result<IntExpr, ParseError> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                if let Tok::Int(v) = *self.peek() {
                    self.bump();
                    return Ok(IntExpr::Const(-v));
                }
                Ok(IntExpr::Neg(Box::new(self.int_unary()?)))
            }
            Tok::Int(v) => {
                self.bump();
                Ok(IntExpr::Const(v))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(IntExpr::Var(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.int_sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.unexpected("an integer expression")),
        }
    }
}

/// Parses a complete query such as `E<> user.Share and not deadlock`.
pub fn parse_query(text: &str) -> Result<QueryAst, ParseError> {
    let mut p = Parser::new(text)?;
    let quantifier = match p.peek() {
        Tok::Quant(q) => *q,
        _ => return Err(p.unexpected("a path quantifier (E<>, A[], E[] or A<>)")),
    };
    p.bump();
    let body = p.formula()?;
    p.finish()?;
    Ok(QueryAst { quantifier, body })
}

/// Parses a bare state formula.
pub fn parse_formula(text: &str) -> Result<StateFormula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses an edge guard; an empty string is `true`.
pub fn parse_guard(text: &str) -> Result<GuardExpr, ParseError> {
    if text.trim().is_empty() {
        return Ok(GuardExpr::True);
    }
    let f = parse_formula(text)?;
    to_guard(f).map_err(|what| ParseError {
        position: 0,
        at_end: false,
        message: format!("{what} cannot appear in a guard"),
    })
}

fn to_guard(f: StateFormula) -> Result<GuardExpr, String> {
    Ok(match f {
        StateFormula::True => GuardExpr::True,
        StateFormula::False => GuardExpr::Not(Box::new(GuardExpr::True)),
        StateFormula::VarCmp { var, op, value } => GuardExpr::Cmp { var, op, value },
        StateFormula::And(xs) => GuardExpr::And(xs.into_iter().map(to_guard).collect::<Result<_, _>>()?),
        StateFormula::Or(xs) => GuardExpr::Or(xs.into_iter().map(to_guard).collect::<Result<_, _>>()?),
        StateFormula::Not(x) => GuardExpr::Not(Box::new(to_guard(*x)?)),
        StateFormula::Location { process, location } => return Err(format!("location `{process}.{location}`")),
        StateFormula::Deadlock => return Err("`deadlock`".into()),
    })
}

/// Parses a comma-separated assignment list; an empty string is no update.
pub fn parse_update(text: &str) -> Result<UpdateStmt, ParseError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    if *p.peek() == Tok::Eof {
        return Ok(UpdateStmt::empty());
    }
    loop {
        let var = p.ident("a variable name")?;
        p.expect(Tok::Assign, "`:=`")?;
        out.push(Assignment::new(var, p.int_sum()?));
        if *p.peek() == Tok::Comma {
            p.bump();
        } else {
            break;
        }
    }
    p.finish()?;
    Ok(UpdateStmt(out))
}

/// Parses `var : [lo,hi]`; an empty string means no select.
pub fn parse_select(text: &str) -> Result<Option<Select>, ParseError> {
    let mut p = Parser::new(text)?;
    if *p.peek() == Tok::Eof {
        return Ok(None);
    }
    let var = p.ident("a variable name")?;
    p.expect(Tok::Colon, "`:`")?;
    p.expect(Tok::LBracket, "`[`")?;
    let lo = p.int()?;
    p.expect(Tok::Comma, "`,`")?;
    let hi = p.int()?;
    p.expect(Tok::RBracket, "`]`")?;
    p.finish()?;
    Ok(Some(Select::new(var, lo, hi)))
}

/// Parses `chan!` or `chan?`; an empty string means no synchronisation.
pub fn parse_sync(text: &str) -> Result<SyncAction, ParseError> {
    let mut p = Parser::new(text)?;
    if *p.peek() == Tok::Eof {
        return Ok(SyncAction::None);
    }
    let channel = p.ident("a channel name")?;
    let sync = match p.peek() {
        Tok::Not => SyncAction::Emit(channel),
        Tok::Question => SyncAction::Receive(channel),
        _ => return Err(p.unexpected("`!` or `?`")),
    };
    p.bump();
    p.finish()?;
    Ok(sync)
}
