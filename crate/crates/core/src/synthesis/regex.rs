//! Regular expressions over the activity alphabet.

use std::collections::BTreeSet;
use std::fmt;

use super::alphabet::Symbol;
use super::SynthesisError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Regex {
    /// Matches nothing.
    Empty,
    Epsilon,
    Symbol(Symbol),
    Concat(Vec<Regex>),
    Union(Vec<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn word(w: &[Symbol]) -> Regex {
        match w {
            [] => Regex::Epsilon,
            [s] => Regex::Symbol(*s),
            _ => Regex::Concat(w.iter().map(|&s| Regex::Symbol(s)).collect()),
        }
    }

    /// Parses the textual form: juxtaposition for concatenation, `+` for
    /// choice, postfix `*`, parentheses, `ε` (or `()`) for the empty word
    /// and `∅` for the empty language. Whitespace is ignored.
    pub fn parse(text: &str) -> Result<Regex, SynthesisError> {
        let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut p = RegexParser { chars, pos: 0, len: text.len() };
        let r = p.union()?;
        if let Some(&(at, c)) = p.chars.get(p.pos) {
            return Err(SynthesisError::RegexSyntax { position: at, message: format!("unexpected `{c}`") });
        }
        Ok(r)
    }

    fn precedence(&self) -> u8 {
        match self {
            Regex::Union(_) => 0,
            Regex::Concat(_) => 1,
            _ => 2,
        }
    }
}

/// Plain union of the given words; the empty set gives [`Regex::Empty`].
pub fn build_union_regex<'a, I>(words: I) -> Regex
where
    I: IntoIterator<Item = &'a [Symbol]>,
{
    let distinct: BTreeSet<&[Symbol]> = words.into_iter().collect();
    let mut alts: Vec<Regex> = distinct.into_iter().map(Regex::word).collect();
    match alts.len() {
        0 => Regex::Empty,
        1 => alts.pop().expect("one alternative"),
        _ => Regex::Union(alts),
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regex::Empty => f.write_str("∅"),
            Regex::Epsilon => f.write_str("ε"),
            Regex::Symbol(s) => write!(f, "{s}"),
            Regex::Concat(xs) => {
                for x in xs {
                    if x.precedence() < 1 {
                        write!(f, "({x})")?;
                    } else {
                        write!(f, "{x}")?;
                    }
                }
                Ok(())
            }
            Regex::Union(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            Regex::Star(x) if x.precedence() < 2 => write!(f, "({x})*"),
            Regex::Star(x) => write!(f, "{x}*"),
        }
    }
}

struct RegexParser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl RegexParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(i, _)| i)
    }

    fn union(&mut self) -> Result<Regex, SynthesisError> {
        let mut alts = vec![self.concat()?];
        while self.peek() == Some('+') {
            self.pos += 1;
            alts.push(self.concat()?);
        }
        Ok(if alts.len() == 1 { alts.pop().expect("one") } else { Regex::Union(alts) })
    }

    fn concat(&mut self) -> Result<Regex, SynthesisError> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == '+' || c == ')' {
                break;
            }
            parts.push(self.postfix()?);
        }
        match parts.len() {
            0 => Err(SynthesisError::RegexSyntax {
                position: self.offset(),
                message: "expected an expression".into(),
            }),
            1 => Ok(parts.pop().expect("one")),
            _ => Ok(Regex::Concat(parts)),
        }
    }

    fn postfix(&mut self) -> Result<Regex, SynthesisError> {
        let mut r = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            r = Regex::Star(Box::new(r));
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex, SynthesisError> {
        let at = self.offset();
        let c = self.peek().ok_or(SynthesisError::RegexSyntax { position: at, message: "unexpected end".into() })?;
        self.pos += 1;
        match c {
            '(' => {
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(Regex::Epsilon);
                }
                let inner = self.union()?;
                if self.peek() != Some(')') {
                    return Err(SynthesisError::RegexSyntax { position: self.offset(), message: "expected `)`".into() });
                }
                self.pos += 1;
                Ok(inner)
            }
            'ε' => Ok(Regex::Epsilon),
            '∅' => Ok(Regex::Empty),
            c => Symbol::from_char(c).map(Regex::Symbol).ok_or(SynthesisError::RegexSyntax {
                position: at,
                message: format!("`{c}` is not in the alphabet"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::alphabet::word;

    #[test]
    fn union_of_words() {
        let ws: Vec<_> = ["rCa", "hAa", "fCb"].iter().map(|w| word(w).unwrap()).collect();
        let r = build_union_regex(ws.iter().map(Vec::as_slice));
        // sorted by symbol order: h < f < r
        assert_eq!(r.to_string(), "hAa+fCb+rCa");
        assert_eq!(build_union_regex(std::iter::empty()), Regex::Empty);
        let single = word("hAa").unwrap();
        assert_eq!(
            build_union_regex([single.as_slice()]),
            Regex::Concat(single.iter().map(|&s| Regex::Symbol(s)).collect())
        );
    }

    #[test]
    fn parse_and_print() {
        let r = Regex::parse("(rC+hA)a+fCb").unwrap();
        assert_eq!(r.to_string(), "(rC+hA)a+fCb");
        assert_eq!(Regex::parse(" h A a ").unwrap(), Regex::word(&word("hAa").unwrap()));
        assert_eq!(Regex::parse("(h+f)*a").unwrap().to_string(), "(h+f)*a");
        assert_eq!(Regex::parse("()").unwrap(), Regex::Epsilon);
        assert_eq!(Regex::parse("∅").unwrap(), Regex::Empty);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Regex::parse("hx"), Err(SynthesisError::RegexSyntax { position: 1, .. })));
        assert!(matches!(Regex::parse("(hA"), Err(SynthesisError::RegexSyntax { position: 3, .. })));
        assert!(Regex::parse("h+").is_err());
        assert!(Regex::parse("h)").is_err());
    }
}
