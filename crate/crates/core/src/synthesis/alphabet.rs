use std::fmt;

use crate::model::{Factor, FactorTriple, InformationType, RecipientRole, TrustSource};

pub const ALPHABET_SIZE: usize = 11;

const SYMBOL_CHARS: [char; ALPHABET_SIZE] = ['h', 'f', 'r', 'A', 'B', 'C', 'D', 'a', 'b', 'c', 'd'];

/// One letter of the 11-symbol activity alphabet.
///
/// Symbols are ordered h, f, r, A, B, C, D, a, b, c, d; that order drives every
/// deterministic iteration in the synthesis pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u8);

/// Which factor a symbol encodes, i.e. its position in a 3-letter word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolClass {
    InformationType,
    TrustSource,
    RecipientRole,
}

impl SymbolClass {
    pub fn position(self) -> usize {
        match self {
            SymbolClass::InformationType => 0,
            SymbolClass::TrustSource => 1,
            SymbolClass::RecipientRole => 2,
        }
    }
}

impl Symbol {
    pub fn all() -> impl Iterator<Item = Symbol> + Clone {
        (0..ALPHABET_SIZE as u8).map(Symbol)
    }

    pub fn from_index(i: usize) -> Option<Symbol> {
        (i < ALPHABET_SIZE).then_some(Symbol(i as u8))
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        SYMBOL_CHARS.iter().position(|&s| s == c).map(|i| Symbol(i as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn as_char(self) -> char {
        SYMBOL_CHARS[self.index()]
    }

    pub fn class(self) -> SymbolClass {
        match self.0 {
            0..=2 => SymbolClass::InformationType,
            3..=6 => SymbolClass::TrustSource,
            _ => SymbolClass::RecipientRole,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Parses a string of alphabet characters.
pub fn word(s: &str) -> Option<Vec<Symbol>> {
    s.chars().map(Symbol::from_char).collect()
}

pub fn word_to_string(w: &[Symbol]) -> String {
    w.iter().map(|s| s.as_char()).collect()
}

/// Factor-to-symbol and symbol-to-channel tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolMapping {
    info: [Symbol; 3],
    trust: [Symbol; 4],
    recipient: [Symbol; 4],
    channels: [String; ALPHABET_SIZE],
    done: String,
}

impl Default for SymbolMapping {
    fn default() -> Self {
        Self::standard()
    }
}

impl SymbolMapping {
    /// h/f/r, A-D and a-d in factor order, with the observer channel names.
    pub fn standard() -> Self {
        let s = |c| Symbol::from_char(c).expect("alphabet char");
        let channels = [
            "health",
            "finance",
            "relationship",
            "t_family",
            "t_friend",
            "t_expert",
            "t_self",
            "r_family",
            "r_friend",
            "r_colleague",
            "r_online",
        ]
        .map(String::from);
        Self {
            info: [s('h'), s('f'), s('r')],
            trust: [s('A'), s('B'), s('C'), s('D')],
            recipient: [s('a'), s('b'), s('c'), s('d')],
            channels,
            done: "done".to_string(),
        }
    }

    pub fn info_symbol(&self, it: InformationType) -> Symbol {
        self.info[index_of(InformationType::ALL, it)]
    }

    pub fn trust_symbol(&self, ts: TrustSource) -> Symbol {
        self.trust[index_of(TrustSource::ALL, ts)]
    }

    pub fn recipient_symbol(&self, rr: RecipientRole) -> Symbol {
        self.recipient[index_of(RecipientRole::ALL, rr)]
    }

    pub fn triple_word(&self, t: FactorTriple) -> [Symbol; 3] {
        [self.info_symbol(t.info_type), self.trust_symbol(t.trust_source), self.recipient_symbol(t.recipient_role)]
    }

    /// Inverse of [`Self::triple_word`].
    pub fn decode(&self, w: &[Symbol]) -> Option<FactorTriple> {
        let [a, b, c] = w else { return None };
        let it = InformationType::ALL[self.info.iter().position(|s| s == a)?];
        let ts = TrustSource::ALL[self.trust.iter().position(|s| s == b)?];
        let rr = RecipientRole::ALL[self.recipient.iter().position(|s| s == c)?];
        Some(FactorTriple::new(it, ts, rr))
    }

    pub fn channel(&self, s: Symbol) -> &str {
        &self.channels[s.index()]
    }

    pub fn info_channel(&self, it: InformationType) -> &str {
        self.channel(self.info_symbol(it))
    }

    pub fn trust_channel(&self, ts: TrustSource) -> &str {
        self.channel(self.trust_symbol(ts))
    }

    pub fn recipient_channel(&self, rr: RecipientRole) -> &str {
        self.channel(self.recipient_symbol(rr))
    }

    pub fn done_channel(&self) -> &str {
        &self.done
    }

    /// Channels for one activity, in emission order.
    pub fn triple_channels(&self, t: FactorTriple) -> [&str; 3] {
        self.triple_word(t).map(|s| self.channel(s))
    }
}

fn index_of<T: PartialEq>(all: &[T], v: T) -> usize {
    all.iter().position(|x| *x == v).expect("enumeration value")
}
