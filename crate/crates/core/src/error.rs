use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index must be positive (got 0)")]
    ZeroIndex,

    #[error("word is empty")]
    EmptyWord,

    #[error("word length {len} exceeds the supported maximum of {max} bits")]
    WordTooLong { len: usize, max: usize },

    #[error("invalid binary digit {0:?}")]
    InvalidDigit(char),

    #[error("word {word} has a leading zero but is not the zero word")]
    LeadingZero { word: String },

    #[error("length mismatch: mask has length {mask}, word has length {word}")]
    LengthMismatch { mask: u32, word: u32 },

    #[error("invalid type A mask: length {len}, t = {t} (need 0 <= t <= length, length >= 1)")]
    InvalidMaskA { len: u32, t: u32 },

    #[error("invalid type B mask: length {len}, t = {t}, s = {s} (need t >= 1, s >= 2, t + s <= length)")]
    InvalidMaskB { len: u32, t: u32, s: u32 },

    #[error("expected a type B mask")]
    NotTypeB,

    #[error("word length {len} exceeds max_len {max_len}; raise max_len to search longer words (cost grows as 2^len)")]
    SearchTooLarge { len: u32, max_len: u32 },

    #[error("factor [{i}, {j}] is not a palindromic suffix ending at {n}")]
    NotPalSuffix { n: u64, i: u64, j: u64 },

    #[error("oracle input of length {len} exceeds the oracle bound {bound}")]
    Oversize { len: usize, bound: usize },

    #[error("cannot allocate {0} entries")]
    Allocation(usize),

    #[error("level value must be at least 1")]
    ZeroLevel,

    #[error("malformed automaton text at line {line}: {msg}")]
    DfaParse { line: usize, msg: String },

    #[error("invalid automaton: {0}")]
    InvalidDfa(String),
}
