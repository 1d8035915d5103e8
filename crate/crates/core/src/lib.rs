//! Palindromic length of the ruler sequence and the period-doubling sequence.
//!
//! The crate is organised bottom-up:
//!
//! * [`bitseq`] generates the ruler sequence `a`, the period-doubling sequence
//!   `b` and the binary run count `c`, and holds the [`BinaryWord`] type.
//! * [`maskcalc`] implements suffix-flip masks (type A), the three-flip masks
//!   (type B) and minimum-mask solvers.
//! * [`palfactor`] decides which factors of `a` and `b` are palindromes in
//!   closed form and maps palindromic suffixes to masks.
//! * [`pallen`] builds palindromic-length tables, both by brute force and via
//!   the closed forms.
//! * [`levelang`] checks and learns finite automata for level sets.
//!
//! All indices are 1-based: `a[1] = 0`, `a[2] = 1`, and so on.

pub mod bitseq;
mod error;
pub mod levelang;
pub mod maskcalc;
pub mod palfactor;
pub mod pallen;

pub use bitseq::{BinaryWord, RunEncoding, SeqId};
pub use error::{Error, Result};
pub use levelang::{Dfa, LevelSet};
pub use maskcalc::{MaskKind, MaskOp, OpSequence};
pub use palfactor::{PalFactor, PalForm, PalSeq};
pub use pallen::PalLengthTable;
