//! The three integer sequences and binary-word utilities.
//!
//! * ruler sequence `a[n]`: the 2-adic valuation of `n`,
//! * period-doubling sequence `b[n] = a[n] mod 2`,
//! * run count `c[n]`: number of maximal constant blocks in the binary
//!   expansion of `n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest word a [`BinaryWord`] can hold.
pub const MAX_WORD_LEN: usize = 64;

/// A fixed-length bit string, most significant digit first.
///
/// Leading zeros are significant: `00101` and `101` are different words with
/// the same numeric value. Positions are 1-based, position 1 being the most
/// significant digit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryWord {
    bits: u64,
    len: u32,
}

impl BinaryWord {
    /// The empty word.
    pub const EMPTY: BinaryWord = BinaryWord { bits: 0, len: 0 };

    /// Builds a word of `len` digits holding the low `len` bits of `bits`.
    pub fn from_raw(bits: u64, len: u32) -> Result<Self> {
        if len as usize > MAX_WORD_LEN {
            return Err(Error::WordTooLong {
                len: len as usize,
                max: MAX_WORD_LEN,
            });
        }
        Ok(BinaryWord {
            bits: bits & low_mask(len),
            len,
        })
    }

    pub fn zeros(len: u32) -> Result<Self> {
        Self::from_raw(0, len)
    }

    pub fn ones(len: u32) -> Result<Self> {
        Self::from_raw(u64::MAX, len)
    }

    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        if digits.len() > MAX_WORD_LEN {
            return Err(Error::WordTooLong {
                len: digits.len(),
                max: MAX_WORD_LEN,
            });
        }
        let mut bits = 0u64;
        for &d in digits {
            match d {
                0 | 1 => bits = (bits << 1) | d as u64,
                _ => return Err(Error::InvalidDigit(char::from(b'0' + d.min(9)))),
            }
        }
        Ok(BinaryWord {
            bits,
            len: digits.len() as u32,
        })
    }

    /// Numeric value of the word; leading zeros contribute nothing.
    pub fn value(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Digit at 1-based position `pos` (position 1 is the leading digit).
    pub fn get(&self, pos: u32) -> u8 {
        assert!(
            pos >= 1 && pos <= self.len,
            "position {pos} out of range 1..={}",
            self.len
        );
        ((self.bits >> (self.len - pos)) & 1) as u8
    }

    pub fn digits(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=self.len).map(move |p| self.get(p))
    }

    pub fn to_digits(&self) -> Vec<u8> {
        self.digits().collect()
    }

    /// True when the word is a canonical binary expansion: nonempty with a
    /// leading 1.
    pub fn is_canonical(&self) -> bool {
        self.len > 0 && self.get(1) == 1
    }

    /// Position-wise exclusive-or. Both words must have the same length.
    pub fn xor(&self, other: &BinaryWord) -> Result<BinaryWord> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                mask: other.len,
                word: self.len,
            });
        }
        Ok(BinaryWord {
            bits: self.bits ^ other.bits,
            len: self.len,
        })
    }

    /// Left-pads with zeros to `len` digits. Never truncates.
    pub fn padded(&self, len: u32) -> Result<BinaryWord> {
        if len < self.len {
            return Ok(*self);
        }
        Self::from_raw(self.bits, len)
    }

    /// Number of maximal constant blocks, counted after stripping leading
    /// zeros; the zero word has 0 runs.
    pub fn value_run_count(&self) -> u32 {
        runs_of_value(self.bits)
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.digits() {
            f.write_str(if d == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWord({self})")
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidDigit(other)),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_digits(&digits)
    }
}

/// Run-length encoding of a nonempty word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunEncoding {
    pub first_bit: u8,
    pub run_lengths: Vec<u32>,
}

impl RunEncoding {
    pub fn run_count(&self) -> usize {
        self.run_lengths.len()
    }

    pub fn total_len(&self) -> u32 {
        self.run_lengths.iter().sum()
    }
}

/// The sequences this crate generates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeqId {
    Ruler,
    PeriodDoubling,
    RunCount,
}

impl SeqId {
    pub fn value(self, n: u64) -> Result<u32> {
        match self {
            SeqId::Ruler => ruler(n),
            SeqId::PeriodDoubling => period_doubling(n).map(u32::from),
            SeqId::RunCount => run_count(n),
        }
    }
}

#[inline]
fn low_mask(len: u32) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Number of binary digits of `n` (0 for `n = 0`).
#[inline]
pub fn bit_length(n: u64) -> u32 {
    64 - n.leading_zeros()
}

#[inline]
pub(crate) fn runs_of_value(n: u64) -> u32 {
    // Each set bit of n ^ (n >> 1) marks the top of a run.
    (n ^ (n >> 1)).count_ones()
}

/// `a[n]`: exponent of the largest power of two dividing `n`.
pub fn ruler(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    Ok(n.trailing_zeros())
}

/// `b[n] = a[n] mod 2`.
pub fn period_doubling(n: u64) -> Result<u8> {
    ruler(n).map(|e| (e & 1) as u8)
}

/// `c[n]`: number of runs in the binary expansion of `n`.
pub fn run_count(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    Ok(runs_of_value(n))
}

/// Binary expansion of `n` without leading zeros.
pub fn to_binary(n: u64) -> Result<BinaryWord> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    BinaryWord::from_raw(n, bit_length(n))
}

/// Positional value of `w`; leading zeros are allowed.
pub fn from_binary(w: &BinaryWord) -> u64 {
    w.value()
}

pub fn run_encode(w: &BinaryWord) -> Result<RunEncoding> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut digits = w.digits();
    let first_bit = digits.next().unwrap_or(0);
    let mut run_lengths = vec![1u32];
    let mut prev = first_bit;
    for d in digits {
        if d == prev {
            *run_lengths.last_mut().unwrap() += 1;
        } else {
            run_lengths.push(1);
            prev = d;
        }
    }
    Ok(RunEncoding {
        first_bit,
        run_lengths,
    })
}

/// `seq(1..=n)`; index `i` lives in slot `i - 1`.
pub fn generate_prefix(seq: SeqId, n: u64) -> Result<Vec<u32>> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    let len = usize::try_from(n).map_err(|_| Error::Allocation(usize::MAX))?;
    let mut out = Vec::new();
    out.try_reserve_exact(len)
        .map_err(|_| Error::Allocation(len))?;
    // n >= 1 on every iteration, so the unwraps below cannot fire.
    out.extend((1..=n).map(|i| seq.value(i).unwrap()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn ruler_values() {
        assert_eq!(ruler(8), Ok(3));
        assert_eq!(ruler(6), Ok(1));
        assert_eq!(ruler(1 << 30), Ok(30));
        assert_eq!(ruler(0), Err(Error::ZeroIndex));
    }

    #[test]
    fn period_doubling_values() {
        assert_eq!(period_doubling(2), Ok(1));
        assert_eq!(period_doubling(4), Ok(0));
        for k in 0..32 {
            assert_eq!(period_doubling(1u64 << (2 * k)), Ok(0));
        }
        assert!(period_doubling(0).is_err());
    }

    #[test]
    fn run_count_values() {
        assert_eq!(run_count(1000), Ok(4));
        assert_eq!(run_count(10), Ok(4));
        for k in 1..64 {
            assert_eq!(run_count(1u64 << k), Ok(2));
        }
        assert!(run_count(0).is_err());
    }

    #[test]
    fn binary_expansions() {
        assert_eq!(to_binary(17).unwrap().to_digits(), vec![1, 0, 0, 0, 1]);
        assert_eq!(
            to_binary(1000).unwrap().to_digits(),
            vec![1, 1, 1, 1, 1, 0, 1, 0, 0, 0]
        );
        assert_eq!(from_binary(&w("00000")), 0);
        assert_eq!(from_binary(&w("0011")), 3);
        assert!(to_binary(0).is_err());
        assert_eq!(to_binary(u64::MAX).unwrap().len(), 64);
    }

    #[test]
    fn run_encodings() {
        let enc = run_encode(&w("10001")).unwrap();
        assert_eq!((enc.first_bit, enc.run_lengths), (1, vec![1, 3, 1]));
        let enc = run_encode(&w("111")).unwrap();
        assert_eq!((enc.first_bit, enc.run_lengths), (1, vec![3]));
        let enc = run_encode(&w("1111101000")).unwrap();
        assert_eq!((enc.first_bit, enc.run_lengths), (1, vec![5, 1, 1, 3]));
        assert_eq!(run_encode(&BinaryWord::EMPTY), Err(Error::EmptyWord));
    }

    #[test]
    fn prefixes() {
        assert_eq!(
            generate_prefix(SeqId::Ruler, 8).unwrap(),
            vec![0, 1, 0, 2, 0, 1, 0, 3]
        );
        assert_eq!(
            generate_prefix(SeqId::PeriodDoubling, 8).unwrap(),
            vec![0, 1, 0, 0, 0, 1, 0, 1]
        );
        assert_eq!(
            generate_prefix(SeqId::RunCount, 8).unwrap(),
            vec![1, 2, 1, 2, 3, 2, 1, 2]
        );
        assert!(generate_prefix(SeqId::Ruler, 0).is_err());
    }

    #[test]
    fn word_parsing_rejects_junk() {
        assert_eq!("102".parse::<BinaryWord>(), Err(Error::InvalidDigit('2')));
        assert!(BinaryWord::from_digits(&[1; 65]).is_err());
        assert_eq!(w("0101").to_string(), "0101");
    }

    #[test]
    fn exhaustive_small_invariants() {
        for n in 1..=(1u64 << 16) {
            let r = ruler(n).unwrap();
            assert_eq!(period_doubling(n).unwrap() as u32, r % 2);
            let c = run_count(n).unwrap();
            assert_eq!(c as u64 % 2, n % 2, "run parity at {n}");
            assert_eq!(
                c as usize,
                run_encode(&to_binary(n).unwrap()).unwrap().run_count()
            );
            if n >= 2 {
                let prev = run_count(n - 1).unwrap();
                assert_eq!(c.abs_diff(prev), 1, "step at {n}");
            }
        }
    }

    #[test]
    fn valuation_translation() {
        // a[x] < a[y] implies a[x + i*y] = a[x].
        for x in 1..=64u64 {
            for y in 1..=64u64 {
                if ruler(x).unwrap() < ruler(y).unwrap() {
                    for i in 0..16 {
                        assert_eq!(ruler(x + i * y), ruler(x));
                    }
                }
            }
        }
    }
}
