//! Palindromic factors of the ruler sequence `a` and the period-doubling
//! sequence `b`.
//!
//! Every factor `[i, j]` has a unique position `t` of maximal valuation.
//! A factor of `a` is a palindrome exactly when `t` is its centre. A factor of
//! `b` is a palindrome exactly when either `t` is its centre, or the mirror
//! image of `t` sits at distance `2^v2` from it, the overhang `x` on the far
//! side stays below `2^v2`, and `v1 - v2` is even (so both ends carry the
//! same letter).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bitseq::{bit_length, to_binary, BinaryWord};
use crate::error::{Error, Result};
use crate::maskcalc::{apply_mask, MaskOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PalSeq {
    /// The ruler sequence.
    A,
    /// The period-doubling sequence.
    B,
}

/// How a palindromic factor is parameterised.
///
/// `o` is always odd; `o * 2^v` (or `o * 2^v1`) is the position of maximal
/// valuation inside the factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum PalForm {
    /// `[o*2^v, o*2^v]`.
    Singleton { o: u64, v: u32 },
    /// `[o*2^v - x, o*2^v + x]` with `1 <= x < 2^v`.
    ACenter { o: u64, v: u32, x: u64 },
    /// `[o*2^v1 - x, o*2^v1 + 2^v2 + x]` with `v1 > v2`, `x < 2^v2`.
    BRight { o: u64, v1: u32, v2: u32, x: u64 },
    /// `[o*2^v1 - 2^v2 - x, o*2^v1 + x]` with `v1 > v2`, `x < 2^v2`.
    BLeft { o: u64, v1: u32, v2: u32, x: u64 },
}

impl PalForm {
    /// The interval `[i, j]` this parameterisation describes.
    pub fn interval(&self) -> (u64, u64) {
        match *self {
            PalForm::Singleton { o, v } => (o << v, o << v),
            PalForm::ACenter { o, v, x } => ((o << v) - x, (o << v) + x),
            PalForm::BRight { o, v1, v2, x } => ((o << v1) - x, (o << v1) + (1 << v2) + x),
            PalForm::BLeft { o, v1, v2, x } => ((o << v1) - (1 << v2) - x, (o << v1) + x),
        }
    }

    pub fn is_a_palindrome(&self) -> bool {
        matches!(self, PalForm::Singleton { .. } | PalForm::ACenter { .. })
    }
}

/// A palindromic factor `[i, j]` (1-based, inclusive) with its witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PalFactor {
    pub i: u64,
    pub j: u64,
    #[serde(flatten)]
    pub form: PalForm,
}

impl PalFactor {
    fn from_form(form: PalForm) -> Self {
        let (i, j) = form.interval();
        PalFactor { i, j, form }
    }

    pub fn len(&self) -> u64 {
        self.j - self.i + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[inline]
fn below_pow2(x: u64, e: u32) -> bool {
    e >= 64 || x >> e == 0
}

#[inline]
fn low(e: u32) -> u64 {
    if e >= 64 {
        u64::MAX
    } else {
        (1u64 << e) - 1
    }
}

fn check_interval(i: u64, j: u64) {
    assert!(i >= 1 && i <= j, "need 1 <= i <= j, got [{i}, {j}]");
}

/// Witness for `a[i..=j]` being a palindrome, if it is one.
pub fn classify_a(i: u64, j: u64) -> Option<PalFactor> {
    check_interval(i, j);
    // (i + j) / 2 without overflow.
    if !(j - i).is_multiple_of(2) {
        return None;
    }
    let x = (j - i) / 2;
    let m = i + x;
    let v = m.trailing_zeros();
    if !below_pow2(x, v) {
        return None;
    }
    let o = m >> v;
    Some(PalFactor {
        i,
        j,
        form: if x == 0 {
            PalForm::Singleton { o, v }
        } else {
            PalForm::ACenter { o, v, x }
        },
    })
}

/// Witness for `b[i..=j]` being a palindrome, if it is one.
pub fn classify_b(i: u64, j: u64) -> Option<PalFactor> {
    if let Some(f) = classify_a(i, j) {
        return Some(f);
    }
    // Highest bit where i - 1 and j differ is the largest valuation in [i, j];
    // clearing j below it gives the unique position t attaining it.
    let v1 = 63 - ((i - 1) ^ j).leading_zeros();
    let t = (j >> v1) << v1;
    let o = t >> v1;
    let right_arm = j - t;
    let left_arm = t - i;
    let (d, x, right) = if right_arm > left_arm {
        (right_arm - left_arm, left_arm, true)
    } else {
        (left_arm - right_arm, right_arm, false)
    };
    if !d.is_power_of_two() {
        return None;
    }
    let v2 = d.trailing_zeros();
    if v2 >= v1 || !(v1 - v2).is_multiple_of(2) || !below_pow2(x, v2) {
        return None;
    }
    let form = if right {
        PalForm::BRight { o, v1, v2, x }
    } else {
        PalForm::BLeft { o, v1, v2, x }
    };
    debug_assert_eq!(form.interval(), (i, j));
    Some(PalFactor { i, j, form })
}

/// True iff `a[i..=j]` is a palindrome: `i + j` is even and the half-length
/// is below `2^a[(i+j)/2]`.
pub fn is_pal_factor_a(i: u64, j: u64) -> bool {
    classify_a(i, j).is_some()
}

/// True iff `b[i..=j]` is a palindrome.
pub fn is_pal_factor_b(i: u64, j: u64) -> bool {
    classify_b(i, j).is_some()
}

/// Start indices `n'` with `a[n'..=n]` palindromic, ascending.
///
/// For every 1-digit of `bin(n)` at position `s` (1-based, MSB first), flip
/// positions `s..=k` of `bin(n)`; the result is `bin(n' - 1)`.
pub fn pal_suffixes_a(n: u64) -> Vec<u64> {
    assert!(n >= 1, "index must be positive");
    let mut starts: Vec<u64> = set_bits(n).map(|v| 1 + (n ^ low(v + 1))).collect();
    starts.sort_unstable();
    starts
}

fn set_bits(n: u64) -> impl Iterator<Item = u32> {
    (0..64u32).filter(move |&v| (n >> v) & 1 == 1)
}

/// Calls `f` with every palindromic suffix of `b[1..=n]`.
///
/// Starts are distinct across calls: each start corresponds to a distinct
/// mask.
pub fn for_each_pal_suffix_b(n: u64, mut f: impl FnMut(PalFactor)) {
    assert!(n >= 1, "index must be positive");
    let mut below: Option<u32> = None;
    let mut bits = n;
    while bits != 0 {
        let v1 = bits.trailing_zeros();
        bits &= bits - 1;
        let o = n >> v1;
        let x = n & low(v1);

        // Centre at t.
        let form = if x == 0 {
            PalForm::Singleton { o, v: v1 }
        } else {
            PalForm::ACenter { o, v: v1, x }
        };
        f(PalFactor::from_form(form));

        // Right arm: v2 is the set bit just below v1.
        if let Some(v2) = below {
            if (v1 - v2).is_multiple_of(2) {
                let x = n & low(v2);
                f(PalFactor::from_form(PalForm::BRight { o, v1, v2, x }));
            }
        }

        // Left arm: v2 ranges over the zero bits directly below v1.
        let lo = below.map_or(0, |b| b + 1);
        let mut v2 = if (v1 - lo).is_multiple_of(2) {
            lo
        } else {
            lo + 1
        };
        while v2 < v1 {
            let x = n & low(v2);
            debug_assert_eq!(x, n & low(v1));
            f(PalFactor::from_form(PalForm::BLeft { o, v1, v2, x }));
            v2 += 2;
        }
        below = Some(v1);
    }
}

/// Every palindromic suffix of `b[1..=n]`, keyed and sorted by start.
pub fn pal_suffixes_b(n: u64) -> Vec<PalFactor> {
    let mut by_start = BTreeMap::new();
    for_each_pal_suffix_b(n, |f| {
        by_start.entry(f.i).or_insert(f);
    });
    by_start.into_values().collect()
}

/// The mask taking `bin(n)` to `bin(f.i - 1)` (left-padded to the length of
/// `bin(n)`): type A for centred factors, type B otherwise.
pub fn suffix_to_mask(n: u64, f: &PalFactor) -> Result<MaskOp> {
    let not_suffix = || Error::NotPalSuffix { n, i: f.i, j: f.j };
    if f.i == 0 || f.j != n || f.i > f.j || f.form.interval() != (f.i, f.j) {
        return Err(not_suffix());
    }
    let k = bit_length(n);
    let op = match f.form {
        PalForm::Singleton { v, .. } | PalForm::ACenter { v, .. } => {
            if v + 1 > k {
                return Err(not_suffix());
            }
            MaskOp::a(k, k - v - 1)
        }
        PalForm::BRight { v1, v2, .. } | PalForm::BLeft { v1, v2, .. } => {
            if v1 >= k || v2 >= v1 {
                return Err(not_suffix());
            }
            MaskOp::b(k, k - v1, v1 - v2)
        }
    }
    .map_err(|_| not_suffix())?;
    let target = BinaryWord::from_raw(f.i - 1, k)?;
    if apply_mask(&op, &to_binary(n)?)? != target {
        return Err(not_suffix());
    }
    Ok(op)
}

/// Ground truth: compares `word[i..=j]` (1-based) with its reversal.
pub fn brute_pal_check<T: PartialEq>(word: &[T], i: usize, j: usize) -> bool {
    assert!(
        i >= 1 && i <= j && j <= word.len(),
        "need 1 <= i <= j <= {}, got [{i}, {j}]",
        word.len()
    );
    let factor = &word[i - 1..j];
    factor.iter().eq(factor.iter().rev())
}

/// Every palindromic factor `[i, j]` with `j <= n`, ordered by `j` then `i`.
///
/// The output has `Θ(n log n)` entries for `a` and more for `b`.
pub fn enumerate_pal_factors(seq: PalSeq, n: u64) -> Vec<PalFactor> {
    let mut out = Vec::new();
    for j in 1..=n {
        match seq {
            PalSeq::A => out.extend(
                pal_suffixes_a(j)
                    .into_iter()
                    .map(|i| classify_a(i, j).expect("closed-form suffix is palindromic")),
            ),
            PalSeq::B => out.extend(pal_suffixes_b(j)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitseq::{generate_prefix, SeqId};

    #[test]
    fn a_factor_examples() {
        assert!(is_pal_factor_a(1, 3));
        assert!(!is_pal_factor_a(2, 4));
        assert!(is_pal_factor_a(6, 10));
        assert!(is_pal_factor_a(5, 5));
        assert!(!is_pal_factor_a(1, 2));
    }

    #[test]
    fn b_factor_examples() {
        assert!(is_pal_factor_b(1, 15));
        assert!(is_pal_factor_b(16, 17));
        assert!(!is_pal_factor_b(2, 3));
        assert!(is_pal_factor_b(3, 4));
        assert!(is_pal_factor_b(6, 8));
    }

    #[test]
    fn suffix_examples() {
        assert_eq!(pal_suffixes_a(3), vec![1, 3]);
        assert_eq!(pal_suffixes_a(4), vec![4]);
        for k in 0..20 {
            assert_eq!(pal_suffixes_a(1 << k), vec![1 << k]);
        }
        let b17: Vec<u64> = pal_suffixes_b(17).iter().map(|f| f.i).collect();
        assert!(b17.contains(&16), "{b17:?}");
        let b3: Vec<u64> = pal_suffixes_b(3).iter().map(|f| f.i).collect();
        assert!(b3.contains(&1) && b3.contains(&3));
        let b1 = pal_suffixes_b(1);
        assert_eq!(b1.len(), 1);
        assert_eq!(b1[0].form, PalForm::Singleton { o: 1, v: 0 });
    }

    #[test]
    fn suffix_masks() {
        let f = classify_b(16, 17).unwrap();
        assert_eq!(suffix_to_mask(17, &f), MaskOp::b(5, 1, 4));
        let f = classify_a(1, 3).unwrap();
        assert_eq!(suffix_to_mask(3, &f), MaskOp::a(2, 0));
        let f = classify_a(4, 4).unwrap();
        assert_eq!(suffix_to_mask(4, &f), MaskOp::a(3, 0));
        // Wrong end point.
        assert!(suffix_to_mask(18, &f).is_err());
        let bogus = PalFactor {
            i: 2,
            j: 4,
            form: PalForm::ACenter { o: 3, v: 0, x: 1 },
        };
        assert!(suffix_to_mask(4, &bogus).is_err());
    }

    #[test]
    fn brute_examples() {
        let a = generate_prefix(SeqId::Ruler, 16).unwrap();
        let b = generate_prefix(SeqId::PeriodDoubling, 16).unwrap();
        assert!(brute_pal_check(&a, 1, 3));
        assert!(!brute_pal_check(&b, 1, 4));
        for i in 1..=16 {
            assert!(brute_pal_check(&a, i, i));
        }
    }

    #[test]
    fn enumeration_matches_all_pairs() {
        for (seq, id) in [
            (PalSeq::A, SeqId::Ruler),
            (PalSeq::B, SeqId::PeriodDoubling),
        ] {
            let n = 300u64;
            let word = generate_prefix(id, n).unwrap();
            let mut got: Vec<(u64, u64)> = enumerate_pal_factors(seq, n)
                .iter()
                .map(|f| (f.i, f.j))
                .collect();
            let mut want = Vec::new();
            for j in 1..=n as usize {
                for i in 1..=j {
                    if brute_pal_check(&word, i, j) {
                        want.push((i as u64, j as u64));
                    }
                }
            }
            got.sort_unstable();
            want.sort_unstable();
            assert_eq!(got, want, "{seq:?}");
        }
        let a4: Vec<(u64, u64)> = enumerate_pal_factors(PalSeq::A, 4)
            .iter()
            .map(|f| (f.i, f.j))
            .collect();
        assert_eq!(a4, vec![(1, 1), (2, 2), (1, 3), (3, 3), (4, 4)]);
        assert!(enumerate_pal_factors(PalSeq::B, 4)
            .iter()
            .any(|f| (f.i, f.j) == (3, 4)));
        assert_eq!(enumerate_pal_factors(PalSeq::A, 1).len(), 1);
    }

    #[test]
    fn length_two_b_factors() {
        let b = generate_prefix(SeqId::PeriodDoubling, 2049).unwrap();
        for i in 1..=2048usize {
            let eq = b[i - 1] == b[i];
            assert_eq!(is_pal_factor_b(i as u64, i as u64 + 1), eq, "at {i}");
        }
    }

    #[test]
    fn large_indices_do_not_overflow() {
        let n = u64::MAX;
        assert_eq!(pal_suffixes_a(n).len(), 64);
        assert!(is_pal_factor_a(1, (1 << 63) - 1));
        assert!(is_pal_factor_b(n, n));
        let _ = pal_suffixes_b(n);
    }
}
