//! Mask words and mask operations on fixed-length binary words.
//!
//! A type A mask `A(t)` of length `L` is `0^t 1^(L-t)`; applying it flips the
//! last `L - t` digits. A type B mask `B(t, s)` is `0^(t-1) 1^s 0 1^(L-t-s)`.
//! Applying a mask is exclusive-or with its mask word, so applications
//! commute and every mask is an involution.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitseq::BinaryWord;
use crate::error::{Error, Result};

/// Default cap on word length for the exhaustive mixed search.
pub const DEFAULT_MAX_LEN: u32 = 22;

/// Type A sorts before type B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MaskKind {
    A,
    B,
}

/// A validated mask descriptor.
///
/// The derived ordering (kind, then `t`, then `s`) is the tie-breaking order
/// used by the solvers.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MaskOp {
    kind: MaskKind,
    t: u32,
    s: u32,
    len: u32,
}

impl MaskOp {
    /// `A(t)` of length `len`; `t = len` is the identity.
    pub fn a(len: u32, t: u32) -> Result<Self> {
        if len == 0 || len as usize > crate::bitseq::MAX_WORD_LEN || t > len {
            return Err(Error::InvalidMaskA { len, t });
        }
        Ok(MaskOp {
            kind: MaskKind::A,
            t,
            s: 0,
            len,
        })
    }

    /// `B(t, s)` of length `len`.
    pub fn b(len: u32, t: u32, s: u32) -> Result<Self> {
        if len as usize > crate::bitseq::MAX_WORD_LEN || t < 1 || s < 2 || t + s > len {
            return Err(Error::InvalidMaskB { len, t, s });
        }
        Ok(MaskOp {
            kind: MaskKind::B,
            t,
            s,
            len,
        })
    }

    pub fn kind(&self) -> MaskKind {
        self.kind
    }

    pub fn word_len(&self) -> u32 {
        self.len
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// Zero for type A masks.
    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn is_identity(&self) -> bool {
        self.kind == MaskKind::A && self.t == self.len
    }

    fn bits(&self) -> u64 {
        match self.kind {
            MaskKind::A => low_bits(self.len - self.t),
            MaskKind::B => {
                let tail = self.len - self.t - self.s;
                low_bits(tail) | (low_bits(self.s) << (tail + 1))
            }
        }
    }
}

impl fmt::Display for MaskOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MaskKind::A => write!(f, "A_{}({})", self.len, self.t),
            MaskKind::B => write!(f, "B_{}({},{})", self.len, self.t, self.s),
        }
    }
}

impl fmt::Debug for MaskOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[inline]
fn low_bits(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An ordered list of masks sharing one length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpSequence {
    len: u32,
    ops: Vec<MaskOp>,
}

impl OpSequence {
    pub fn new(len: u32, ops: Vec<MaskOp>) -> Result<Self> {
        if let Some(bad) = ops.iter().find(|op| op.len != len) {
            return Err(Error::LengthMismatch {
                mask: bad.len,
                word: len,
            });
        }
        Ok(OpSequence { len, ops })
    }

    pub fn empty(len: u32) -> Self {
        OpSequence {
            len,
            ops: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn word_len(&self) -> u32 {
        self.len
    }

    pub fn ops(&self) -> &[MaskOp] {
        &self.ops
    }

    /// Applies the masks left to right.
    pub fn apply(&self, w: &BinaryWord) -> Result<BinaryWord> {
        self.ops.iter().try_fold(*w, |acc, op| apply_mask(op, &acc))
    }
}

pub fn mask_word(op: &MaskOp) -> BinaryWord {
    // Validated on construction, so the length is in range.
    BinaryWord::from_raw(op.bits(), op.len).expect("mask length validated")
}

pub fn apply_mask(op: &MaskOp, w: &BinaryWord) -> Result<BinaryWord> {
    if w.len() != op.len {
        return Err(Error::LengthMismatch {
            mask: op.len,
            word: w.len(),
        });
    }
    BinaryWord::from_raw(w.value() ^ op.bits(), op.len)
}

/// `B(t, s) = A(t-1) A(t+s-1) A(t+s)`.
pub fn compose_b_as_three_a(op: &MaskOp) -> Result<OpSequence> {
    if op.kind != MaskKind::B {
        return Err(Error::NotTypeB);
    }
    let (len, t, s) = (op.len, op.t, op.s);
    OpSequence::new(
        len,
        vec![
            MaskOp::a(len, t - 1)?,
            MaskOp::a(len, t + s - 1)?,
            MaskOp::a(len, t + s)?,
        ],
    )
}

fn check_solver_input(w: &BinaryWord) -> Result<()> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !w.is_zero() && !w.is_canonical() {
        return Err(Error::LeadingZero {
            word: w.to_string(),
        });
    }
    Ok(())
}

/// Minimum number of type A masks taking `w` to the zero word, with a
/// witness sequence.
///
/// The count equals the number of runs. The witness flips the last run
/// (merging it into its neighbour) until one run of ones remains, then
/// finishes with `A(0)`.
pub fn min_ops_type_a(w: &BinaryWord) -> Result<(usize, OpSequence)> {
    check_solver_input(w)?;
    let len = w.len();
    let mut cur = *w;
    let mut ops = Vec::new();
    while !cur.is_zero() {
        let last_run = if cur.value() & 1 == 1 {
            cur.value().trailing_ones()
        } else {
            cur.value().trailing_zeros()
        };
        let op = if last_run == len {
            MaskOp::a(len, 0)?
        } else {
            MaskOp::a(len, len - last_run)?
        };
        cur = apply_mask(&op, &cur)?;
        ops.push(op);
    }
    Ok((ops.len(), OpSequence { len, ops }))
}

/// Exact minimum number of masks (type A or B) taking `w` to zero.
///
/// Searches the whole `2^L` word space, so `L` is capped by `max_len`.
pub fn min_ops_mixed(w: &BinaryWord, max_len: u32) -> Result<(usize, OpSequence)> {
    check_solver_input(w)?;
    if w.len() > max_len {
        return Err(Error::SearchTooLarge {
            len: w.len(),
            max_len,
        });
    }
    let search = MaskSearch::mixed(w.len())?;
    Ok(search
        .solve(w.value())
        .expect("type A masks alone reach zero"))
}

/// `runs(apply_mask(op, w)) - runs(w)`, counting runs with leading zeros
/// stripped (so the zero word has none).
pub fn run_delta(w: &BinaryWord, op: &MaskOp) -> Result<i32> {
    let after = apply_mask(op, w)?;
    Ok(after.value_run_count() as i32 - w.value_run_count() as i32)
}

/// All non-identity masks of one length, in tie-breaking order.
pub fn all_masks(len: u32, include_b: bool) -> Result<Vec<MaskOp>> {
    let mut out = Vec::new();
    for t in 0..len {
        out.push(MaskOp::a(len, t)?);
    }
    if include_b {
        for t in 1..len {
            for s in 2..=(len - t) {
                out.push(MaskOp::b(len, t, s)?);
            }
        }
    }
    Ok(out)
}

/// Breadth-first distances from the zero word over a mask set, for every
/// word of one length.
///
/// Mask application is exclusive-or, so the distance from `w` to zero equals
/// the distance from zero to `w`; one search answers every query of that
/// length.
pub struct MaskSearch {
    len: u32,
    masks: Vec<(MaskOp, u64)>,
    dist: Vec<u8>,
}

const UNSEEN: u8 = u8::MAX;

impl MaskSearch {
    /// Search over type A and type B masks.
    pub fn mixed(len: u32) -> Result<Self> {
        Self::build(len, true)
    }

    /// Search over type A masks only.
    pub fn type_a_only(len: u32) -> Result<Self> {
        Self::build(len, false)
    }

    fn build(len: u32, include_b: bool) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyWord);
        }
        if len > 32 {
            return Err(Error::SearchTooLarge { len, max_len: 32 });
        }
        let masks: Vec<(MaskOp, u64)> = all_masks(len, include_b)?
            .into_iter()
            .map(|op| (op, op.bits()))
            .collect();
        let size = 1usize << len;
        let mut dist = Vec::new();
        dist.try_reserve_exact(size)
            .map_err(|_| Error::Allocation(size))?;
        dist.resize(size, UNSEEN);
        dist[0] = 0;
        let mut queue = VecDeque::from([0u64]);
        while let Some(w) = queue.pop_front() {
            let d = dist[w as usize];
            for &(_, m) in &masks {
                let next = (w ^ m) as usize;
                if dist[next] == UNSEEN {
                    dist[next] = d + 1;
                    queue.push_back(next as u64);
                }
            }
        }
        Ok(MaskSearch { len, masks, dist })
    }

    pub fn word_len(&self) -> u32 {
        self.len
    }

    /// Minimum number of masks taking the word with value `w` to zero.
    pub fn distance(&self, w: u64) -> Option<usize> {
        match self.dist.get(w as usize) {
            Some(&d) if d != UNSEEN => Some(d as usize),
            _ => None,
        }
    }

    /// An optimal sequence; among optimal sequences, the lexicographically
    /// smallest in mask order.
    pub fn solve(&self, w: u64) -> Option<(usize, OpSequence)> {
        let total = self.distance(w)?;
        let mut cur = w;
        let mut ops = Vec::with_capacity(total);
        for remaining in (0..total).rev() {
            let &(op, m) = self
                .masks
                .iter()
                .find(|&&(_, m)| self.dist[(cur ^ m) as usize] as usize == remaining)?;
            cur ^= m;
            ops.push(op);
        }
        debug_assert_eq!(cur, 0);
        Some((total, OpSequence { len: self.len, ops }))
    }
}
