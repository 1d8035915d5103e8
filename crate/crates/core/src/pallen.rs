//! Palindromic-length tables.
//!
//! `pl[n]` is the least number of palindromes whose concatenation is the
//! prefix `x[1..=n]`. It satisfies `pl[0] = 0` and
//! `pl[n] = 1 + min { pl[i - 1] : x[i..=n] is a palindrome }`.
//!
//! Two brute-force oracles work on arbitrary words. The fast paths for the
//! ruler and period-doubling sequences enumerate palindromic suffixes in
//! closed form instead.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::bitseq::{bit_length, run_count, runs_of_value, to_binary};
use crate::error::{Error, Result};
use crate::maskcalc::MaskSearch;
use crate::palfactor::for_each_pal_suffix_b;

/// Default cap on the length of words fed to the brute-force oracles.
pub const DEFAULT_ORACLE_BOUND: usize = 1 << 17;

/// Environment variable overriding [`DEFAULT_ORACLE_BOUND`].
pub const ORACLE_BOUND_ENV: &str = "PALINRULER_ORACLE_BOUND";

/// The oracle bound in effect: `PALINRULER_ORACLE_BOUND` if it parses as a
/// positive integer, the default otherwise.
pub fn oracle_bound() -> usize {
    std::env::var(ORACLE_BOUND_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_ORACLE_BOUND)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableSource {
    Ruler,
    PeriodDoubling,
    /// An arbitrary word handed to a brute-force oracle.
    Word,
}

/// `values[n] = pl[n]` for `0 <= n <= N`; `values[0] = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PalLengthTable {
    pub source: TableSource,
    values: Vec<u16>,
}

impl PalLengthTable {
    fn with_capacity(source: TableSource, n: usize) -> Result<Self> {
        let mut values = Vec::new();
        values
            .try_reserve_exact(n + 1)
            .map_err(|_| Error::Allocation(n + 1))?;
        values.push(0);
        Ok(PalLengthTable { source, values })
    }

    /// The prefix bound `N`.
    pub fn bound(&self) -> usize {
        self.values.len() - 1
    }

    /// `pl[n]`; `n = 0` gives 0.
    pub fn get(&self, n: usize) -> u32 {
        self.values[n] as u32
    }

    /// All values including slot 0.
    pub fn values(&self) -> &[u16] {
        &self.values
    }

    /// Heap bytes held by the table.
    pub fn heap_bytes(&self) -> usize {
        self.values.capacity() * std::mem::size_of::<u16>()
    }

    /// `(n, pl[n])` for `1 <= n <= N`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.values
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &v)| (n, v as u32))
    }
}

fn check_oracle_len(len: usize, bound: usize) -> Result<()> {
    if len > bound {
        return Err(Error::Oversize { len, bound });
    }
    Ok(())
}

fn to_u16(v: u32) -> u16 {
    u16::try_from(v).expect("palindromic length never exceeds the word length in bits")
}

/// Brute-force oracle with the bound from [`oracle_bound`].
pub fn pal_length_bruteforce<T: PartialEq>(word: &[T]) -> Result<PalLengthTable> {
    pal_length_bruteforce_bounded(word, oracle_bound())
}

/// Brute-force oracle by palindromic-suffix extension.
///
/// `x[i..=n]` is a palindrome iff `i = n`, or `i = n - 1` and the two letters
/// agree, or `x[i+1..=n-1]` is a palindromic suffix of the previous prefix
/// and `x[i] = x[n]`. The suffix set is carried from one prefix to the next,
/// so the cost is the total number of palindromic suffixes: quadratic in the
/// worst case, much less on the sequences studied here.
pub fn pal_length_bruteforce_bounded<T: PartialEq>(
    word: &[T],
    bound: usize,
) -> Result<PalLengthTable> {
    check_oracle_len(word.len(), bound)?;
    let mut table = PalLengthTable::with_capacity(TableSource::Word, word.len())?;
    let mut starts: Vec<usize> = Vec::new();
    let mut next: Vec<usize> = Vec::new();
    for n in 1..=word.len() {
        let last = &word[n - 1];
        next.clear();
        next.extend(
            starts
                .iter()
                .filter(|&&i| i >= 2 && word[i - 2] == *last)
                .map(|&i| i - 1),
        );
        if n >= 2 && word[n - 2] == *last {
            next.push(n - 1);
        }
        next.push(n);
        let best = next
            .iter()
            .map(|&i| table.values[i - 1])
            .min()
            .expect("the singleton suffix is always present");
        table.values.push(best + 1);
        std::mem::swap(&mut starts, &mut next);
    }
    Ok(table)
}

/// Brute-force oracle on a palindromic tree (eertree).
///
/// Walks the suffix-link chain of the longest palindromic suffix at every
/// position, so it visits the same palindromic suffixes as the scan above by
/// an unrelated route.
pub fn pal_length_eertree<T: Eq + Hash + Copy>(word: &[T]) -> Result<PalLengthTable> {
    check_oracle_len(word.len(), oracle_bound())?;
    let mut table = PalLengthTable::with_capacity(TableSource::Word, word.len())?;
    let mut tree = Eertree::new();
    for p in 0..word.len() {
        let node = tree.push(word, p);
        let mut best = u16::MAX;
        let mut cur = node;
        while tree.len[cur] > 0 {
            let l = tree.len[cur] as usize;
            best = best.min(table.values[p + 1 - l]);
            cur = tree.link[cur];
        }
        table.values.push(best + 1);
    }
    Ok(table)
}

struct Eertree<T> {
    len: Vec<isize>,
    link: Vec<usize>,
    edges: HashMap<(usize, T), usize>,
    last: usize,
}

impl<T: Eq + Hash + Copy> Eertree<T> {
    const IMAGINARY: usize = 0;
    const EMPTY: usize = 1;

    fn new() -> Self {
        Eertree {
            len: vec![-1, 0],
            link: vec![Self::IMAGINARY, Self::IMAGINARY],
            edges: HashMap::new(),
            last: Self::EMPTY,
        }
    }

    fn extendable(&self, word: &[T], p: usize, node: usize) -> bool {
        let before = p as isize - 1 - self.len[node];
        before >= 0 && word[before as usize] == word[p]
    }

    /// Adds `word[p]` and returns the node of the longest palindromic suffix.
    fn push(&mut self, word: &[T], p: usize) -> usize {
        let c = word[p];
        let mut cur = self.last;
        while !self.extendable(word, p, cur) {
            cur = self.link[cur];
        }
        if let Some(&existing) = self.edges.get(&(cur, c)) {
            self.last = existing;
            return existing;
        }
        let node = self.len.len();
        let new_len = self.len[cur] + 2;
        let link = if new_len == 1 {
            Self::EMPTY
        } else {
            let mut l = self.link[cur];
            while !self.extendable(word, p, l) {
                l = self.link[l];
            }
            self.edges[&(l, c)]
        };
        self.len.push(new_len);
        self.link.push(link);
        self.edges.insert((cur, c), node);
        self.last = node;
        node
    }
}

/// `pl_a[n] = c[n]` for `1 <= n <= N`.
pub fn pal_length_a(n: u64) -> Result<PalLengthTable> {
    let len = table_len(n)?;
    let mut table = PalLengthTable::with_capacity(TableSource::Ruler, len)?;
    table
        .values
        .extend((1..=n).map(|i| to_u16(runs_of_value(i))));
    Ok(table)
}

/// `pl_b` by dynamic programming over the closed-form palindromic suffixes.
pub fn pal_length_b(n: u64) -> Result<PalLengthTable> {
    let len = table_len(n)?;
    let mut table = PalLengthTable::with_capacity(TableSource::PeriodDoubling, len)?;
    for m in 1..=n {
        let mut best = u16::MAX;
        let values = &table.values;
        for_each_pal_suffix_b(m, |f| best = best.min(values[(f.i - 1) as usize]));
        table.values.push(best + 1);
    }
    Ok(table)
}

fn table_len(n: u64) -> Result<usize> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    usize::try_from(n).map_err(|_| Error::Allocation(usize::MAX))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundViolation {
    pub n: u64,
    pub pl_b: u32,
    pub run_count: u32,
}

/// One point of the growth curve of `max_{m <= n} pl_b[m]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub n: u64,
    pub prefix_max: u32,
    pub log2_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: u64,
    pub max_value: u32,
    /// Every `n` attaining `max_value`.
    pub argmax: Vec<u64>,
    /// Expected empty.
    pub violations: Vec<BoundViolation>,
    pub histogram: BTreeMap<u32, u64>,
    /// First index at which each new prefix maximum appears.
    pub records: Vec<(u64, u32)>,
    /// Prefix maximum at every power of two up to `n`.
    pub growth: Vec<GrowthPoint>,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `floor(c[n] / 3) <= pl_b[n] <= c[n]` for `1 <= n <= N`.
pub fn check_bounds_b(n: u64) -> Result<BoundsReport> {
    let table = pal_length_b(n)?;
    Ok(bounds_report(&table))
}

/// [`check_bounds_b`] against an already built `pl_b` table.
pub fn bounds_report(table: &PalLengthTable) -> BoundsReport {
    let mut report = BoundsReport {
        n: table.bound() as u64,
        max_value: 0,
        argmax: Vec::new(),
        violations: Vec::new(),
        histogram: BTreeMap::new(),
        records: Vec::new(),
        growth: Vec::new(),
    };
    for (m, pl) in table.iter() {
        let m = m as u64;
        let c = runs_of_value(m);
        if pl < c / 3 || pl > c {
            report.violations.push(BoundViolation {
                n: m,
                pl_b: pl,
                run_count: c,
            });
        }
        *report.histogram.entry(pl).or_default() += 1;
        if pl > report.max_value {
            report.max_value = pl;
            report.argmax.clear();
            report.records.push((m, pl));
        }
        if pl == report.max_value {
            report.argmax.push(m);
        }
        if m.is_power_of_two() {
            report.growth.push(GrowthPoint {
                n: m,
                prefix_max: report.max_value,
                log2_n: (m as f64).log2(),
            });
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedRow {
    pub n: u64,
    pub pl_b: u32,
    pub mixed_min: u32,
    pub run_count: u32,
    /// The solver's mask sequence takes `bin(n)` to zero.
    pub replay_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedMinReport {
    pub n: u64,
    pub max_len: u32,
    pub rows: Vec<MixedRow>,
    /// Indices where `pl_b[n] != mixed_min(bin(n))`.
    pub mismatches: Vec<u64>,
    /// Mask witnesses for the mismatching indices.
    pub mismatch_witnesses: BTreeMap<u64, Vec<String>>,
    pub pl_b_above_mixed: u64,
    pub pl_b_below_mixed: u64,
    pub replay_failures: Vec<u64>,
    /// Indices violating `mixed_min >= floor(runs / 3)`.
    pub floor_bound_failures: Vec<u64>,
    /// Indices violating `mixed_min >= ceil(runs / 3)`.
    pub ceil_bound_failures: Vec<u64>,
}

impl MixedMinReport {
    /// Internal consistency: every replay reaches zero and the floor bound
    /// holds. Equality with `pl_b` is reported, not required.
    pub fn consistent(&self) -> bool {
        self.replay_failures.is_empty() && self.floor_bound_failures.is_empty()
    }
}

/// Compares `pl_b[n]` with the minimum number of masks taking `bin(n)` to
/// zero, for `1 <= n <= N`.
pub fn compare_mixed_min(n: u64, max_len: u32) -> Result<MixedMinReport> {
    let bits = bit_length(n);
    if bits > max_len {
        return Err(Error::SearchTooLarge { len: bits, max_len });
    }
    let table = pal_length_b(n)?;
    let mut report = MixedMinReport {
        n,
        max_len,
        rows: Vec::with_capacity(n as usize),
        mismatches: Vec::new(),
        mismatch_witnesses: BTreeMap::new(),
        pl_b_above_mixed: 0,
        pl_b_below_mixed: 0,
        replay_failures: Vec::new(),
        floor_bound_failures: Vec::new(),
        ceil_bound_failures: Vec::new(),
    };
    for len in 1..=bits {
        let search = MaskSearch::mixed(len)?;
        let lo = 1u64 << (len - 1);
        let hi = ((1u64 << len) - 1).min(n);
        for m in lo..=hi {
            let word = to_binary(m)?;
            let (count, ops) = search.solve(m).expect("type A masks alone reach zero");
            let replay_ok = ops.apply(&word).map(|w| w.is_zero()).unwrap_or(false);
            let pl = table.get(m as usize);
            let runs = run_count(m)?;
            let count = count as u32;
            if !replay_ok {
                report.replay_failures.push(m);
            }
            if count < runs / 3 {
                report.floor_bound_failures.push(m);
            }
            if count < runs.div_ceil(3) {
                report.ceil_bound_failures.push(m);
            }
            if pl != count {
                report.mismatches.push(m);
                report
                    .mismatch_witnesses
                    .insert(m, ops.ops().iter().map(|op| op.to_string()).collect());
                if pl > count {
                    report.pl_b_above_mixed += 1;
                } else {
                    report.pl_b_below_mixed += 1;
                }
            }
            report.rows.push(MixedRow {
                n: m,
                pl_b: pl,
                mixed_min: count,
                run_count: runs,
                replay_ok,
            });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternatingSumCheck {
    pub k: u32,
    /// `n = sum_{i=0}^{k} 4^i`, binary `1(01)^k`.
    pub n: u64,
    pub observed_run_count: u32,
    pub claimed_run_count: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop3Report {
    pub n: u64,
    /// Indices with `c[n] > floor(log2 n) + 1`; expected empty.
    pub violations: Vec<u64>,
    /// Number of indices with `c[n] > floor(log2 n)` (the bound without the
    /// `+ 1`).
    pub literal_bound_failures: u64,
    pub first_literal_failures: Vec<u64>,
    /// Indices attaining `c[n] = floor(log2 n) + 1`: the alternating words.
    pub witnesses: Vec<u64>,
    pub alternating_sums: Vec<AlternatingSumCheck>,
}

impl Prop3Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `c[n] <= floor(log2 n) + 1` for `1 <= n <= N`.
pub fn check_prop3(n: u64) -> Result<Prop3Report> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    let mut report = Prop3Report {
        n,
        violations: Vec::new(),
        literal_bound_failures: 0,
        first_literal_failures: Vec::new(),
        witnesses: Vec::new(),
        alternating_sums: Vec::new(),
    };
    for m in 1..=n {
        let c = runs_of_value(m);
        let bits = bit_length(m);
        if c > bits {
            report.violations.push(m);
        }
        if c > bits - 1 {
            report.literal_bound_failures += 1;
            if report.first_literal_failures.len() < 16 {
                report.first_literal_failures.push(m);
            }
        }
        if c == bits {
            report.witnesses.push(m);
        }
    }
    let mut k = 0u32;
    let mut sum = 1u64;
    while sum <= n {
        report.alternating_sums.push(AlternatingSumCheck {
            k,
            n: sum,
            observed_run_count: runs_of_value(sum),
            claimed_run_count: 2 * k,
        });
        k += 1;
        match 4u64.checked_pow(k).and_then(|p| sum.checked_add(p)) {
            Some(next) => sum = next,
            None => break,
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitseq::{generate_prefix, SeqId};

    /// Exhaustive decomposition search: the smallest k such that the word
    /// splits into k palindromes.
    fn min_decomposition(word: &[u32]) -> u32 {
        fn is_pal(w: &[u32]) -> bool {
            w.iter().eq(w.iter().rev())
        }
        fn go(w: &[u32]) -> u32 {
            if w.is_empty() {
                return 0;
            }
            (1..=w.len())
                .filter(|&l| is_pal(&w[..l]))
                .map(|l| 1 + go(&w[l..]))
                .min()
                .unwrap()
        }
        go(word)
    }

    #[test]
    fn bruteforce_examples() {
        let t = pal_length_bruteforce(&[0, 1, 0]).unwrap();
        assert_eq!(t.values(), &[0, 1, 2, 1]);
        let t = pal_length_bruteforce(&[7]).unwrap();
        assert_eq!(t.values(), &[0, 1]);
        let a = generate_prefix(SeqId::Ruler, 8).unwrap();
        let t = pal_length_bruteforce(&a).unwrap();
        assert_eq!(&t.values()[1..], &[1, 2, 1, 2, 3, 2, 1, 2]);
    }

    #[test]
    fn bruteforce_against_exhaustive_decomposition() {
        for len in 1..=12usize {
            for code in 0..(1u32 << len) {
                let word: Vec<u32> = (0..len).map(|k| (code >> k) & 1).collect();
                let t = pal_length_bruteforce(&word).unwrap();
                for n in 1..=len {
                    assert_eq!(t.get(n), min_decomposition(&word[..n]), "{word:?} at {n}");
                }
                assert_eq!(pal_length_eertree(&word).unwrap(), t);
            }
        }
    }

    #[test]
    fn oversize_rejected() {
        let word = vec![0u8; 10];
        assert_eq!(
            pal_length_bruteforce_bounded(&word, 9),
            Err(Error::Oversize { len: 10, bound: 9 })
        );
    }

    #[test]
    fn a_table_examples() {
        let t = pal_length_a(1 << 12).unwrap();
        assert_eq!(
            &t.values()[1..16],
            &[1, 2, 1, 2, 3, 2, 1, 2, 3, 4, 3, 2, 3, 2, 1]
        );
        assert_eq!(pal_length_a(1000).unwrap().get(1000), 4);
        for k in 1..=12 {
            assert_eq!(t.get(1 << k), 2);
        }
    }

    #[test]
    fn b_table_examples() {
        let t = pal_length_b(17).unwrap();
        assert_eq!(t.get(17), 2);
        assert_eq!(t.get(1), 1);
        assert_eq!(t.get(4), 2);
    }

    #[test]
    fn oracles_agree_on_both_sequences() {
        let n = 1 << 12;
        for id in [SeqId::Ruler, SeqId::PeriodDoubling] {
            let word = generate_prefix(id, n).unwrap();
            let scan = pal_length_bruteforce(&word).unwrap();
            let tree = pal_length_eertree(&word).unwrap();
            assert_eq!(scan.values(), tree.values());
        }
    }

    #[test]
    fn fast_paths_match_oracle() {
        let n = 1 << 14;
        let a = generate_prefix(SeqId::Ruler, n).unwrap();
        assert_eq!(
            pal_length_bruteforce(&a).unwrap().values(),
            pal_length_a(n).unwrap().values()
        );
        let b = generate_prefix(SeqId::PeriodDoubling, n).unwrap();
        assert_eq!(
            pal_length_bruteforce(&b).unwrap().values(),
            pal_length_b(n).unwrap().values()
        );
    }

    #[test]
    fn table_properties() {
        let n = 1 << 14;
        let a = pal_length_a(n).unwrap();
        let b = pal_length_b(n).unwrap();
        for m in 1..=n as usize {
            assert!(a.get(m) <= a.get(m - 1) + 1);
            assert!(b.get(m) <= b.get(m - 1) + 1);
            assert!(b.get(m) >= 1);
            assert_eq!(a.get(m) as usize % 2, m % 2);
            assert!(b.get(m) <= a.get(m), "sandwich at {m}");
        }
    }

    #[test]
    fn bounds_examples() {
        let r = check_bounds_b(17).unwrap();
        assert!(r.passed());
        let r = check_bounds_b(1).unwrap();
        assert!(r.passed());
        assert_eq!(r.max_value, 1);
        assert_eq!(r.histogram.get(&1), Some(&1));
    }

    #[test]
    fn mixed_min_small() {
        let r = compare_mixed_min(17, 22).unwrap();
        let row17 = r.rows.iter().find(|row| row.n == 17).unwrap();
        assert_eq!(row17.pl_b, 2);
        assert!(row17.mixed_min <= 2);
        let row1 = &r.rows[0];
        assert_eq!((row1.n, row1.pl_b, row1.mixed_min), (1, 1, 1));
        assert!(r.consistent());
        assert!(compare_mixed_min(1 << 5, 5).is_err());
    }

    #[test]
    fn run_count_bit_length_bound() {
        let r = check_prop3(1 << 16).unwrap();
        assert!(r.passed());
        assert!(r.witnesses.contains(&1));
        assert!(r.witnesses.contains(&21));
        assert_eq!(r.first_literal_failures[0], 1);
        for s in &r.alternating_sums {
            assert_eq!(s.observed_run_count, 2 * s.k + 1);
        }
    }
}
