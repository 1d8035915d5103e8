//! Invariant sweeps behind `palinruler verify`.
//!
//! Each sweep returns its violations in index order, whatever the number of
//! worker threads.

use clap::ValueEnum;
use palinruler::bitseq::{generate_prefix, run_count, SeqId};
use palinruler::levelang::{dfa_for_run_count, run_count_level_set, verify_dfa};
use palinruler::maskcalc::{
    all_masks, apply_mask, compose_b_as_three_a, mask_word, min_ops_type_a, MaskKind, MaskSearch,
};
use palinruler::palfactor::{brute_pal_check, is_pal_factor_b, pal_suffixes_a};
use palinruler::pallen::{check_bounds_b, compare_mixed_min, pal_length_bruteforce};
use palinruler::BinaryWord;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

/// Violations listed in a report; the total is always given.
pub const MAX_LISTED: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Theorem1,
    Theorem2Bounds,
    Lemma3Oracle,
    Prop2Oracle,
    Prop6,
    Lemma1,
    Prop1,
    MixedMin,
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("bound {n} out of range for suite {suite}: {why}")]
    Bound { suite: String, n: u64, why: String },
    #[error(transparent)]
    Core(#[from] palinruler::Error),
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub violation_count: usize,
    pub violations: Vec<Value>,
    pub details: Value,
}

impl SuiteResult {
    fn new(all: Vec<Value>, details: Value) -> Self {
        SuiteResult {
            violation_count: all.len(),
            violations: all.into_iter().take(MAX_LISTED).collect(),
            details,
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

fn bound_error(suite: Suite, n: u64, why: &str) -> SuiteError {
    SuiteError::Bound {
        suite: suite
            .to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default(),
        n,
        why: why.to_string(),
    }
}

pub fn run(suite: Suite, n: u64, max_len: u32) -> Result<SuiteResult, SuiteError> {
    if n == 0 {
        return Err(bound_error(suite, n, "bound must be positive"));
    }
    match suite {
        Suite::Theorem1 => theorem1(n),
        Suite::Theorem2Bounds => theorem2_bounds(n),
        Suite::Lemma3Oracle => lemma3_oracle(n),
        Suite::Prop2Oracle => prop2_oracle(n),
        Suite::Prop6 => prop6(n),
        Suite::Lemma1 => {
            if n > 20 {
                return Err(bound_error(suite, n, "word length must be at most 20"));
            }
            lemma1(n as u32)
        }
        Suite::Prop1 => {
            if n > 24 {
                return Err(bound_error(suite, n, "word length must be at most 24"));
            }
            prop1(n as u32)
        }
        Suite::MixedMin => mixed_min(n, max_len),
    }
}

/// Brute-force palindromic length of the ruler prefix equals the run count.
pub fn theorem1(n: u64) -> Result<SuiteResult, SuiteError> {
    let word = generate_prefix(SeqId::Ruler, n)?;
    let table = pal_length_bruteforce(&word)?;
    let violations: Vec<Value> = (1..=n)
        .into_par_iter()
        .filter_map(|m| {
            let pl = table.get(m as usize);
            let c = run_count(m).ok()?;
            (pl != c).then(|| json!({ "n": m, "pl_a": pl, "run_count": c }))
        })
        .collect();
    Ok(SuiteResult::new(violations, json!({ "checked": n })))
}

pub fn theorem2_bounds(n: u64) -> Result<SuiteResult, SuiteError> {
    let report = check_bounds_b(n)?;
    let violations = report
        .violations
        .iter()
        .map(|v| serde_json::to_value(v).expect("plain data"))
        .collect();
    let details = json!({
        "max_value": report.max_value,
        "argmax_count": report.argmax.len(),
        "argmax": report.argmax.iter().take(MAX_LISTED).collect::<Vec<_>>(),
        "histogram": report.histogram,
        "records": report.records,
        "growth": report.growth,
    });
    Ok(SuiteResult::new(violations, details))
}

/// Every pair `1 <= i <= j <= n`: closed-form test against reversal.
pub fn lemma3_oracle(n: u64) -> Result<SuiteResult, SuiteError> {
    let word = generate_prefix(SeqId::PeriodDoubling, n)?;
    let violations: Vec<Value> = (1..=n)
        .into_par_iter()
        .flat_map_iter(|j| {
            let word = &word;
            (1..=j).filter_map(move |i| {
                let closed = is_pal_factor_b(i, j);
                let brute = brute_pal_check(word, i as usize, j as usize);
                (closed != brute)
                    .then(|| json!({ "i": i, "j": j, "closed_form": closed, "brute_force": brute }))
            })
        })
        .collect();
    Ok(SuiteResult::new(
        violations,
        json!({ "pairs_checked": n * (n + 1) / 2 }),
    ))
}

/// Closed-form palindromic suffixes of the ruler prefix against a scan.
pub fn prop2_oracle(n: u64) -> Result<SuiteResult, SuiteError> {
    let word = generate_prefix(SeqId::Ruler, n)?;
    let violations: Vec<Value> = (1..=n)
        .into_par_iter()
        .filter_map(|m| {
            let closed = pal_suffixes_a(m);
            let brute: Vec<u64> = (1..=m)
                .filter(|&i| brute_pal_check(&word, i as usize, m as usize))
                .collect();
            let popcount_ok = closed.len() as u32 == m.count_ones();
            (closed != brute || !popcount_ok)
                .then(|| json!({ "n": m, "closed_form": closed, "brute_force": brute }))
        })
        .collect();
    Ok(SuiteResult::new(violations, json!({ "checked": n })))
}

/// Run-count automata for levels 1..=6 against the level sets up to `n`.
pub fn prop6(n: u64) -> Result<SuiteResult, SuiteError> {
    let per_level: Vec<(usize, Vec<Value>, usize)> = (1..=6usize)
        .into_par_iter()
        .map(|m| -> Result<_, SuiteError> {
            let dfa = dfa_for_run_count(m)?;
            let ls = run_count_level_set(m as u32, n)?;
            let mismatches = verify_dfa(&dfa, &ls)
                .into_iter()
                .map(|mm| json!({ "level": m, "index": mm.index, "accepted": mm.accepted, "member": mm.member }))
                .collect();
            Ok((m, mismatches, ls.members.len()))
        })
        .collect::<Result<_, _>>()?;
    let mut violations = Vec::new();
    let mut sizes = serde_json::Map::new();
    for (m, mm, size) in per_level {
        violations.extend(mm);
        sizes.insert(m.to_string(), json!(size));
    }
    Ok(SuiteResult::new(
        violations,
        json!({ "levels": [1, 2, 3, 4, 5, 6], "level_set_sizes": sizes }),
    ))
}

/// `B(t, s)` against its three type A factors, for every length up to
/// `max_len`: mask words, application on every word, and every application
/// order.
pub fn lemma1(max_len: u32) -> Result<SuiteResult, SuiteError> {
    let per_len: Vec<(Vec<Value>, usize)> = (1..=max_len)
        .into_par_iter()
        .map(|len| -> Result<_, SuiteError> {
            let mut bad = Vec::new();
            let mut checked = 0usize;
            for op in all_masks(len, true)? {
                if op.kind() != MaskKind::B {
                    continue;
                }
                let seq = compose_b_as_three_a(&op)?;
                let ops = seq.ops();
                let xor = ops.iter().fold(0u64, |acc, a| acc ^ mask_word(a).value());
                if xor != mask_word(&op).value() {
                    bad.push(json!({ "mask": op.to_string(), "check": "mask word" }));
                }
                let orders = [
                    [0, 1, 2],
                    [0, 2, 1],
                    [1, 0, 2],
                    [1, 2, 0],
                    [2, 0, 1],
                    [2, 1, 0],
                ];
                for v in 0..(1u64 << len) {
                    let w = BinaryWord::from_raw(v, len)?;
                    let direct = apply_mask(&op, &w)?;
                    for order in orders {
                        let via = order
                            .iter()
                            .try_fold(w, |acc, &k| apply_mask(&ops[k], &acc))?;
                        if via != direct {
                            bad.push(json!({
                                "mask": op.to_string(),
                                "word": w.to_string(),
                                "order": order,
                            }));
                        }
                    }
                    checked += 1;
                }
            }
            Ok((bad, checked))
        })
        .collect::<Result<_, _>>()?;
    let applications: usize = per_len.iter().map(|(_, c)| c).sum();
    let violations = per_len.into_iter().flat_map(|(b, _)| b).collect();
    Ok(SuiteResult::new(
        violations,
        json!({ "max_len": max_len, "word_mask_pairs": applications }),
    ))
}

/// Type A solver count equals the run count and the A-only search distance,
/// for every word with a leading 1 up to `max_len` digits.
pub fn prop1(max_len: u32) -> Result<SuiteResult, SuiteError> {
    let per_len: Vec<Vec<Value>> = (1..=max_len)
        .into_par_iter()
        .map(|len| -> Result<_, SuiteError> {
            let search = MaskSearch::type_a_only(len)?;
            let mut bad = Vec::new();
            for v in (1u64 << (len - 1))..(1u64 << len) {
                let w = BinaryWord::from_raw(v, len)?;
                let (count, seq) = min_ops_type_a(&w)?;
                let runs = w.value_run_count() as usize;
                let bfs = search.distance(v);
                let replay = seq.apply(&w)?.is_zero();
                if count != runs || bfs != Some(count) || !replay {
                    bad.push(json!({
                        "word": w.to_string(),
                        "solver": count,
                        "runs": runs,
                        "bfs": bfs,
                        "replay_ok": replay,
                    }));
                }
            }
            Ok(bad)
        })
        .collect::<Result<_, _>>()?;
    Ok(SuiteResult::new(
        per_len.into_iter().flatten().collect(),
        json!({ "max_len": max_len }),
    ))
}

/// `pl_b` against the minimum mask count. Disagreements are data; only
/// replay failures and the `floor(runs / 3)` bound count as violations.
pub fn mixed_min(n: u64, max_len: u32) -> Result<SuiteResult, SuiteError> {
    let report = compare_mixed_min(n, max_len)?;
    let mut violations: Vec<Value> = report
        .replay_failures
        .iter()
        .map(|m| json!({ "n": m, "check": "replay" }))
        .collect();
    violations.extend(
        report
            .floor_bound_failures
            .iter()
            .map(|m| json!({ "n": m, "check": "floor(runs/3) lower bound" })),
    );
    let details = json!({
        "rows": report.rows.len(),
        "equality_holds": report.mismatches.is_empty(),
        "mismatch_count": report.mismatches.len(),
        "pl_b_above_mixed": report.pl_b_above_mixed,
        "pl_b_below_mixed": report.pl_b_below_mixed,
        "mismatches": report.mismatches.iter().take(MAX_LISTED).collect::<Vec<_>>(),
        "mismatch_witnesses": report
            .mismatch_witnesses
            .iter()
            .take(MAX_LISTED)
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect::<serde_json::Map<_, _>>(),
        "ceil_bound_holds": report.ceil_bound_failures.is_empty(),
        "ceil_bound_failures": report.ceil_bound_failures.len(),
        "first_ceil_bound_failures": report.ceil_bound_failures.iter().take(MAX_LISTED).collect::<Vec<_>>(),
    });
    Ok(SuiteResult::new(violations, details))
}
