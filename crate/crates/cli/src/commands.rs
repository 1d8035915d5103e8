use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use palinruler::bitseq::{generate_prefix, to_binary, SeqId};
use palinruler::levelang::{
    dfa_for_run_count, learn_level_set_dfa, level_set, table_membership, verify_dfa, Dfa,
    LearnOutcome,
};
use palinruler::maskcalc::{min_ops_mixed, min_ops_type_a};
use palinruler::palfactor::{enumerate_pal_factors, pal_suffixes_b, suffix_to_mask, PalForm};
use palinruler::pallen::{pal_length_a, pal_length_b, PalLengthTable};
use palinruler::{BinaryWord, PalSeq};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bfile::{BFile, BFileError};
use crate::report::{Report, Status};
use crate::suites::{self, Suite, SuiteError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    BFile(#[from] BFileError),
    #[error(transparent)]
    Suite(#[from] SuiteError),
    #[error(transparent)]
    Core(#[from] palinruler::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Every error is a usage, parse or input problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Seq {
    Ruler,
    PeriodDoubling,
    RunCount,
    PlA,
    PlB,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorSeq {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// `seq(1..=n)`, index `i` in slot `i - 1`.
pub fn sequence_values(seq: Seq, n: u64) -> CliResult<Vec<u32>> {
    Ok(match seq {
        Seq::Ruler => generate_prefix(SeqId::Ruler, n)?,
        Seq::PeriodDoubling => generate_prefix(SeqId::PeriodDoubling, n)?,
        Seq::RunCount => generate_prefix(SeqId::RunCount, n)?,
        Seq::PlA => table_values(&pal_length_a(n)?),
        Seq::PlB => table_values(&pal_length_b(n)?),
    })
}

fn table_values(t: &PalLengthTable) -> Vec<u32> {
    t.iter().map(|(_, v)| v).collect()
}

pub fn gen(seq: Seq, n: u64, format: Format, out: &mut dyn Write) -> CliResult<()> {
    let values = sequence_values(seq, n)?;
    match format {
        Format::Csv => {
            writeln!(out, "n,value")?;
            for (i, v) in values.iter().enumerate() {
                writeln!(out, "{},{}", i + 1, v)?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = values
                .iter()
                .enumerate()
                .map(|(i, v)| json!({ "n": i + 1, "value": v }))
                .collect();
            let doc = json!({
                "schema_version": crate::report::SCHEMA_VERSION,
                "seq": seq,
                "n": n,
                "rows": rows,
            });
            writeln!(out, "{}", serde_json::to_string(&doc).expect("plain JSON"))?;
        }
    }
    Ok(())
}

pub fn factors(seq: FactorSeq, n: u64, format: Format, out: &mut dyn Write) -> CliResult<()> {
    if n == 0 {
        return Err(CliError::Usage("bound must be positive".into()));
    }
    let list = enumerate_pal_factors(
        match seq {
            FactorSeq::A => PalSeq::A,
            FactorSeq::B => PalSeq::B,
        },
        n,
    );
    match format {
        Format::Csv => {
            writeln!(out, "i,j,form,o,v1,v2,x")?;
            for f in &list {
                let (name, o, v1, v2, x) = match f.form {
                    PalForm::Singleton { o, v } => ("singleton", o, v, None, 0),
                    PalForm::ACenter { o, v, x } => ("a-center", o, v, None, x),
                    PalForm::BRight { o, v1, v2, x } => ("b-right", o, v1, Some(v2), x),
                    PalForm::BLeft { o, v1, v2, x } => ("b-left", o, v1, Some(v2), x),
                };
                let v2 = v2.map(|v| v.to_string()).unwrap_or_default();
                writeln!(out, "{},{},{name},{o},{v1},{v2},{x}", f.i, f.j)?;
            }
        }
        Format::Json => {
            let doc = json!({
                "schema_version": crate::report::SCHEMA_VERSION,
                "seq": seq,
                "n": n,
                "factors": list,
            });
            writeln!(out, "{}", serde_json::to_string(&doc).expect("plain JSON"))?;
        }
    }
    Ok(())
}

pub fn verify(suite: Suite, n: u64, max_len: u32) -> CliResult<Report> {
    let result = suites::run(suite, n, max_len)?;
    let status = Status::from_ok(result.passed());
    Ok(Report::new(
        "verify",
        json!({ "suite": suite, "n": n, "max_len": max_len }),
        status,
        serde_json::to_value(&result).expect("plain data"),
    ))
}

/// Compares a b-file with a sequence over the indices both cover.
///
/// `offset` is added to every b-file index to obtain the sequence index;
/// indices below 1 are outside the sequence and skipped.
pub fn oeis_check(path: &Path, seq: Seq, offset: i64) -> CliResult<Report> {
    let bfile = BFile::load(path, offset)?;
    let max_index = bfile
        .entries
        .iter()
        .map(|&(i, _)| i)
        .filter(|&i| i >= 1)
        .max()
        .unwrap_or(0) as u64;
    let values = if max_index >= 1 {
        sequence_values(seq, max_index)?
    } else {
        Vec::new()
    };
    let mut compared = 0u64;
    let mut skipped = 0u64;
    let mut mismatches = Vec::new();
    for &(index, value) in &bfile.entries {
        if index < 1 {
            skipped += 1;
            continue;
        }
        compared += 1;
        let ours = values[(index - 1) as usize] as u64;
        if ours != value {
            mismatches.push(json!({ "index": index, "bfile": value, "computed": ours }));
        }
    }
    let status = Status::from_ok(compared > 0 && mismatches.is_empty());
    let mismatch_count = mismatches.len();
    mismatches.truncate(suites::MAX_LISTED);
    Ok(Report::new(
        "oeis-check",
        json!({ "path": path.display().to_string(), "seq": seq, "offset": offset }),
        status,
        json!({
            "compared": compared,
            "skipped_outside_domain": skipped,
            "first_index": bfile.entries.iter().map(|&(i, _)| i).find(|&i| i >= 1),
            "last_index": if max_index >= 1 { Some(max_index) } else { None },
            "mismatch_count": mismatch_count,
            "mismatches": mismatches,
        }),
    ))
}

pub struct LevelsetArgs<'a> {
    pub seq: Seq,
    pub epsilon: u32,
    pub n: u64,
    pub learn: Option<usize>,
    pub dfa: Option<&'a Path>,
    pub emit_dfa: Option<&'a Path>,
}

pub fn levelset(args: &LevelsetArgs<'_>) -> CliResult<Report> {
    let LevelsetArgs {
        seq,
        epsilon,
        n,
        learn,
        dfa,
        emit_dfa,
    } = *args;
    let values = sequence_values(seq, n)?;
    let ls = level_set(|i| values[(i - 1) as usize], epsilon, n)?;
    let mut ok = true;
    let mut result = serde_json::Map::new();
    result.insert("epsilon".into(), json!(epsilon));
    result.insert("bound".into(), json!(n));
    result.insert("size".into(), json!(ls.members.len()));
    result.insert("members".into(), json!(ls.members));

    if seq == Seq::RunCount {
        let built = dfa_for_run_count(epsilon as usize)?;
        let mismatches = verify_dfa(&built, &ls);
        ok &= mismatches.is_empty();
        result.insert(
            "constructed_dfa".into(),
            json!({
                "states": built.minimize().state_count(),
                "mismatch_count": mismatches.len(),
                "mismatches": mismatches.iter().take(suites::MAX_LISTED).collect::<Vec<_>>(),
            }),
        );
    }

    if let Some(path) = dfa {
        let text = std::fs::read_to_string(path)?;
        let candidate = Dfa::from_text(&text)?;
        let mismatches = verify_dfa(&candidate, &ls);
        ok &= mismatches.is_empty();
        result.insert(
            "dfa_check".into(),
            json!({
                "path": path.display().to_string(),
                "states": candidate.state_count(),
                "mismatch_count": mismatches.len(),
                "mismatches": mismatches.iter().take(suites::MAX_LISTED).collect::<Vec<_>>(),
            }),
        );
    }

    if let Some(max_states) = learn {
        // Answering queries a little past the bound keeps counterexamples
        // near the bound from being judged on unknown answers.
        let horizon = n.saturating_mul(2);
        let outcome = match seq {
            Seq::PlA | Seq::PlB => {
                let table = if seq == Seq::PlA {
                    pal_length_a(horizon)?
                } else {
                    pal_length_b(horizon)?
                };
                learn_level_set_dfa(table_membership(&table, epsilon), n, max_states)
            }
            Seq::Ruler | Seq::PeriodDoubling | Seq::RunCount => {
                let id = match seq {
                    Seq::Ruler => SeqId::Ruler,
                    Seq::PeriodDoubling => SeqId::PeriodDoubling,
                    _ => SeqId::RunCount,
                };
                learn_level_set_dfa(
                    move |i| Some(i >= 1 && id.value(i).ok()? == epsilon),
                    n,
                    max_states,
                )
            }
        };
        match &outcome {
            LearnOutcome::Learned(learned) => {
                let min = learned.dfa.minimize();
                let check = verify_dfa(&learned.dfa, &ls);
                ok &= check.is_empty();
                if let Some(path) = emit_dfa {
                    std::fs::write(path, learned.dfa.to_text())?;
                }
                let mut learned_json = json!({
                    "outcome": "learned",
                    "conjecture": true,
                    "verified_up_to": learned.bound,
                    "states": learned.dfa.state_count(),
                    "minimal_states": min.state_count(),
                    "rounds": learned.rounds,
                    "membership_queries": learned.membership_queries,
                    "unknown_queries": learned.unknown_queries,
                    "verification_mismatches": check.len(),
                    "dfa": learned.dfa.to_text(),
                });
                if seq == Seq::RunCount {
                    let built = dfa_for_run_count(epsilon as usize)?.minimize();
                    learned_json["isomorphic_to_constructed"] = json!(min.is_isomorphic(&built));
                }
                result.insert("learned".into(), learned_json);
            }
            LearnOutcome::Failed(_) => {
                ok = false;
                result.insert(
                    "learned".into(),
                    serde_json::to_value(&outcome).expect("plain data"),
                );
            }
        }
    }

    Ok(Report::new(
        "levelset",
        json!({
            "seq": seq,
            "epsilon": epsilon,
            "n": n,
            "learn": learn,
            "dfa": dfa.map(|p| p.display().to_string()),
        }),
        Status::from_ok(ok),
        Value::Object(result),
    ))
}

/// Largest index for which `masks` also reports `pl_b`.
pub const MASKS_PL_B_LIMIT: u64 = 1 << 24;

pub fn masks(n: Option<u64>, word: Option<&str>, max_len: u32) -> CliResult<Report> {
    let w: BinaryWord = match (n, word) {
        (Some(n), None) => to_binary(n)?,
        (None, Some(text)) => text.parse()?,
        _ => {
            return Err(CliError::Usage(
                "give exactly one of an index or --word".into(),
            ))
        }
    };
    let (a_count, a_ops) = min_ops_type_a(&w)?;
    let mut result = json!({
        "word": w.to_string(),
        "value": w.value(),
        "runs": w.value_run_count(),
        "type_a": {
            "count": a_count,
            "ops": a_ops.ops().iter().map(|op| op.to_string()).collect::<Vec<_>>(),
        },
    });
    if w.len() <= max_len {
        let (count, ops) = min_ops_mixed(&w, max_len)?;
        result["mixed"] = json!({
            "count": count,
            "ops": ops.ops().iter().map(|op| op.to_string()).collect::<Vec<_>>(),
            "replay_ok": ops.apply(&w)?.is_zero(),
        });
    } else {
        result["mixed"] =
            json!({ "skipped": format!("word length {} exceeds --max-len {max_len}", w.len()) });
    }
    let value = w.value();
    if w.is_canonical() && value <= MASKS_PL_B_LIMIT {
        let table = pal_length_b(value)?;
        result["pl_b"] = json!(table.get(value as usize));
        let suffixes: Vec<Value> = pal_suffixes_b(value)
            .iter()
            .map(|f| -> CliResult<Value> {
                Ok(json!({ "start": f.i, "mask": suffix_to_mask(value, f)?.to_string() }))
            })
            .collect::<CliResult<_>>()?;
        result["palindromic_suffixes_b"] = json!(suffixes);
    }
    Ok(Report::new(
        "masks",
        json!({ "n": n, "word": word, "max_len": max_len }),
        Status::Pass,
        result,
    ))
}
