//! OEIS b-file ingestion.
//!
//! A b-file is a list of `index value` lines. Lines starting with `#` and
//! blank lines are skipped.

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BFileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Parsed entries with `offset` already added to every index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BFile {
    pub entries: Vec<(i64, u64)>,
    pub offset: i64,
}

impl BFile {
    pub fn parse(text: &str, offset: i64) -> Result<Self, BFileError> {
        let mut entries: Vec<(i64, u64)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut fields = trimmed.split_whitespace();
            let (Some(i), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(BFileError::Parse {
                    line,
                    msg: format!("expected `index value`, got {trimmed:?}"),
                });
            };
            let index: i64 = i.parse().map_err(|_| BFileError::Parse {
                line,
                msg: format!("bad index {i:?}"),
            })?;
            let value: u64 = v.parse().map_err(|_| BFileError::Parse {
                line,
                msg: format!("bad value {v:?} (values must be nonnegative integers)"),
            })?;
            let index = index.checked_add(offset).ok_or_else(|| BFileError::Parse {
                line,
                msg: "index overflows after offset".into(),
            })?;
            if let Some(&(prev, _)) = entries.last() {
                if index <= prev {
                    return Err(BFileError::Parse {
                        line,
                        msg: format!("index {index} does not increase (previous {prev})"),
                    });
                }
            }
            entries.push((index, value));
        }
        Ok(BFile { entries, offset })
    }

    pub fn load(path: &Path, offset: i64) -> Result<Self, BFileError> {
        let text = std::fs::read_to_string(path).map_err(|source| BFileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, offset)
    }
}
