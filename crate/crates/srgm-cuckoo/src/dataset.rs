//! Cumulative-failure datasets: ingestion, validation, chronological
//! splitting, and seeded synthetic generation.
//!
//! A dataset is a series of `(time, cumulative_failures)` records with
//! strictly increasing positive times and non-decreasing non-negative
//! failure counts. Counts are kept as `f64` so synthetic data with
//! fractional expected counts needs no rounding.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ModelError, ModelKind, Params};

/// Fewest records a dataset (or a training slice) may hold.
pub const MIN_RECORDS: usize = 3;

/// One observation: cumulative failures seen by `time`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub time: f64,
    pub cumulative_failures: f64,
}

/// A validated failure series. Construction is the only way to obtain one,
/// so every instance upholds the ordering invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureDataset {
    name: String,
    records: Vec<FailureRecord>,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected `time,failures`, got {found:?}")]
    Malformed { line: usize, found: String },
    #[error("line {line}: {field} is not a number: {value:?}")]
    BadNumber {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("line {line}: time {time} is not positive and finite")]
    BadTime { line: usize, time: f64 },
    #[error("line {line}: time not strictly increasing ({prev} then {time})")]
    TimeNotIncreasing { line: usize, prev: f64, time: f64 },
    #[error("line {line}: cumulative failures {value} is negative or non-finite")]
    BadCount { line: usize, value: f64 },
    #[error("line {line}: cumulative failures decreased ({prev} then {value})")]
    CountDecreased { line: usize, prev: f64, value: f64 },
    #[error("dataset {name:?} has {count} records, need at least {MIN_RECORDS}")]
    TooFewRecords { name: String, count: usize },
    #[error("train fraction {0} outside [0.5, 1.0]")]
    InvalidFraction(f64),
    #[error("generation times invalid: {0}")]
    BadGenerationTimes(String),
    #[error("noise standard deviation {0} must be finite and non-negative")]
    BadNoiseSd(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl FailureDataset {
    /// Validate and wrap records. Error line numbers refer to the 1-based
    /// record position; use [`FailureDataset::parse`] for file line numbers.
    pub fn new(name: impl Into<String>, records: Vec<FailureRecord>) -> Result<Self, DatasetError> {
        let name = name.into();
        let numbered: Vec<(usize, FailureRecord)> = records
            .iter()
            .copied()
            .enumerate()
            .map(|(i, r)| (i + 1, r))
            .collect();
        check_invariants(&numbered)?;
        if records.len() < MIN_RECORDS {
            return Err(DatasetError::TooFewRecords {
                name,
                count: records.len(),
            });
        }
        Ok(FailureDataset { name, records })
    }

    /// Wrap a suffix of an already-validated series: ordering holds by
    /// construction and the minimum-size rule is waived (test slices may
    /// even be empty).
    fn from_validated(name: String, records: Vec<FailureRecord>) -> Self {
        FailureDataset { name, records }
    }

    /// Parse CSV text: `time,failures` per line, `#` comments and blank
    /// lines skipped, an optional `time,failures` header tolerated.
    /// Reported line numbers are positions in `text`.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self, DatasetError> {
        let name = name.into();
        let mut numbered: Vec<(usize, FailureRecord)> = Vec::new();
        let mut seen_content = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if !seen_content {
                seen_content = true;
                let lowered = trimmed.to_ascii_lowercase();
                let mut fields = lowered.split(',').map(str::trim);
                if fields.next() == Some("time")
                    && matches!(fields.next(), Some("failures" | "cumulative_failures"))
                    && fields.next().is_none()
                {
                    continue;
                }
            }
            let mut fields = trimmed.split(',').map(str::trim);
            let (Some(t_str), Some(m_str), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(DatasetError::Malformed {
                    line,
                    found: trimmed.to_string(),
                });
            };
            let time: f64 = t_str.parse().map_err(|_| DatasetError::BadNumber {
                line,
                field: "time",
                value: t_str.to_string(),
            })?;
            let cumulative_failures: f64 = m_str.parse().map_err(|_| DatasetError::BadNumber {
                line,
                field: "failures",
                value: m_str.to_string(),
            })?;
            numbered.push((
                line,
                FailureRecord {
                    time,
                    cumulative_failures,
                },
            ));
        }
        check_invariants(&numbered)?;
        if numbered.len() < MIN_RECORDS {
            return Err(DatasetError::TooFewRecords {
                name,
                count: numbered.len(),
            });
        }
        Ok(FailureDataset {
            name,
            records: numbered.into_iter().map(|(_, r)| r).collect(),
        })
    }

    /// Load from a CSV file; the dataset is named after the file stem.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, DatasetError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| DatasetError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        Self::parse(name, &text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn records(&self) -> &[FailureRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Serialize back to the CSV form accepted by [`FailureDataset::parse`].
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time,failures\n");
        for r in &self.records {
            let _ = writeln!(out, "{},{}", r.time, r.cumulative_failures);
        }
        out
    }

    /// Chronological prefix split. The train slice takes the first
    /// `round(fraction × len)` records (half rounds up), clamped to at
    /// least [`MIN_RECORDS`]; the test slice is the remainder and may be
    /// empty. Concatenating the two slices reproduces the original series.
    pub fn split(&self, spec: SplitSpec) -> (FailureDataset, FailureDataset) {
        let n = self.records.len();
        let raw = (spec.train_fraction * n as f64).round() as usize;
        let n_train = raw.clamp(MIN_RECORDS.min(n), n);
        let train =
            FailureDataset::from_validated(self.name.clone(), self.records[..n_train].to_vec());
        let test =
            FailureDataset::from_validated(self.name.clone(), self.records[n_train..].to_vec());
        (train, test)
    }
}

fn check_invariants(numbered: &[(usize, FailureRecord)]) -> Result<(), DatasetError> {
    let mut prev: Option<&FailureRecord> = None;
    for (line, r) in numbered {
        if !(r.time.is_finite() && r.time > 0.0) {
            return Err(DatasetError::BadTime {
                line: *line,
                time: r.time,
            });
        }
        if !(r.cumulative_failures.is_finite() && r.cumulative_failures >= 0.0) {
            return Err(DatasetError::BadCount {
                line: *line,
                value: r.cumulative_failures,
            });
        }
        if let Some(p) = prev {
            if r.time <= p.time {
                return Err(DatasetError::TimeNotIncreasing {
                    line: *line,
                    prev: p.time,
                    time: r.time,
                });
            }
            if r.cumulative_failures < p.cumulative_failures {
                return Err(DatasetError::CountDecreased {
                    line: *line,
                    prev: p.cumulative_failures,
                    value: r.cumulative_failures,
                });
            }
        }
        prev = Some(r);
    }
    Ok(())
}

/// Fraction of records that go to the training slice, in [0.5, 1.0].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    train_fraction: f64,
}

impl SplitSpec {
    pub fn new(train_fraction: f64) -> Result<Self, DatasetError> {
        if !(train_fraction.is_finite() && (0.5..=1.0).contains(&train_fraction)) {
            return Err(DatasetError::InvalidFraction(train_fraction));
        }
        Ok(SplitSpec { train_fraction })
    }

    /// Keep everything for training; the test slice comes out empty.
    pub fn full() -> Self {
        SplitSpec {
            train_fraction: 1.0,
        }
    }

    pub fn train_fraction(&self) -> f64 {
        self.train_fraction
    }
}

/// Generate a synthetic dataset from a model curve plus Gaussian noise.
///
/// Each draw is μ(t_j) + ε_j with ε_j ~ N(0, noise_sd²), made into a valid
/// cumulative series by a running maximum floored at zero. `noise_sd = 0`
/// reproduces the exact mean curve for any seed. Deterministic in `seed`.
pub fn generate(
    kind: ModelKind,
    params: Params,
    times: &[f64],
    noise_sd: f64,
    seed: u64,
) -> Result<FailureDataset, DatasetError> {
    if times.is_empty() {
        return Err(DatasetError::BadGenerationTimes("no times given".into()));
    }
    if !(noise_sd.is_finite() && noise_sd >= 0.0) {
        return Err(DatasetError::BadNoiseSd(noise_sd));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // noise_sd = 0 short-circuits sampling, so the output provably cannot
    // depend on the seed
    let noise = if noise_sd > 0.0 {
        Some(Normal::new(0.0, noise_sd).expect("finite positive sd"))
    } else {
        None
    };
    let mut records = Vec::with_capacity(times.len());
    let mut level = f64::NEG_INFINITY;
    for &t in times {
        let mu = kind.mean_value(params, t)?;
        let eps = noise.as_ref().map_or(0.0, |n| n.sample(&mut rng));
        level = level.max(mu + eps);
        records.push(FailureRecord {
            time: t,
            cumulative_failures: level.max(0.0),
        });
    }
    let name = format!("synthetic-{}", kind.code());
    FailureDataset::new(name, records)
}
