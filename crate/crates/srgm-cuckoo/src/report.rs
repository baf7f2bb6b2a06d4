//! Report types and their JSON/CSV renderings.
//!
//! Schemas are load-bearing: downstream tooling parses them, so the JSON
//! key set and the CSV header are fixed and covered by tests. JSON
//! round-trips through [`from_json`] without loss.

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::cuckoo::CsConfig;
use crate::model::{ModelKind, Params};

/// Engine effort actually spent on the reported fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineStats {
    pub generations: usize,
    pub evaluations: u64,
}

/// Sweep statistics attached to a best-of-seeds winner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub n_seeds: usize,
    pub mean_train_rmse: f64,
    pub sd_train_rmse: f64,
}

/// One completed fit. `test_rmse` is absent (JSON `null`, empty CSV field)
/// when the split left no held-out records; `aggregate` is present only on
/// best-of-seeds winners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: ModelKind,
    pub dataset: String,
    pub train_fraction: f64,
    pub seed: u64,
    pub params: Params,
    pub train_rmse: f64,
    pub test_rmse: Option<f64>,
    pub config: CsConfig,
    pub engine: EngineStats,
    pub aggregate: Option<Aggregate>,
}

/// Split-impact study: one best-of-seeds row per train fraction, in
/// descending fraction order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitStudyReport {
    pub model: ModelKind,
    pub dataset: String,
    pub rows: Vec<FitReport>,
}

/// A published value to draw alongside computed cells, e.g. a figure from
/// another estimator. Never recomputed; carried verbatim into plot data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValue {
    pub dataset: String,
    pub model: ModelKind,
    pub label: String,
    pub value: f64,
}

/// Full-training comparison grid, cells dataset-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub kinds: Vec<ModelKind>,
    pub datasets: Vec<String>,
    pub cells: Vec<FitReport>,
    pub references: Vec<ReferenceValue>,
}

impl CompareReport {
    /// Attach a reference value for one (dataset, kind) cell.
    pub fn with_reference(
        mut self,
        dataset: impl Into<String>,
        model: ModelKind,
        label: impl Into<String>,
        value: f64,
    ) -> Self {
        self.references.push(ReferenceValue {
            dataset: dataset.into(),
            model,
            label: label.into(),
            value,
        });
        self
    }

    pub fn cell(&self, dataset: &str, model: ModelKind) -> Option<&FitReport> {
        self.cells
            .iter()
            .find(|c| c.dataset == dataset && c.model == model)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize infallibly");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T, serde_json::Error> {
    serde_json::from_str(s)
}

/// Fixed column set of every CSV rendering.
pub const CSV_HEADER: &str = "model,dataset,train_fraction,seed,a,b,train_rmse,test_rmse";

fn csv_row(r: &FitReport) -> String {
    let test = r.test_rmse.map(|v| v.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{}",
        r.model, r.dataset, r.train_fraction, r.seed, r.params.a, r.params.b, r.train_rmse, test
    )
}

/// Header plus one row per report. `f64` fields print in shortest
/// round-trip form, so parsing the cell back yields the identical bits.
pub fn to_csv<'a>(rows: impl IntoIterator<Item = &'a FitReport>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}

impl FitReport {
    pub fn to_csv(&self) -> String {
        to_csv(std::iter::once(self))
    }
}

impl SplitStudyReport {
    pub fn to_csv(&self) -> String {
        to_csv(&self.rows)
    }
}

impl CompareReport {
    pub fn to_csv(&self) -> String {
        to_csv(&self.cells)
    }

    /// Plot-ready rows for one dataset: `model group value` per line,
    /// gnuplot/awk-friendly. Reference values (in attachment order) come
    /// before the computed `cs` cell of each kind.
    pub fn plot_rows(&self, dataset: &str) -> String {
        let mut out = String::from("# model group value\n");
        for &kind in &self.kinds {
            for r in &self.references {
                if r.dataset == dataset && r.model == kind {
                    out.push_str(&format!("{} {} {}\n", kind, r.label, r.value));
                }
            }
            if let Some(cell) = self.cell(dataset, kind) {
                out.push_str(&format!("{} cs {}\n", kind, cell.train_rmse));
            }
        }
        out
    }
}
