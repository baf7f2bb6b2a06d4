//! Parameter estimation for software reliability growth models (SRGMs)
//! using cuckoo search with Lévy flights.
//!
//! A software reliability growth model relates elapsed testing time to the
//! expected cumulative number of failures found. Fitting one to observed
//! failure data is a nonlinear least-squares problem over the model's
//! `(a, b)` parameter pair; this crate solves it with the cuckoo search
//! metaheuristic (Yang & Deb 2009) and evaluates fits by root-mean-square
//! error on chronological train/test splits.
//!
//! The pieces:
//!
//! - [`model`]: mean-value μ(t) and intensity λ(t) for the Goel-Okumoto,
//!   Power, Delayed S-Shaped, and Musa-Okumoto models, plus search bounds.
//! - [`dataset`]: ingestion and validation of `(time, cumulative failures)`
//!   series, chronological splitting, and a seeded synthetic generator.
//! - [`objective`]: the RMSE fitness binding a model to a dataset.
//! - [`cuckoo`]: the search engine: Lévy-flight proposals, random-nest
//!   comparison, worst-fraction abandonment, elitism.
//! - [`harness`]: experiment drivers: single fits, full-training
//!   comparisons across models × datasets, and split-impact studies.
//! - [`report`]: JSON/CSV report emission with stable schemas.
//!
//! Independent fits (comparison cells, seed sweeps) run data-parallel via
//! rayon when the `parallel` feature is enabled (the default); disabling it
//! yields a fully sequential build with identical outputs.

pub mod cuckoo;
pub mod dataset;
pub mod harness;
pub mod model;
pub mod objective;
pub mod report;

pub use cuckoo::{
    levy_sample, propose, run, CsConfig, CuckooSearch, EngineError, FitOutcome, LevySampler, Nest,
    RunTrace,
};
pub use dataset::{FailureDataset, FailureRecord, SplitSpec};
pub use harness::{compare, fit, fit_best_of, split_study, train_full, HarnessError};
pub use model::{default_bounds, ModelKind, Params};
pub use objective::{evaluate_on, Objective};
pub use report::{CompareReport, FitReport, SplitStudyReport};
