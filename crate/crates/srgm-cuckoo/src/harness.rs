//! Experiment drivers on top of the engine: single fits, best-of-seeds
//! sweeps, full-training comparisons across models × datasets, and
//! split-impact studies.
//!
//! Every driver is deterministic given its inputs. Sweeps and comparison
//! cells are independent fits; with the `parallel` feature (default) they
//! run on the rayon pool, and order-preserving collection keeps results
//! identical to the sequential build.

use thiserror::Error;

use crate::cuckoo::{self, CsConfig, EngineError};
use crate::dataset::{DatasetError, FailureDataset, SplitSpec};
use crate::model::{ModelKind, ParamBounds};
use crate::objective::{evaluate_on, Objective, ObjectiveError};
use crate::report::{Aggregate, CompareReport, EngineStats, FitReport, SplitStudyReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("need at least one seed")]
    ZeroSeeds,
    #[error("need at least one model kind")]
    NoKinds,
    #[error("need at least one dataset")]
    NoDatasets,
    #[error("need at least one train fraction")]
    NoFractions,
    #[error("duplicate train fraction {0}")]
    DuplicateFraction(f64),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
}

/// Map in parallel when the `parallel` feature is on, preserving input
/// order either way.
#[cfg(feature = "parallel")]
fn map_ordered<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_ordered<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}

/// Fit one model to the training slice of `ds` and score the held-out
/// slice (absent for a full-training split).
pub fn fit(
    kind: ModelKind,
    ds: &FailureDataset,
    split: SplitSpec,
    cfg: &CsConfig,
    bounds: &ParamBounds,
) -> Result<FitReport, HarnessError> {
    let (train, test) = ds.split(split);
    let objective = Objective::new(kind, train);
    let outcome = cuckoo::run(&objective, cfg, bounds)?;
    let test_rmse = if test.is_empty() {
        None
    } else {
        Some(evaluate_on(kind, outcome.best.params, &test)?)
    };
    Ok(FitReport {
        model: kind,
        dataset: ds.name().to_string(),
        train_fraction: split.train_fraction(),
        seed: cfg.seed,
        params: outcome.best.params,
        train_rmse: outcome.best.fitness,
        test_rmse,
        config: outcome.config_echo,
        engine: EngineStats {
            generations: outcome.trace.best_fitness_per_generation.len(),
            evaluations: outcome.trace.evaluation_count,
        },
        aggregate: None,
    })
}

/// Fit on the whole series; no held-out score.
pub fn train_full(
    kind: ModelKind,
    ds: &FailureDataset,
    cfg: &CsConfig,
    bounds: &ParamBounds,
) -> Result<FitReport, HarnessError> {
    fit(kind, ds, SplitSpec::full(), cfg, bounds)
}

/// Run `n_seeds` independent fits with seeds `cfg.seed, cfg.seed+1, ...`
/// and keep the one with the lowest training RMSE (first seed wins ties).
/// The winner's report carries mean/sd statistics over the whole sweep.
pub fn fit_best_of(
    kind: ModelKind,
    ds: &FailureDataset,
    split: SplitSpec,
    cfg: &CsConfig,
    bounds: &ParamBounds,
    n_seeds: usize,
) -> Result<FitReport, HarnessError> {
    if n_seeds == 0 {
        return Err(HarnessError::ZeroSeeds);
    }
    let seeds: Vec<u64> = (0..n_seeds as u64)
        .map(|i| cfg.seed.wrapping_add(i))
        .collect();
    let results = map_ordered(seeds, |seed| {
        let cfg_i = CsConfig {
            seed,
            ..cfg.clone()
        };
        fit(kind, ds, split, &cfg_i, bounds)
    });
    let mut reports = Vec::with_capacity(results.len());
    for r in results {
        reports.push(r?);
    }
    let train_rmses: Vec<f64> = reports.iter().map(|r| r.train_rmse).collect();
    let mean = train_rmses.iter().sum::<f64>() / train_rmses.len() as f64;
    let sd = if train_rmses.len() < 2 {
        0.0
    } else {
        let ss: f64 = train_rmses.iter().map(|x| (x - mean) * (x - mean)).sum();
        (ss / (train_rmses.len() - 1) as f64).sqrt()
    };
    let mut best_idx = 0;
    for i in 1..reports.len() {
        if reports[i].train_rmse < reports[best_idx].train_rmse {
            best_idx = i;
        }
    }
    let mut winner = reports.swap_remove(best_idx);
    winner.aggregate = Some(Aggregate {
        n_seeds,
        mean_train_rmse: mean,
        sd_train_rmse: sd,
    });
    Ok(winner)
}

/// Full-training comparison over every dataset × kind cell, each fit
/// best-of-`n_seeds`. Cells are laid out dataset-major, and cell `i` runs
/// with base seed `cfg.seed + i` so cells explore independent streams.
pub fn compare(
    kinds: &[ModelKind],
    datasets: &[FailureDataset],
    cfg: &CsConfig,
    bounds: &ParamBounds,
    n_seeds: usize,
) -> Result<CompareReport, HarnessError> {
    if kinds.is_empty() {
        return Err(HarnessError::NoKinds);
    }
    if datasets.is_empty() {
        return Err(HarnessError::NoDatasets);
    }
    if n_seeds == 0 {
        return Err(HarnessError::ZeroSeeds);
    }
    let mut cells_in: Vec<(u64, usize, ModelKind)> =
        Vec::with_capacity(kinds.len() * datasets.len());
    for (d_idx, _) in datasets.iter().enumerate() {
        for &kind in kinds {
            let cell_index = cells_in.len() as u64;
            cells_in.push((cell_index, d_idx, kind));
        }
    }
    let results = map_ordered(cells_in, |(cell_index, d_idx, kind)| {
        let cfg_i = CsConfig {
            seed: cfg.seed.wrapping_add(cell_index),
            ..cfg.clone()
        };
        fit_best_of(
            kind,
            &datasets[d_idx],
            SplitSpec::full(),
            &cfg_i,
            bounds,
            n_seeds,
        )
    });
    let mut cells = Vec::with_capacity(results.len());
    for r in results {
        cells.push(r?);
    }
    Ok(CompareReport {
        kinds: kinds.to_vec(),
        datasets: datasets.iter().map(|d| d.name().to_string()).collect(),
        cells,
        references: Vec::new(),
    })
}

/// How train/test allocation affects fit quality: one best-of-`n_seeds`
/// fit per fraction, reported in descending fraction order.
pub fn split_study(
    kind: ModelKind,
    ds: &FailureDataset,
    fractions: &[f64],
    cfg: &CsConfig,
    bounds: &ParamBounds,
    n_seeds: usize,
) -> Result<SplitStudyReport, HarnessError> {
    if fractions.is_empty() {
        return Err(HarnessError::NoFractions);
    }
    let mut specs = Vec::with_capacity(fractions.len());
    for &f in fractions {
        specs.push(SplitSpec::new(f)?);
    }
    specs.sort_by(|x, y| y.train_fraction().partial_cmp(&x.train_fraction()).unwrap());
    for w in specs.windows(2) {
        if w[0].train_fraction() == w[1].train_fraction() {
            return Err(HarnessError::DuplicateFraction(w[0].train_fraction()));
        }
    }
    let mut rows = Vec::with_capacity(specs.len());
    for spec in specs {
        rows.push(fit_best_of(kind, ds, spec, cfg, bounds, n_seeds)?);
    }
    Ok(SplitStudyReport {
        model: kind,
        dataset: ds.name().to_string(),
        rows,
    })
}
