//! RMSE fitness binding a model kind to a failure dataset.
//!
//! Fitness of a candidate `(a, b)` is the root-mean-square error between
//! observed cumulative failures and the model curve over the bound data:
//! sqrt(Σ (m_j − μ(t_j))² / N). Lower is better; the search engine
//! minimizes this value directly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::FailureDataset;
use crate::model::{ModelError, ModelKind, Params};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObjectiveError {
    #[error("cannot evaluate on an empty dataset")]
    EmptyEvaluationSet,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("residual accumulation overflowed to a non-finite value")]
    NonFinite,
}

/// A model kind bound to the dataset it is scored against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    kind: ModelKind,
    data: FailureDataset,
}

impl Objective {
    pub fn new(kind: ModelKind, data: FailureDataset) -> Self {
        Objective { kind, data }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn data(&self) -> &FailureDataset {
        &self.data
    }

    /// RMSE of the candidate over the bound dataset.
    pub fn rmse(&self, p: Params) -> Result<f64, ObjectiveError> {
        evaluate_on(self.kind, p, &self.data)
    }
}

/// RMSE of `(kind, p)` over an arbitrary dataset, e.g. a held-out slice.
pub fn evaluate_on(
    kind: ModelKind,
    p: Params,
    data: &FailureDataset,
) -> Result<f64, ObjectiveError> {
    if data.is_empty() {
        return Err(ObjectiveError::EmptyEvaluationSet);
    }
    let mut sum_sq = 0.0_f64;
    for r in data.records() {
        let mu = kind.mean_value(p, r.time)?;
        let resid = r.cumulative_failures - mu;
        sum_sq += resid * resid;
    }
    let rmse = (sum_sq / data.len() as f64).sqrt();
    if rmse.is_finite() {
        Ok(rmse)
    } else {
        Err(ObjectiveError::NonFinite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate, FailureRecord};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn ds(records: Vec<FailureRecord>) -> FailureDataset {
        FailureDataset::new("t", records).unwrap()
    }

    fn rec(time: f64, m: f64) -> FailureRecord {
        FailureRecord {
            time,
            cumulative_failures: m,
        }
    }

    /// Reference accumulator: Kahan compensated summation over reversed
    /// record order. Agreement with the production loop bounds the
    /// round-off of plain summation.
    fn kahan_reversed_rmse(kind: ModelKind, p: Params, data: &FailureDataset) -> f64 {
        let mut sum = 0.0_f64;
        let mut c = 0.0_f64;
        for r in data.records().iter().rev() {
            let mu = kind.mean_value(p, r.time).unwrap();
            let sq = (r.cumulative_failures - mu) * (r.cumulative_failures - mu);
            let y = sq - c;
            let t = sum + y;
            c = (t - sum) - y;
            sum = t;
        }
        (sum / data.len() as f64).sqrt()
    }

    #[test]
    fn perfect_fit_scores_zero() {
        let p = Params { a: 150.0, b: 0.05 };
        let data = generate(
            ModelKind::GoelOkumoto,
            p,
            &(1..=50).map(|i| i as f64).collect::<Vec<_>>(),
            0.0,
            0,
        )
        .unwrap();
        let obj = Objective::new(ModelKind::GoelOkumoto, data);
        assert_abs_diff_eq!(obj.rmse(p).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_offset_equals_offset() {
        // three points each off by exactly 3 from the mo curve
        let p = Params { a: 50.0, b: 0.02 };
        let kind = ModelKind::MusaOkumoto;
        let records = [10.0, 25.0, 50.0]
            .iter()
            .map(|&t| rec(t, kind.mean_value(p, t).unwrap() + 3.0))
            .collect();
        let obj = Objective::new(kind, ds(records));
        assert_relative_eq!(obj.rmse(p).unwrap(), 3.0, max_relative = 1e-12);
    }

    #[test]
    fn two_residual_worked_example() {
        // residuals 3 and 4 among four zeros: sqrt(25/4) = 2.5
        let p = Params { a: 10.0, b: 1.0 };
        let kind = ModelKind::Power; // μ(t) = 10·t
        let records = vec![
            rec(1.0, 10.0),
            rec(2.0, 23.0),
            rec(3.0, 30.0),
            rec(4.0, 44.0),
        ];
        let obj = Objective::new(kind, ds(records));
        assert_relative_eq!(obj.rmse(p).unwrap(), 2.5, max_relative = 1e-15);
    }

    #[test]
    fn two_point_test_slice_scores_sqrt_of_half_sum() {
        // residuals 3 and 4 on the held-out slice: sqrt((9+16)/2)
        let p = Params { a: 10.0, b: 1.0 };
        let kind = ModelKind::Power; // μ(t) = 10·t
        let full = ds(vec![
            rec(1.0, 10.0),
            rec(2.0, 20.0),
            rec(3.0, 30.0),
            rec(4.0, 43.0),
            rec(5.0, 54.0),
        ]);
        let (_, test) = full.split(crate::dataset::SplitSpec::new(0.6).unwrap());
        assert_eq!(test.len(), 2);
        let got = evaluate_on(kind, p, &test).unwrap();
        assert_relative_eq!(got, 3.5355339059327378, max_relative = 1e-15);
    }

    #[test]
    fn empty_evaluation_set_is_an_error() {
        let data = ds(vec![rec(1.0, 1.0), rec(2.0, 2.0), rec(3.0, 3.0)]);
        let (_, test) = data.split(crate::dataset::SplitSpec::full());
        assert!(test.is_empty());
        let p = Params { a: 1.0, b: 0.5 };
        assert_eq!(
            evaluate_on(ModelKind::GoelOkumoto, p, &test),
            Err(ObjectiveError::EmptyEvaluationSet)
        );
    }

    #[test]
    fn invalid_params_propagate() {
        let data = ds(vec![rec(1.0, 1.0), rec(2.0, 2.0), rec(3.0, 3.0)]);
        let obj = Objective::new(ModelKind::GoelOkumoto, data);
        assert!(matches!(
            obj.rmse(Params { a: -5.0, b: 0.1 }),
            Err(ObjectiveError::Model(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_kahan_reference(
            a_true in 10.0f64..500.0,
            b_true in 0.01f64..0.5,
            a in 10.0f64..500.0,
            b in 0.01f64..0.5,
            sd in 0.0f64..10.0,
            n in 3usize..200,
            seed in 0u64..100,
        ) {
            let ts: Vec<f64> = (1..=n).map(|i| i as f64).collect();
            let data = generate(
                ModelKind::GoelOkumoto,
                Params { a: a_true, b: b_true },
                &ts,
                sd,
                seed,
            ).unwrap();
            let p = Params { a, b };
            let got = evaluate_on(ModelKind::GoelOkumoto, p, &data).unwrap();
            let want = kahan_reversed_rmse(ModelKind::GoelOkumoto, p, &data);
            prop_assert!(
                (got - want).abs() <= 1e-12 * want.max(1.0),
                "got {got}, reference {want}"
            );
        }

        #[test]
        fn rmse_is_nonnegative_and_finite(
            a in 1e-5f64..2000.0,
            b in 1e-5f64..1.0,
        ) {
            let data = ds(vec![rec(5.0, 8.0), rec(9.0, 11.0), rec(14.0, 20.0)]);
            let r = evaluate_on(ModelKind::MusaOkumoto, Params { a, b }, &data).unwrap();
            prop_assert!(r.is_finite() && r >= 0.0);
        }
    }
}
