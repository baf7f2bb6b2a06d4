//! Mean-value and failure-intensity functions for the four supported
//! software reliability growth models.
//!
//! Every model maps a parameter pair `(a, b)` and a time `t ≥ 0` to the
//! expected cumulative failure count μ(t); the intensity λ(t) is its time
//! derivative. `a` acts as a scale (total or reference failure content) and
//! `b` as a rate/shape parameter:
//!
//! | kind | μ(t)                      | λ(t)              |
//! |------|---------------------------|-------------------|
//! | go   | a·(1 − e^(−bt))           | a·b·e^(−bt)       |
//! | pow  | a·t^b                     | a·b·t^(b−1)       |
//! | dss  | a·(1 − (1 + bt)·e^(−bt))  | a·b²·t·e^(−bt)    |
//! | mo   | a·ln(1 + bt)              | a·b / (1 + bt)    |
//!
//! go is Goel-Okumoto (1979), pow the Duane/Crow power law, dss the Yamada
//! delayed S-shaped model, and mo Musa-Okumoto logarithmic Poisson. The
//! first three saturate or grow polynomially; mo grows without bound but
//! ever more slowly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which growth model to evaluate. Codes: `go`, `pow`, `dss`, `mo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "go")]
    GoelOkumoto,
    #[serde(rename = "pow")]
    Power,
    #[serde(rename = "dss")]
    DelayedSShaped,
    #[serde(rename = "mo")]
    MusaOkumoto,
}

/// All kinds, in canonical presentation order.
pub const ALL_KINDS: [ModelKind; 4] = [
    ModelKind::GoelOkumoto,
    ModelKind::Power,
    ModelKind::DelayedSShaped,
    ModelKind::MusaOkumoto,
];

impl ModelKind {
    /// Short stable code used in CLI arguments and report columns.
    pub fn code(self) -> &'static str {
        match self {
            ModelKind::GoelOkumoto => "go",
            ModelKind::Power => "pow",
            ModelKind::DelayedSShaped => "dss",
            ModelKind::MusaOkumoto => "mo",
        }
    }

    /// Human-readable model name.
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::GoelOkumoto => "Goel-Okumoto",
            ModelKind::Power => "Power",
            ModelKind::DelayedSShaped => "Delayed S-Shaped",
            ModelKind::MusaOkumoto => "Musa-Okumoto",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ModelKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "go" => Ok(ModelKind::GoelOkumoto),
            "pow" => Ok(ModelKind::Power),
            "dss" => Ok(ModelKind::DelayedSShaped),
            "mo" => Ok(ModelKind::MusaOkumoto),
            other => Err(ModelError::UnknownKind(other.to_string())),
        }
    }
}

/// A point in the search space: scale `a` and rate/shape `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub a: f64,
    pub b: f64,
}

impl Params {
    pub fn new(a: f64, b: f64) -> Result<Self, ModelError> {
        let p = Params { a, b };
        p.check()?;
        Ok(p)
    }

    /// Both components must be finite and strictly positive.
    pub fn check(&self) -> Result<(), ModelError> {
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(ModelError::InvalidScale(self.a));
        }
        if !(self.b.is_finite() && self.b > 0.0) {
            return Err(ModelError::InvalidRate(self.b));
        }
        Ok(())
    }
}

/// Rectangular search region for `(a, b)`, inclusive on all edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamBounds {
    a_lower: f64,
    a_upper: f64,
    b_lower: f64,
    b_upper: f64,
}

/// The default search region: a ∈ [1e-5, 2000], b ∈ [1e-5, 1].
pub fn default_bounds() -> ParamBounds {
    ParamBounds {
        a_lower: 1e-5,
        a_upper: 2000.0,
        b_lower: 1e-5,
        b_upper: 1.0,
    }
}

impl Default for ParamBounds {
    fn default() -> Self {
        default_bounds()
    }
}

impl ParamBounds {
    /// Lower edges must be positive and finite, and each upper edge must
    /// exceed its lower edge.
    pub fn new(a_lower: f64, a_upper: f64, b_lower: f64, b_upper: f64) -> Result<Self, ModelError> {
        let ok = |lo: f64, hi: f64| lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi;
        if !ok(a_lower, a_upper) {
            return Err(ModelError::InvalidBounds {
                param: 'a',
                lower: a_lower,
                upper: a_upper,
            });
        }
        if !ok(b_lower, b_upper) {
            return Err(ModelError::InvalidBounds {
                param: 'b',
                lower: b_lower,
                upper: b_upper,
            });
        }
        Ok(ParamBounds {
            a_lower,
            a_upper,
            b_lower,
            b_upper,
        })
    }

    pub fn a_lower(&self) -> f64 {
        self.a_lower
    }

    pub fn a_upper(&self) -> f64 {
        self.a_upper
    }

    pub fn b_lower(&self) -> f64 {
        self.b_lower
    }

    pub fn b_upper(&self) -> f64 {
        self.b_upper
    }

    pub fn a_width(&self) -> f64 {
        self.a_upper - self.a_lower
    }

    pub fn b_width(&self) -> f64 {
        self.b_upper - self.b_lower
    }

    /// Check membership, edges included.
    pub fn contains(&self, p: Params) -> bool {
        (self.a_lower..=self.a_upper).contains(&p.a) && (self.b_lower..=self.b_upper).contains(&p.b)
    }

    pub fn validate(&self, p: Params) -> Result<(), ModelError> {
        p.check()?;
        if !(self.a_lower..=self.a_upper).contains(&p.a) {
            return Err(ModelError::OutOfBounds {
                param: 'a',
                value: p.a,
                lower: self.a_lower,
                upper: self.a_upper,
            });
        }
        if !(self.b_lower..=self.b_upper).contains(&p.b) {
            return Err(ModelError::OutOfBounds {
                param: 'b',
                value: p.b,
                lower: self.b_lower,
                upper: self.b_upper,
            });
        }
        Ok(())
    }

    /// Clamp a candidate onto the region, component-wise.
    pub fn clamp(&self, p: Params) -> Params {
        Params {
            a: p.a.clamp(self.a_lower, self.a_upper),
            b: p.b.clamp(self.b_lower, self.b_upper),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("unknown model {0:?} (expected one of: go, pow, dss, mo)")]
    UnknownKind(String),
    #[error("scale parameter a must be finite and positive, got {0}")]
    InvalidScale(f64),
    #[error("rate parameter b must be finite and positive, got {0}")]
    InvalidRate(f64),
    #[error("time must be finite and non-negative, got {0}")]
    InvalidTime(f64),
    #[error("power-law intensity diverges at t = 0 for b < 1 (b = {0})")]
    PowerIntensityAtZero(f64),
    #[error("model evaluation produced a non-finite value")]
    NonFinite,
    #[error("invalid bounds for {param}: [{lower}, {upper}]")]
    InvalidBounds { param: char, lower: f64, upper: f64 },
    #[error("{param} = {value} outside [{lower}, {upper}]")]
    OutOfBounds {
        param: char,
        value: f64,
        lower: f64,
        upper: f64,
    },
}

fn check_time(t: f64) -> Result<(), ModelError> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(ModelError::InvalidTime(t));
    }
    Ok(())
}

impl ModelKind {
    /// Expected cumulative failures μ(t).
    ///
    /// Non-decreasing in `t` with μ(0) = 0 for every kind. The go and dss
    /// forms are written via `exp_m1` so that small `b·t` does not cancel.
    pub fn mean_value(self, p: Params, t: f64) -> Result<f64, ModelError> {
        p.check()?;
        check_time(t)?;
        let Params { a, b } = p;
        let x = b * t;
        let mu = match self {
            ModelKind::GoelOkumoto => a * -f64::exp_m1(-x),
            ModelKind::Power => {
                if t == 0.0 {
                    0.0
                } else {
                    a * t.powf(b)
                }
            }
            // 1 − (1+x)e^(−x) = −expm1(−x) − x·e^(−x), grouped to keep the
            // leading x terms cancelling in the sum rather than against 1.
            ModelKind::DelayedSShaped => a * (-f64::exp_m1(-x) - x * (-x).exp()),
            ModelKind::MusaOkumoto => a * f64::ln_1p(x),
        };
        if mu.is_finite() {
            Ok(mu)
        } else {
            Err(ModelError::NonFinite)
        }
    }

    /// Failure intensity λ(t) = dμ/dt.
    ///
    /// For pow with b < 1 the intensity diverges as t → 0, so t = 0 is a
    /// domain error there; b = 1 gives λ(0) = a and b > 1 gives λ(0) = 0.
    pub fn intensity(self, p: Params, t: f64) -> Result<f64, ModelError> {
        p.check()?;
        check_time(t)?;
        let Params { a, b } = p;
        let x = b * t;
        let lambda = match self {
            ModelKind::GoelOkumoto => a * b * (-x).exp(),
            ModelKind::Power => {
                if t == 0.0 && b < 1.0 {
                    return Err(ModelError::PowerIntensityAtZero(b));
                }
                a * b * t.powf(b - 1.0)
            }
            ModelKind::DelayedSShaped => a * b * b * t * (-x).exp(),
            ModelKind::MusaOkumoto => a * b / (1.0 + x),
        };
        if lambda.is_finite() {
            Ok(lambda)
        } else {
            Err(ModelError::NonFinite)
        }
    }
}
