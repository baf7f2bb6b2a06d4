//! Cuckoo search with Lévy flights over the `(a, b)` plane.
//!
//! The metaheuristic follows Yang & Deb (2009): a population of nests each
//! holds one candidate solution (here the two-component egg `(a, b)`). Each
//! generation, cuckoos lay eggs perturbed from a randomly chosen nest by a
//! Lévy-flight step; a laid egg replaces a second randomly chosen nest only
//! if strictly fitter. A fixed fraction `pa` of the worst nests is then
//! abandoned and redrawn uniformly, never touching the single best nest, so
//! the population best is monotone across generations.
//!
//! Lévy steps use Mantegna's algorithm (Mantegna 1994): with tail index
//! β = exponent − 1, the step is u/|v|^(1/β) where u ~ N(0, σ_u²),
//! v ~ N(0, 1), giving power-law tails whose probability density falls off
//! as |s|^(−exponent). At exponent = 3 (β = 2) the stable law degenerates
//! to the Gaussian, which is sampled directly.
//!
//! Everything is driven by one ChaCha8 stream seeded from the config, so a
//! run is bit-for-bit reproducible for a given build.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use thiserror::Error;

use crate::model::{ParamBounds, Params};
use crate::objective::Objective;

/// Engine tuning knobs. `Default` gives the reference configuration:
/// 10 nests, 1 cuckoo per generation, 100 generations, α = 0.01,
/// pa = 0.25, Lévy exponent 1.5, seed 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsConfig {
    /// Population size; at least 2 so comparison nests exist.
    pub n_nests: usize,
    /// Lévy-flight proposals made per generation.
    pub n_cuckoos_per_gen: usize,
    /// Egg-vector length per nest; must equal 2, the `(a, b)` dimension.
    pub eggs_per_nest: usize,
    pub max_generations: usize,
    /// Step-size scale applied to Lévy draws, as a fraction of each
    /// parameter's bound width.
    pub alpha: f64,
    /// Fraction of worst nests abandoned each generation, in [0, 1].
    pub pa: f64,
    /// Power-law density exponent of step lengths, in (1, 3].
    pub levy_exponent: f64,
    pub seed: u64,
}

impl Default for CsConfig {
    fn default() -> Self {
        CsConfig {
            n_nests: 10,
            n_cuckoos_per_gen: 1,
            eggs_per_nest: 2,
            max_generations: 100,
            alpha: 0.01,
            pa: 0.25,
            levy_exponent: 1.5,
            seed: 0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("n_nests = {0}, need at least 2")]
    TooFewNests(usize),
    #[error("n_cuckoos_per_gen must be at least 1")]
    NoCuckoos,
    #[error("eggs_per_nest = {0}, but the search space is 2-dimensional")]
    UnsupportedEggCount(usize),
    #[error("max_generations must be at least 1")]
    NoGenerations,
    #[error("alpha = {0} must be finite and positive")]
    InvalidStepScale(f64),
    #[error("pa = {0} outside [0, 1]")]
    InvalidDiscoveryRate(f64),
    #[error("levy_exponent = {0} outside (1, 3]")]
    InvalidLevyExponent(f64),
}

impl CsConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_nests < 2 {
            return Err(ConfigError::TooFewNests(self.n_nests));
        }
        if self.n_cuckoos_per_gen == 0 {
            return Err(ConfigError::NoCuckoos);
        }
        if self.eggs_per_nest != 2 {
            return Err(ConfigError::UnsupportedEggCount(self.eggs_per_nest));
        }
        if self.max_generations == 0 {
            return Err(ConfigError::NoGenerations);
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(ConfigError::InvalidStepScale(self.alpha));
        }
        if !(self.pa.is_finite() && (0.0..=1.0).contains(&self.pa)) {
            return Err(ConfigError::InvalidDiscoveryRate(self.pa));
        }
        if !(self.levy_exponent > 1.0 && self.levy_exponent <= 3.0) {
            return Err(ConfigError::InvalidLevyExponent(self.levy_exponent));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("search finished without any finite-fitness candidate")]
    NonFiniteBest,
}

/// Anything the engine can minimize. Implementations must map candidates
/// to a cost where lower is better; non-finite costs are treated by the
/// engine as worst-possible.
pub trait CostFn: Sync {
    fn cost(&self, p: Params) -> f64;
}

impl CostFn for Objective {
    fn cost(&self, p: Params) -> f64 {
        self.rmse(p).unwrap_or(f64::INFINITY)
    }
}

/// Adapter for closures: `FnCost(|p| ...)` implements [`CostFn`].
pub struct FnCost<F>(pub F);

impl<F: Fn(Params) -> f64 + Sync> CostFn for FnCost<F> {
    fn cost(&self, p: Params) -> f64 {
        (self.0)(p)
    }
}

// --- Lévy flights -----------------------------------------------------------

/// Mantegna sampler for symmetric Lévy-stable step lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevySampler {
    beta: f64,
    inv_beta: f64,
    sigma_u: f64,
}

impl LevySampler {
    /// `exponent` is the density power-law index, in (1, 3]; the stable
    /// index is β = exponent − 1.
    pub fn new(exponent: f64) -> Self {
        assert!(
            exponent > 1.0 && exponent <= 3.0,
            "levy exponent {exponent} outside (1, 3]"
        );
        let beta = exponent - 1.0;
        if beta >= 2.0 {
            // Gaussian limit of the stable family; Mantegna's σ_u formula
            // degenerates here (sin(πβ/2) → 0), so sample N(0,1) directly.
            return LevySampler {
                beta,
                inv_beta: 0.5,
                sigma_u: f64::NAN,
            };
        }
        let num = gamma(1.0 + beta) * (std::f64::consts::PI * beta / 2.0).sin();
        let den = gamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
        LevySampler {
            beta,
            inv_beta: 1.0 / beta,
            sigma_u: (num / den).powf(1.0 / beta),
        }
    }

    /// Mantegna scale factor σ_u (NaN in the Gaussian limit).
    pub fn sigma_u(&self) -> f64 {
        self.sigma_u
    }

    /// One signed step length. Always finite; the astronomically rare
    /// draws whose quotient over- or underflows are rejected and redrawn.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.beta >= 2.0 {
            return rng.sample(StandardNormal);
        }
        loop {
            let u: f64 = rng.sample::<f64, _>(StandardNormal) * self.sigma_u;
            let v: f64 = rng.sample(StandardNormal);
            let step = u / v.abs().powf(self.inv_beta);
            if step.is_finite() {
                return step;
            }
        }
    }
}

/// One-shot convenience over [`LevySampler`].
pub fn levy_sample<R: Rng + ?Sized>(rng: &mut R, exponent: f64) -> f64 {
    LevySampler::new(exponent).sample(rng)
}

/// Deterministic arithmetic core of a proposal: perturb each component by
/// its Lévy draw scaled by α and the component's bound width, then clamp.
/// Zero draws return `from` unchanged.
pub fn apply_step(from: Params, s_a: f64, s_b: f64, alpha: f64, bounds: &ParamBounds) -> Params {
    bounds.clamp(Params {
        a: from.a + alpha * s_a * bounds.a_width(),
        b: from.b + alpha * s_b * bounds.b_width(),
    })
}

/// Lévy-flight proposal from `from`, drawing the `a` step then the `b`
/// step from `rng`.
pub fn propose<R: Rng + ?Sized>(
    rng: &mut R,
    from: Params,
    bounds: &ParamBounds,
    cfg: &CsConfig,
) -> Params {
    let levy = LevySampler::new(cfg.levy_exponent);
    propose_with(rng, from, bounds, cfg.alpha, &levy)
}

fn propose_with<R: Rng + ?Sized>(
    rng: &mut R,
    from: Params,
    bounds: &ParamBounds,
    alpha: f64,
    levy: &LevySampler,
) -> Params {
    let s_a = levy.sample(rng);
    let s_b = levy.sample(rng);
    apply_step(from, s_a, s_b, alpha, bounds)
}

// --- Engine -----------------------------------------------------------------

/// One candidate solution and its cached fitness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Nest {
    pub params: Params,
    /// Cost of `params`; never NaN (non-finite costs are stored as +∞).
    pub fitness: f64,
}

/// Convergence record of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    /// Population-best fitness after each generation; non-increasing.
    pub best_fitness_per_generation: Vec<f64>,
    /// Total objective evaluations, including population init.
    pub evaluation_count: u64,
}

/// Result of a completed run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOutcome {
    pub best: Nest,
    pub trace: RunTrace,
    pub config_echo: CsConfig,
    pub bounds_echo: ParamBounds,
}

/// The stepped search state. [`run`] wraps the usual
/// construct-step-finish cycle; direct stepping is for tests and benches.
pub struct CuckooSearch<'a, F: ?Sized> {
    objective: &'a F,
    cfg: CsConfig,
    bounds: ParamBounds,
    rng: ChaCha8Rng,
    levy: LevySampler,
    nests: Vec<Nest>,
    trace: Vec<f64>,
    evaluations: u64,
    generation: usize,
    abandon_count: usize,
}

impl<'a, F: CostFn + ?Sized> CuckooSearch<'a, F> {
    /// Validate the config and draw the initial population uniformly from
    /// `bounds`, costing `n_nests` evaluations.
    pub fn new(objective: &'a F, cfg: CsConfig, bounds: ParamBounds) -> Result<Self, EngineError> {
        cfg.validate()?;
        let n = cfg.n_nests;
        // worst ⌈pa·n⌉ nests are redrawn each generation, but never the
        // single best, so at most n−1
        let abandon_count = ((cfg.pa * n as f64).ceil() as usize).min(n - 1);
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let levy = LevySampler::new(cfg.levy_exponent);
        let mut engine = CuckooSearch {
            objective,
            cfg,
            bounds,
            rng,
            levy,
            nests: Vec::with_capacity(n),
            trace: Vec::new(),
            evaluations: 0,
            generation: 0,
            abandon_count,
        };
        for _ in 0..n {
            let params = engine.random_params();
            let fitness = engine.eval(params);
            engine.nests.push(Nest { params, fitness });
        }
        engine.sort_nests();
        Ok(engine)
    }

    fn random_params(&mut self) -> Params {
        let a = self
            .rng
            .random_range(self.bounds.a_lower()..=self.bounds.a_upper());
        let b = self
            .rng
            .random_range(self.bounds.b_lower()..=self.bounds.b_upper());
        Params { a, b }
    }

    fn eval(&mut self, p: Params) -> f64 {
        self.evaluations += 1;
        let cost = self.objective.cost(p);
        if cost.is_finite() {
            cost
        } else {
            f64::INFINITY
        }
    }

    /// Fitnesses are never NaN, so total order exists.
    fn sort_nests(&mut self) {
        self.nests
            .sort_by(|x, y| x.fitness.partial_cmp(&y.fitness).unwrap());
    }

    fn best_index(&self) -> usize {
        let mut best = 0;
        for i in 1..self.nests.len() {
            if self.nests[i].fitness < self.nests[best].fitness {
                best = i;
            }
        }
        best
    }

    /// One generation: cuckoo proposals, abandonment, re-rank.
    pub fn step(&mut self) {
        let n = self.cfg.n_nests;
        for _ in 0..self.cfg.n_cuckoos_per_gen {
            let src = self.rng.random_range(0..n);
            let cand = propose_with(
                &mut self.rng,
                self.nests[src].params,
                &self.bounds,
                self.cfg.alpha,
                &self.levy,
            );
            let fitness = self.eval(cand);
            let j = self.rng.random_range(0..n);
            // strict improvement only: ties keep the incumbent
            if fitness < self.nests[j].fitness {
                self.nests[j] = Nest {
                    params: cand,
                    fitness,
                };
            }
        }
        if self.abandon_count > 0 {
            let best_idx = self.best_index();
            let mut order: Vec<usize> = (0..n).filter(|&i| i != best_idx).collect();
            // worst first; stable sort keeps lower indices first among ties
            order.sort_by(|&i, &j| {
                self.nests[j]
                    .fitness
                    .partial_cmp(&self.nests[i].fitness)
                    .unwrap()
            });
            order.truncate(self.abandon_count);
            for i in order {
                let params = self.random_params();
                let fitness = self.eval(params);
                self.nests[i] = Nest { params, fitness };
            }
        }
        self.sort_nests();
        self.generation += 1;
        self.trace.push(self.nests[0].fitness);
    }

    /// Nests ranked by ascending fitness as of the last step.
    pub fn nests(&self) -> &[Nest] {
        &self.nests
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn best(&self) -> &Nest {
        &self.nests[0]
    }

    /// Package the outcome, re-validating that the best is finite.
    pub fn finish(mut self) -> Result<FitOutcome, EngineError> {
        self.sort_nests();
        let best = self.nests[0];
        if !best.fitness.is_finite() {
            return Err(EngineError::NonFiniteBest);
        }
        Ok(FitOutcome {
            best,
            trace: RunTrace {
                best_fitness_per_generation: self.trace,
                evaluation_count: self.evaluations,
            },
            config_echo: self.cfg,
            bounds_echo: self.bounds,
        })
    }
}

/// Run a full search: init, `max_generations` steps, finish.
pub fn run<F: CostFn + ?Sized>(
    objective: &F,
    cfg: &CsConfig,
    bounds: &ParamBounds,
) -> Result<FitOutcome, EngineError> {
    let mut engine = CuckooSearch::new(objective, cfg.clone(), *bounds)?;
    for _ in 0..engine.cfg.max_generations {
        engine.step();
    }
    engine.finish()
}
