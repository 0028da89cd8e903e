//! Regret bookkeeping and the empirical checkers.

pub mod diagnostics;
pub mod reduce2exact;
pub mod report;
pub mod scaling;
pub mod stats;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{exact_optimum, reward, Action, MeanVector, ProblemInstance, ProblemKind, Sense};
use crate::policy::PolicyKind;

pub use diagnostics::{bound_diagnostics, BoundDiagnostics};
pub use reduce2exact::{check_reduce2exact, Reduce2ExactCheck};
pub use scaling::{log_fit_r2, scaling_fit, ScalingFit};

/// `Δ = max(0, α·r(A*) − r(A))` for maximization. For minimization with
/// `r = −cost` the gap is formed in cost space, `max(0, α·cost(A) − cost(A*))`.
pub fn approximation_gap(sense: Sense, alpha: f64, optimum: f64, value: f64) -> f64 {
    let gap = match sense {
        Sense::Maximize => alpha * optimum - value,
        Sense::Minimize => optimum - alpha * value,
    };
    gap.max(0.0)
}

/// Brute-force optimum of an instance under its true means.
#[derive(Debug, Clone, PartialEq)]
pub struct Benchmark {
    pub optimum: Action,
    pub value: f64,
    pub alpha: f64,
    pub sense: Sense,
}

impl Benchmark {
    pub fn new(instance: &ProblemInstance) -> Result<Self> {
        let (optimum, value) = exact_optimum(instance, instance.means())?;
        Ok(Benchmark {
            optimum,
            value,
            alpha: instance.alpha(),
            sense: instance.sense(),
        })
    }

    pub fn gap_of_value(&self, value: f64) -> f64 {
        approximation_gap(self.sense, self.alpha, self.value, value)
    }

    /// Gap of `action` under the true means; a cut distribution uses its
    /// expected cut weight.
    pub fn gap(&self, instance: &ProblemInstance, action: &Action) -> Result<f64> {
        Ok(self.gap_of_value(reward(instance, action, instance.means())?))
    }
}

/// [`Benchmark::gap`] with a per-action cache of true rewards.
#[derive(Debug, Clone)]
pub struct GapEvaluator<'a> {
    instance: &'a ProblemInstance,
    bench: &'a Benchmark,
    cache: HashMap<(u8, Vec<usize>), f64>,
}

impl<'a> GapEvaluator<'a> {
    pub fn new(instance: &'a ProblemInstance, bench: &'a Benchmark) -> Self {
        GapEvaluator {
            instance,
            bench,
            cache: HashMap::new(),
        }
    }

    pub fn benchmark(&self) -> &Benchmark {
        self.bench
    }

    pub fn true_reward(&mut self, action: &Action) -> Result<f64> {
        let tag = match action {
            Action::VertexSet(_) => 0,
            Action::Cover(_) => 1,
            Action::Tour(_) => 2,
            Action::Cut(_) => 3,
            Action::CutDistribution(_) => {
                return reward(self.instance, action, self.instance.means());
            }
        };
        let key = (tag, action.encoding().to_vec());
        if let Some(&v) = self.cache.get(&key) {
            return Ok(v);
        }
        let v = reward(self.instance, action, self.instance.means())?;
        self.cache.insert(key, v);
        Ok(v)
    }

    pub fn gap(&mut self, action: &Action) -> Result<f64> {
        let v = self.true_reward(action)?;
        Ok(self.bench.gap_of_value(v))
    }
}

/// Per-round gaps of one episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretLedger {
    pub problem: ProblemKind,
    /// Instance fingerprint.
    pub instance: String,
    pub policy: PolicyKind,
    pub seed: u64,
    pub gaps: Vec<f64>,
    /// Gap of the deterministic action actually played (differs from `gaps`
    /// only for cut distributions).
    pub sampled_gaps: Vec<f64>,
}

impl RegretLedger {
    pub fn horizon(&self) -> usize {
        self.gaps.len()
    }

    pub fn cumulative(&self) -> Vec<f64> {
        self.gaps
            .iter()
            .scan(0.0, |acc, g| {
                *acc += g;
                Some(*acc)
            })
            .collect()
    }

    /// Cumulative regret after round `t` (1-based).
    pub fn regret_at(&self, t: usize) -> f64 {
        self.gaps[..t].iter().sum()
    }
}

/// Random means drawn uniformly from the instance domain.
pub fn random_means<R: rand::Rng + ?Sized>(instance: &ProblemInstance, rng: &mut R) -> MeanVector {
    let d = instance.domain();
    MeanVector((0..instance.n_arms()).map(|_| rng.random_range(d.lo..=d.hi)).collect())
}
