//! Per-arm beliefs of the two Thompson sampling variants. Both work on
//! outcomes already rescaled to `[0, 1]`.

use rand::Rng;
use rand_distr::{Beta, Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Interval, MeanVector, TriggeredSet};

fn aligned(triggered: &TriggeredSet, outcomes: &[f64], n: usize) -> Result<()> {
    if outcomes.len() != triggered.len() {
        return Err(Error::DimensionMismatch {
            expected: triggered.len(),
            got: outcomes.len(),
        });
    }
    if let Some(&arm) = triggered.arms().iter().find(|&&a| a >= n) {
        return Err(Error::ArmOutOfRange { arm, n });
    }
    Ok(())
}

/// Independent `Beta(γ_i, δ_i)` beliefs, starting from `Beta(1, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaState {
    pub gamma: Vec<f64>,
    pub delta: Vec<f64>,
}

impl BetaState {
    pub fn new(n: usize) -> Self {
        BetaState {
            gamma: vec![1.0; n],
            delta: vec![1.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    /// Number of times arm `i` has been updated.
    pub fn count(&self, i: usize) -> u64 {
        (self.gamma[i] + self.delta[i] - 2.0).round() as u64
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> MeanVector {
        MeanVector(
            self.gamma
                .iter()
                .zip(&self.delta)
                .map(|(&g, &d)| {
                    Beta::new(g, d)
                        .expect("parameters stay at least 1")
                        .sample(rng)
                })
                .collect(),
        )
    }

    /// Binarizes each outcome with a `Bernoulli(X_i)` coin and increments
    /// `γ_i` on heads, `δ_i` on tails.
    pub fn update<R: Rng + ?Sized>(
        &mut self,
        triggered: &TriggeredSet,
        outcomes: &[f64],
        rng: &mut R,
    ) -> Result<()> {
        aligned(triggered, outcomes, self.len())?;
        if let Some((&arm, &value)) = triggered
            .arms()
            .iter()
            .zip(outcomes)
            .find(|(_, &x)| !(0.0..=1.0).contains(&x))
        {
            return Err(Error::OutcomeOutOfRange { arm, value });
        }
        for (&i, &x) in triggered.arms().iter().zip(outcomes) {
            if rng.random::<f64>() < x {
                self.gamma[i] += 1.0;
            } else {
                self.delta[i] += 1.0;
            }
        }
        Ok(())
    }
}

/// Empirical means and counters with Gaussian sampling
/// `θ_i ~ N(μ̄_i, β / (4 N_i))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    /// `None` until the arm is first observed.
    pub mean: Vec<Option<f64>>,
    pub count: Vec<u64>,
    pub beta: f64,
    /// Range sampled uniformly for unobserved arms.
    pub fallback: Option<Interval>,
}

impl GaussianState {
    pub fn new(n: usize, beta: f64, fallback: Option<Interval>) -> Result<Self> {
        if !(beta > 1.0 && beta.is_finite()) {
            return Err(Error::Config(format!("beta = {beta} must exceed 1")));
        }
        Ok(GaussianState {
            mean: vec![None; n],
            count: vec![0; n],
            beta,
            fallback,
        })
    }

    pub fn len(&self) -> usize {
        self.count.len()
    }

    pub fn is_empty(&self) -> bool {
        self.count.is_empty()
    }

    pub fn variance(&self, i: usize) -> Option<f64> {
        (self.count[i] > 0).then(|| self.beta / (4.0 * self.count[i] as f64))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<MeanVector> {
        (0..self.len())
            .map(|i| match self.mean[i] {
                Some(m) => {
                    let sd = self.variance(i).expect("observed arm").sqrt();
                    Ok(Normal::new(m, sd).expect("finite deviation").sample(rng))
                }
                None => {
                    let range = self.fallback.ok_or(Error::MissingFallback { arm: i })?;
                    Ok(if range.hi > range.lo {
                        rng.random_range(range.lo..range.hi)
                    } else {
                        range.lo
                    })
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(MeanVector)
    }

    pub fn update(&mut self, triggered: &TriggeredSet, outcomes: &[f64]) -> Result<()> {
        aligned(triggered, outcomes, self.len())?;
        for (&i, &x) in triggered.arms().iter().zip(outcomes) {
            self.count[i] += 1;
            let m = self.mean[i].get_or_insert(0.0);
            *m += (x - *m) / self.count[i] as f64;
        }
        Ok(())
    }
}
