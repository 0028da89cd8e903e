//! Environments: outcome laws, the per-problem feedback rule and instance
//! generators.

mod generate;

pub use generate::{generate, InstanceGenerator};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    reward::check_feasible, Action, Interval, MeanVector, Problem, ProblemInstance, ProblemKind,
    TriggeredSet,
};
use crate::oracle::{cascade, maxcut::maxcut_round};

/// Distribution of one arm's outcome around its mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OutcomeLaw {
    /// Two-point law on the domain endpoints with the given mean.
    Bernoulli,
    /// Gaussian with standard deviation `sigma`, truncated symmetrically
    /// around the mean to `[μ − h, μ + h]` with `h = min(3σ, μ − lo, hi − μ)`,
    /// so the mean is preserved and outcomes stay in the domain.
    TruncGaussian { sigma: f64 },
    /// Always returns the mean.
    Deterministic,
}

impl OutcomeLaw {
    pub fn default_for(kind: ProblemKind) -> Self {
        match kind {
            ProblemKind::Pmc | ProblemKind::Oim => OutcomeLaw::Bernoulli,
            _ => OutcomeLaw::TruncGaussian { sigma: 0.1 },
        }
    }

    pub fn validate(&self, _domain: Interval) -> Result<()> {
        if let OutcomeLaw::TruncGaussian { sigma } = self {
            if !(sigma.is_finite() && *sigma > 0.0) {
                return Err(Error::invalid(
                    "outcome law",
                    format!("sigma = {sigma} must be positive"),
                ));
            }
        }
        Ok(())
    }

    /// OIM triggering depends on the outcomes, which is only allowed for
    /// independent live/blocked coins.
    pub fn check_problem(&self, kind: ProblemKind, domain: Interval) -> Result<()> {
        if kind == ProblemKind::Oim && (*self != OutcomeLaw::Bernoulli || domain != Interval::UNIT) {
            return Err(Error::invalid(
                "outcome law",
                "OIM needs Bernoulli edge coins on the domain [0, 1]",
            ));
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, mean: f64, domain: Interval, rng: &mut R) -> f64 {
        match *self {
            OutcomeLaw::Deterministic => mean,
            OutcomeLaw::Bernoulli => {
                if rng.random::<f64>() < domain.normalize(mean) {
                    domain.hi
                } else {
                    domain.lo
                }
            }
            OutcomeLaw::TruncGaussian { sigma } => {
                let h = (3.0 * sigma).min(mean - domain.lo).min(domain.hi - mean);
                if h <= 0.0 {
                    return mean;
                }
                let c = h / sigma;
                if c >= 0.5 {
                    loop {
                        let z: f64 = StandardNormal.sample(rng);
                        if z.abs() <= c {
                            return mean + sigma * z;
                        }
                    }
                }
                // narrow window: uniform proposal, accepted with density ratio >= e^{-1/8}
                loop {
                    let x = rng.random_range(-h..=h);
                    if rng.random::<f64>() < (-(x * x) / (2.0 * sigma * sigma)).exp() {
                        return mean + x;
                    }
                }
            }
        }
    }
}

/// Draws the full outcome vector `X ~ ℙ_X` of one round.
pub fn sample_outcomes<R: Rng + ?Sized>(instance: &ProblemInstance, rng: &mut R) -> Vec<f64> {
    let (law, domain) = (instance.law(), instance.domain());
    instance
        .means()
        .as_slice()
        .iter()
        .map(|&m| law.sample(m, domain, rng))
        .collect()
}

/// Observation of one round.
#[derive(Debug, Clone, PartialEq)]
pub struct Feedback {
    pub triggered: TriggeredSet,
    /// Outcomes of the triggered arms, aligned with `triggered.arms()`.
    pub outcomes: Vec<f64>,
    /// The deterministic action actually played: a sampled cut for a cut
    /// distribution, otherwise the action itself.
    pub played: Action,
}

fn incident(set: &[usize], u: usize, v: usize) -> bool {
    set.binary_search(&u).is_ok() || set.binary_search(&v).is_ok()
}

/// Arms triggered by playing `action` when the outcome vector is `x`.
pub fn triggered_arms(instance: &ProblemInstance, action: &Action, x: &[f64]) -> Result<TriggeredSet> {
    check_feasible(instance, action)?;
    let n = instance.n_arms();
    let mask: Vec<bool> = match (instance.problem(), action) {
        (Problem::Pmc { edges, .. }, Action::VertexSet(set)) => {
            edges.iter().map(|&(u, _)| set.binary_search(&u).is_ok()).collect()
        }
        (Problem::Oim { vertices, edges, .. }, Action::VertexSet(set)) => {
            let adj = cascade::adjacency(*vertices, edges);
            let live: Vec<bool> = x.iter().map(|&o| o >= 0.5).collect();
            let reached = cascade::reached_from(&adj, set, &live);
            edges.iter().map(|&(u, _)| reached[u]).collect()
        }
        (Problem::KCenter { metric, .. }, Action::VertexSet(set)) => metric
            .edges()
            .iter()
            .map(|&(u, v)| incident(set, u, v))
            .collect(),
        (Problem::VertexCover { vertices, .. }, Action::Cover(set)) => {
            (0..*vertices).map(|v| set.binary_search(&v).is_ok()).collect()
        }
        (Problem::MaxCut { vertices, edges }, Action::Cut(set)) => {
            let mut side = vec![false; *vertices];
            set.iter().for_each(|&v| side[v] = true);
            edges.iter().map(|&(u, v)| side[u] != side[v]).collect()
        }
        (Problem::Tsp { metric }, Action::Tour(tour)) => {
            let arms = metric.tour_arms(tour);
            (0..n).map(|i| arms.binary_search(&i).is_ok()).collect()
        }
        _ => {
            return Err(Error::Infeasible(format!(
                "cannot play {action} on {}",
                instance.kind()
            )))
        }
    };
    Ok(TriggeredSet::from_mask(&mask))
}

/// Plays `action` once: draws `X`, then the triggered set given `X`, and
/// reveals the outcomes of the triggered arms only.
pub fn step<R: Rng + ?Sized>(
    instance: &ProblemInstance,
    action: &Action,
    rng: &mut R,
) -> Result<Feedback> {
    check_feasible(instance, action)?;
    let x = sample_outcomes(instance, rng);
    let played = match action {
        Action::CutDistribution(a) => {
            let side = maxcut_round(a, rng);
            Action::Cut((0..side.len()).filter(|&v| side[v]).collect())
        }
        other => other.clone(),
    };
    let triggered = triggered_arms(instance, &played, &x)?;
    let outcomes = triggered.arms().iter().map(|&i| x[i]).collect();
    Ok(Feedback {
        triggered,
        outcomes,
        played,
    })
}

/// Empirical trigger frequency of every arm over `steps` plays of `action`.
pub fn trigger_frequencies<R: Rng + ?Sized>(
    instance: &ProblemInstance,
    action: &Action,
    steps: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::ZeroSamples);
    }
    let mut counts = vec![0usize; instance.n_arms()];
    for _ in 0..steps {
        for &i in step(instance, action, rng)?.triggered.arms() {
            counts[i] += 1;
        }
    }
    Ok(counts.into_iter().map(|c| c as f64 / steps as f64).collect())
}

/// Means rescaled from the instance domain onto `[0, 1]`.
pub fn normalized_means(instance: &ProblemInstance) -> MeanVector {
    let d = instance.domain();
    MeanVector(instance.means().as_slice().iter().map(|&m| d.normalize(m)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn oim_path(mu: [f64; 2]) -> ProblemInstance {
        ProblemInstance::new(
            Problem::Oim {
                vertices: 3,
                edges: vec![(0, 1), (1, 2)],
                k: 1,
            },
            MeanVector(mu.to_vec()),
            None,
            None,
            Interval::UNIT,
            None,
        )
        .unwrap()
    }

    #[test]
    fn vertex_cover_triggers_the_cover() {
        let inst = ProblemInstance::new(
            Problem::VertexCover {
                vertices: 3,
                edges: vec![(0, 1), (1, 2)],
            },
            MeanVector(vec![0.2, 0.5, 0.7]),
            None,
            None,
            Interval::UNIT,
            None,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let fb = step(&inst, &Action::Cover(vec![1]), &mut rng).unwrap();
            assert_eq!(fb.triggered.arms(), &[1]);
            assert!((0.0..=1.0).contains(&fb.outcomes[0]));
        }
    }

    #[test]
    fn oim_certain_path_triggers_everything() {
        let inst = oim_path([1.0, 1.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let fb = step(&inst, &Action::VertexSet(vec![0]), &mut rng).unwrap();
        assert_eq!(fb.triggered.arms(), &[0, 1]);
        assert_eq!(fb.outcomes, vec![1.0, 1.0]);
    }

    #[test]
    fn oim_half_edge_frequency() {
        let inst = oim_path([0.5, 0.5]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = trigger_frequencies(&inst, &Action::VertexSet(vec![0]), 100_000, &mut rng).unwrap();
        assert_eq!(f[0], 1.0);
        assert!((f[1] - 0.5).abs() < 0.005, "{}", f[1]);
    }

    #[test]
    fn truncated_gaussian_keeps_mean_and_support() {
        let law = OutcomeLaw::TruncGaussian { sigma: 0.1 };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for mean in [0.0, 0.02, 0.5, 0.97] {
            let n = 50_000;
            let mut sum = 0.0;
            for _ in 0..n {
                let x = law.sample(mean, Interval::UNIT, &mut rng);
                assert!((0.0..=1.0).contains(&x));
                sum += x;
            }
            assert!((sum / n as f64 - mean).abs() < 0.002, "{mean}");
        }
    }

    #[test]
    fn oim_rejects_gaussian_law() {
        let err = ProblemInstance::new(
            Problem::Oim {
                vertices: 2,
                edges: vec![(0, 1)],
                k: 1,
            },
            MeanVector(vec![0.5]),
            None,
            None,
            Interval::UNIT,
            Some(OutcomeLaw::TruncGaussian { sigma: 0.1 }),
        );
        assert!(err.is_err());
    }
}
