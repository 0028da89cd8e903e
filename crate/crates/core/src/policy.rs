//! The learning loop: sample means, call the oracle, play, observe, update.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{Benchmark, GapEvaluator};
use crate::model::{Action, Interval, MeanVector, Problem, ProblemInstance, Sense, TriggeredSet};
use crate::oracle::{clamp_sample, solve, OracleConfig};
use crate::posterior::{BetaState, GaussianState};
use crate::suite::step;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    CtsBeta,
    CtsGaussian,
    Cucb,
    /// Plays a random feasible action every round; a linear-regret control.
    UniformRandom,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [
        PolicyKind::CtsBeta,
        PolicyKind::CtsGaussian,
        PolicyKind::Cucb,
        PolicyKind::UniformRandom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::CtsBeta => "cts_beta",
            PolicyKind::CtsGaussian => "cts_gaussian",
            PolicyKind::Cucb => "cucb",
            PolicyKind::UniformRandom => "uniform_random",
        }
    }
}

impl std::fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        PolicyKind::ALL
            .into_iter()
            .find(|p| p.name() == norm)
            .ok_or_else(|| Error::Config(format!("unknown policy `{s}`")))
    }
}

/// How CTS-Gaussian treats arms that were never observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMode {
    /// Sample unobserved arms uniformly from the outcome domain.
    #[default]
    UniformFallback,
    /// Play the oracle on optimistic means until every arm has been observed,
    /// for at most `10·n` rounds.
    TriggerAllFirst,
}

pub fn default_beta() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeConfig {
    pub horizon: usize,
    pub seed: u64,
    pub policy: PolicyKind,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default)]
    pub init_mode: InitMode,
    #[serde(default)]
    pub oracle: OracleConfig,
    /// Keep `θ_t` in every record.
    #[serde(default)]
    pub trace_theta: bool,
}

impl EpisodeConfig {
    pub fn new(policy: PolicyKind, horizon: usize, seed: u64) -> Self {
        EpisodeConfig {
            horizon,
            seed,
            policy,
            beta: default_beta(),
            init_mode: InitMode::default(),
            oracle: OracleConfig::default(),
            trace_theta: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if self.policy == PolicyKind::CtsGaussian && !(self.beta > 1.0) {
            return Err(Error::Config(format!("beta = {} must exceed 1", self.beta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    /// 1-based round index.
    pub t: usize,
    pub action: Action,
    pub triggered: TriggeredSet,
    /// Gap of the chosen action (expected gap for a cut distribution).
    pub gap: f64,
    /// Gap of the deterministic action that generated the feedback.
    pub sampled_gap: f64,
    /// Sampled means before clamping to the domain (when traced).
    pub theta: Option<MeanVector>,
}

/// One row of a posterior snapshot: `(γ, δ)` for Beta beliefs, `(mean, count)` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorRow {
    pub t: usize,
    pub arm: usize,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone)]
enum Belief {
    Beta(BetaState),
    Gaussian(GaussianState),
    /// Empirical means and counters for the confidence-bound baseline.
    Counts(GaussianState),
    None,
}

/// Draws a random feasible action: uniform over budgeted sets, cuts and
/// tours; for vertex cover a uniform subset completed greedily to a cover.
pub fn random_action<R: Rng + ?Sized>(instance: &ProblemInstance, rng: &mut R) -> Action {
    let sorted_sample = |rng: &mut R, n: usize, k: usize| {
        let mut s = index::sample(rng, n, k).into_vec();
        s.sort_unstable();
        s
    };
    match instance.problem() {
        Problem::Pmc { left, k, .. } => Action::VertexSet(sorted_sample(rng, *left, *k)),
        Problem::Oim { vertices, k, .. } => Action::VertexSet(sorted_sample(rng, *vertices, *k)),
        Problem::KCenter { metric, k } => {
            Action::VertexSet(sorted_sample(rng, metric.vertices(), *k))
        }
        Problem::VertexCover { vertices, edges } => {
            let mut chosen: Vec<bool> = (0..*vertices).map(|_| rng.random()).collect();
            for &(u, v) in edges {
                if !chosen[u] && !chosen[v] {
                    let pick = if rng.random() { u } else { v };
                    chosen[pick] = true;
                }
            }
            Action::Cover((0..*vertices).filter(|&v| chosen[v]).collect())
        }
        Problem::MaxCut { vertices, .. } => {
            Action::Cut((0..*vertices).filter(|_| rng.random()).collect())
        }
        Problem::Tsp { metric } => {
            let mut tour: Vec<usize> = (0..metric.vertices()).collect();
            tour[1..].shuffle(rng);
            Action::Tour(tour)
        }
    }
}

/// One learning episode with its three random streams.
pub struct Episode<'a> {
    instance: &'a ProblemInstance,
    cfg: EpisodeConfig,
    gaps: GapEvaluator<'a>,
    belief: Belief,
    t: usize,
    posterior_rng: ChaCha8Rng,
    env_rng: ChaCha8Rng,
    oracle_rng: ChaCha8Rng,
    /// Total number of arm observations so far.
    observations: u64,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

impl<'a> Episode<'a> {
    pub fn new(instance: &'a ProblemInstance, bench: &'a Benchmark, cfg: EpisodeConfig) -> Result<Self> {
        cfg.validate()?;
        let n = instance.n_arms();
        let belief = match cfg.policy {
            PolicyKind::CtsBeta => Belief::Beta(BetaState::new(n)),
            PolicyKind::CtsGaussian => {
                let fallback = (cfg.init_mode == InitMode::UniformFallback).then_some(Interval::UNIT);
                Belief::Gaussian(GaussianState::new(n, cfg.beta, fallback)?)
            }
            PolicyKind::Cucb => Belief::Counts(GaussianState::new(n, default_beta(), None)?),
            PolicyKind::UniformRandom => Belief::None,
        };
        Ok(Episode {
            instance,
            gaps: GapEvaluator::new(instance, bench),
            belief,
            t: 0,
            posterior_rng: stream(cfg.seed, 1),
            env_rng: stream(cfg.seed, 2),
            oracle_rng: stream(cfg.seed, 3),
            cfg,
            observations: 0,
        })
    }

    pub fn round_index(&self) -> usize {
        self.t
    }

    pub fn observations(&self) -> u64 {
        self.observations
    }

    /// Per-arm trigger counters.
    pub fn counts(&self) -> Vec<u64> {
        match &self.belief {
            Belief::Beta(s) => (0..s.len()).map(|i| s.count(i)).collect(),
            Belief::Gaussian(s) | Belief::Counts(s) => s.count.clone(),
            Belief::None => vec![0; self.instance.n_arms()],
        }
    }

    pub fn posterior_rows(&self) -> Vec<PosteriorRow> {
        let t = self.t;
        match &self.belief {
            Belief::Beta(s) => (0..s.len())
                .map(|arm| PosteriorRow {
                    t,
                    arm,
                    a: s.gamma[arm],
                    b: s.delta[arm],
                })
                .collect(),
            Belief::Gaussian(s) | Belief::Counts(s) => (0..s.len())
                .map(|arm| PosteriorRow {
                    t,
                    arm,
                    a: s.mean[arm].unwrap_or(f64::NAN),
                    b: s.count[arm] as f64,
                })
                .collect(),
            Belief::None => Vec::new(),
        }
    }

    fn denormalize(&self, u: &MeanVector) -> MeanVector {
        let d = self.instance.domain();
        MeanVector(u.as_slice().iter().map(|&x| d.denormalize(x)).collect())
    }

    /// Optimistic value for the learner's sense: high when rewards grow with
    /// the mean, low when means are costs.
    fn optimistic_end(&self) -> f64 {
        match self.instance.sense() {
            Sense::Maximize => 1.0,
            Sense::Minimize => 0.0,
        }
    }

    /// Means handed to the oracle this round, in normalized units.
    fn choose_means(&mut self) -> Result<Option<MeanVector>> {
        let t = self.t;
        let n = self.instance.n_arms();
        let optimistic = self.optimistic_end();
        Ok(match &mut self.belief {
            Belief::Beta(s) => Some(s.sample(&mut self.posterior_rng)),
            Belief::Gaussian(s) => {
                if s.fallback.is_none() {
                    let unobserved = s.count.contains(&0);
                    if unobserved && t <= 10 * n {
                        let theta = (0..n)
                            .map(|i| s.mean[i].unwrap_or(optimistic))
                            .collect();
                        return Ok(Some(MeanVector(theta)));
                    }
                    if unobserved {
                        // initialization budget spent; remaining arms fall back to uniform
                        s.fallback = Some(Interval::UNIT);
                    }
                }
                Some(s.sample(&mut self.posterior_rng)?)
            }
            Belief::Counts(s) => {
                let bonus_scale = 1.5 * (t as f64).ln();
                let index = (0..n)
                    .map(|i| match s.mean[i] {
                        None => optimistic,
                        Some(m) => {
                            let bonus = (bonus_scale / s.count[i] as f64).sqrt();
                            if optimistic > 0.5 {
                                (m + bonus).min(1.0)
                            } else {
                                (m - bonus).max(0.0)
                            }
                        }
                    })
                    .collect();
                Some(MeanVector(index))
            }
            Belief::None => None,
        })
    }

    /// Plays one round.
    pub fn round(&mut self) -> Result<RoundRecord> {
        self.t += 1;
        let normalized = self.choose_means()?;
        let (action, theta) = match &normalized {
            Some(u) => {
                let theta = self.denormalize(u);
                let clamped = clamp_sample(&theta, self.instance.domain());
                let out = solve(self.instance, &clamped, &self.cfg.oracle, &mut self.oracle_rng)?;
                (out.action, Some(theta))
            }
            None => (random_action(self.instance, &mut self.posterior_rng), None),
        };
        let fb = step(self.instance, &action, &mut self.env_rng)?;
        let d = self.instance.domain();
        let scaled: Vec<f64> = fb.outcomes.iter().map(|&x| d.normalize(x).clamp(0.0, 1.0)).collect();
        match &mut self.belief {
            Belief::Beta(s) => s.update(&fb.triggered, &scaled, &mut self.posterior_rng)?,
            Belief::Gaussian(s) | Belief::Counts(s) => s.update(&fb.triggered, &scaled)?,
            Belief::None => {}
        }
        self.observations += fb.triggered.len() as u64;
        let gap = self.gaps.gap(&action)?;
        let sampled_gap = if action.is_randomized() {
            self.gaps.gap(&fb.played)?
        } else {
            gap
        };
        Ok(RoundRecord {
            t: self.t,
            action,
            triggered: fb.triggered,
            gap,
            sampled_gap,
            theta: if self.cfg.trace_theta { theta } else { None },
        })
    }
}

/// Runs `cfg.horizon` rounds against a precomputed benchmark.
pub fn run_episode_with(
    instance: &ProblemInstance,
    bench: &Benchmark,
    cfg: &EpisodeConfig,
) -> Result<Vec<RoundRecord>> {
    let mut ep = Episode::new(instance, bench, cfg.clone())?;
    (0..cfg.horizon).map(|_| ep.round()).collect()
}

/// Runs one episode; the optimum is found by enumeration first.
pub fn run_episode(instance: &ProblemInstance, cfg: &EpisodeConfig) -> Result<Vec<RoundRecord>> {
    cfg.validate()?;
    let bench = Benchmark::new(instance)?;
    run_episode_with(instance, &bench, cfg)
}
