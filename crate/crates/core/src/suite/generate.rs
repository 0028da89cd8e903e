use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::OutcomeLaw;
use crate::error::{Error, Result};
use crate::model::{
    reward::action_count, Interval, MeanVector, Metric, Problem, ProblemInstance, ProblemKind,
    ENUMERATION_LIMIT, MAX_EXHAUSTIVE_VERTICES,
};
use crate::oracle::cascade;

/// Parameters of a random instance. The output is a deterministic function
/// of all fields, including `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceGenerator {
    pub kind: ProblemKind,
    /// Number of vertices; for PMC the size of `L`.
    pub size: usize,
    /// PMC only: size of `R` (defaults to `size`).
    #[serde(default)]
    pub right: Option<usize>,
    /// Budget for PMC, OIM and k-center (defaults to 2, capped at `size`).
    #[serde(default)]
    pub k: Option<usize>,
    /// Probability that each candidate edge is present (graph problems).
    #[serde(default = "default_density")]
    pub density: f64,
    /// Range of edge probabilities, vertex costs or cut weights.
    #[serde(default = "default_range")]
    pub range: Interval,
    #[serde(default)]
    pub law: Option<OutcomeLaw>,
    #[serde(default)]
    pub seed: u64,
}

fn default_density() -> f64 {
    0.5
}

fn default_range() -> Interval {
    Interval::new(0.1, 0.9)
}

impl InstanceGenerator {
    pub fn new(kind: ProblemKind, size: usize, seed: u64) -> Self {
        InstanceGenerator {
            kind,
            size,
            right: None,
            k: None,
            density: default_density(),
            range: default_range(),
            law: None,
            seed,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }
}

fn random_pairs<R: Rng>(n: usize, density: f64, directed: bool, rng: &mut R) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && v < u) {
                continue;
            }
            if rng.random::<f64>() < density {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Points uniform in the unit square; distances scaled by `1/√2` so they lie in `[0, 1]`.
fn euclidean_metric<R: Rng>(n: usize, rng: &mut R) -> (Metric, Vec<f64>) {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.random(), rng.random())).collect();
    let metric = Metric::complete(n);
    let mu = metric
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (pts[u], pts[v]);
            ((a.0 - b.0).hypot(a.1 - b.1) / std::f64::consts::SQRT_2).min(1.0)
        })
        .collect();
    (metric, mu)
}

pub fn generate(gen: &InstanceGenerator) -> Result<ProblemInstance> {
    let n = gen.size;
    let range = gen.range;
    if n == 0 {
        return Err(Error::Config("generator size must be positive".into()));
    }
    if !(0.0..=1.0).contains(&gen.density) {
        return Err(Error::Config(format!("density {} outside [0, 1]", gen.density)));
    }
    if !(range.lo <= range.hi && range.lo >= 0.0 && range.hi <= 1.0) {
        return Err(Error::Config(format!(
            "range [{}, {}] must lie inside [0, 1]",
            range.lo, range.hi
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(gen.seed);
    let k = gen.k.unwrap_or(2).min(n);
    let draw = |rng: &mut ChaCha8Rng, count: usize| -> Vec<f64> {
        (0..count)
            .map(|_| {
                if range.hi > range.lo {
                    rng.random_range(range.lo..range.hi)
                } else {
                    range.lo
                }
            })
            .collect()
    };
    let (problem, means) = match gen.kind {
        ProblemKind::Pmc => {
            let right = gen.right.unwrap_or(n);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in 0..right {
                    if rng.random::<f64>() < gen.density {
                        edges.push((u, v));
                    }
                }
            }
            let mu = draw(&mut rng, edges.len());
            (
                Problem::Pmc {
                    left: n,
                    right,
                    edges,
                    k,
                },
                mu,
            )
        }
        ProblemKind::Oim => {
            let edges = random_pairs(n, gen.density, true, &mut rng);
            if !cascade::is_enumerable(n, &edges) {
                log::warn!(
                    "generated OIM graph has {} edges; exact spread needs at most {}",
                    edges.len(),
                    cascade::EXACT_EDGE_LIMIT
                );
            }
            let mu = draw(&mut rng, edges.len());
            (Problem::Oim { vertices: n, edges, k }, mu)
        }
        ProblemKind::KCenter => {
            let (metric, mu) = euclidean_metric(n, &mut rng);
            (Problem::KCenter { metric, k }, mu)
        }
        ProblemKind::Tsp => {
            if n < 3 {
                return Err(Error::Config("TSP needs at least 3 vertices".into()));
            }
            let (metric, mu) = euclidean_metric(n, &mut rng);
            (Problem::Tsp { metric }, mu)
        }
        ProblemKind::VertexCover => {
            let edges = random_pairs(n, gen.density, false, &mut rng);
            let mu = draw(&mut rng, n);
            (Problem::VertexCover { vertices: n, edges }, mu)
        }
        ProblemKind::MaxCut => {
            let edges = random_pairs(n, gen.density, false, &mut rng);
            let mu = draw(&mut rng, edges.len());
            (Problem::MaxCut { vertices: n, edges }, mu)
        }
    };
    let instance = ProblemInstance::new(problem, MeanVector(means), None, None, Interval::UNIT, gen.law)?;
    let vertex_bound = matches!(
        gen.kind,
        ProblemKind::VertexCover | ProblemKind::MaxCut | ProblemKind::Tsp
    );
    if (vertex_bound && n > MAX_EXHAUSTIVE_VERTICES)
        || (!vertex_bound && action_count(&instance) > ENUMERATION_LIMIT)
    {
        log::warn!("generated {} instance is too large for brute-force optima", gen.kind);
    }
    Ok(instance)
}
