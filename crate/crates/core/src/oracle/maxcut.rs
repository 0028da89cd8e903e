//! Max-Cut relaxation over unit vectors, solved by low-rank projected
//! gradient ascent, and hyperplane rounding.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{MeanVector, UnitVectorAssignment};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SdpConfig {
    /// Factor rank; `None` selects `ceil(sqrt(2|V|))`.
    #[serde(default)]
    pub rank: Option<usize>,
    pub max_iters: usize,
    /// Relative objective change below which the ascent stops.
    pub tol: f64,
}

impl Default for SdpConfig {
    fn default() -> Self {
        SdpConfig {
            rank: None,
            max_iters: 100_000,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub assignment: UnitVectorAssignment,
    /// `½ Σ μ_uv (1 − v_u·v_v)`.
    pub objective: f64,
    pub iterations: usize,
}

pub fn min_rank(vertices: usize) -> usize {
    ((2.0 * vertices as f64).sqrt().ceil() as usize).max(1)
}

/// `½ Σ_{(u,v)} μ_uv (1 − v_u·v_v)`.
pub fn sdp_objective(edges: &[(usize, usize)], mu: &[f64], a: &UnitVectorAssignment) -> f64 {
    edges
        .iter()
        .zip(mu)
        .map(|(&(u, v), &w)| 0.5 * w * (1.0 - a.dot(u, v)))
        .sum()
}

/// Expected cut weight of hyperplane rounding: `Σ μ_uv arccos(v_u·v_v) / π`.
pub fn expected_cut(edges: &[(usize, usize)], mu: &[f64], a: &UnitVectorAssignment) -> f64 {
    edges
        .iter()
        .zip(mu)
        .map(|(&(u, v), &w)| w * a.crossing_probability(u, v))
        .sum()
}

/// Weight of the edges crossing the cut with side `set`.
pub fn cut_value(edges: &[(usize, usize)], mu: &[f64], side: &[bool]) -> f64 {
    edges
        .iter()
        .zip(mu)
        .filter(|(&(u, v), _)| side[u] != side[v])
        .map(|(_, &w)| w)
        .sum()
}

fn normalize(row: &mut [f64]) -> bool {
    let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-300 {
        return false;
    }
    row.iter_mut().for_each(|x| *x /= norm);
    true
}

/// Maximizes the relaxation objective over unit-vector assignments of rank
/// `cfg.rank`. Each step moves every row along the objective gradient and
/// renormalizes; the step size grows after an accepted step and halves after
/// a rejected one, so the objective never decreases.
pub fn maxcut_sdp<R: Rng + ?Sized>(
    vertices: usize,
    edges: &[(usize, usize)],
    mu: &MeanVector,
    cfg: &SdpConfig,
    rng: &mut R,
) -> Result<SdpSolution> {
    mu.ensure_len(edges.len())?;
    let mu = mu.as_slice();
    if let Some((e, &w)) = mu.iter().enumerate().find(|(_, w)| !(**w >= 0.0)) {
        return Err(Error::NegativeCost { vertex: e, value: w });
    }
    let rank = cfg.rank.unwrap_or_else(|| min_rank(vertices));
    if rank < min_rank(vertices) {
        return Err(Error::Config(format!(
            "rank {rank} below ceil(sqrt(2|V|)) = {}",
            min_rank(vertices)
        )));
    }
    let mut data = vec![0.0; vertices * rank];
    for row in data.chunks_mut(rank) {
        loop {
            row.iter_mut()
                .for_each(|x| *x = StandardNormal.sample(&mut *rng));
            if normalize(row) {
                break;
            }
        }
    }
    let mut current = UnitVectorAssignment { rank, data };
    let mut objective = sdp_objective(edges, mu, &current);
    let max_degree_weight = {
        let mut deg = vec![0.0; vertices];
        for (&(u, v), &w) in edges.iter().zip(mu) {
            deg[u] += w;
            deg[v] += w;
        }
        deg.into_iter().fold(0.0, f64::max)
    };
    if max_degree_weight == 0.0 {
        return Ok(SdpSolution {
            assignment: current,
            objective,
            iterations: 0,
        });
    }
    let mut step = 1.0 / max_degree_weight;
    let mut grad = vec![0.0; vertices * rank];
    let mut candidate = current.clone();
    let mut stalled = 0;
    for iter in 1..=cfg.max_iters {
        grad.iter_mut().for_each(|g| *g = 0.0);
        for (&(u, v), &w) in edges.iter().zip(mu) {
            for d in 0..rank {
                grad[u * rank + d] -= 0.5 * w * current.data[v * rank + d];
                grad[v * rank + d] -= 0.5 * w * current.data[u * rank + d];
            }
        }
        loop {
            for (i, (c, x)) in candidate.data.iter_mut().zip(&current.data).enumerate() {
                *c = x + step * grad[i];
            }
            for (u, row) in candidate.data.chunks_mut(rank).enumerate() {
                if !normalize(row) {
                    row.copy_from_slice(current.row(u));
                }
            }
            let value = sdp_objective(edges, mu, &candidate);
            if value >= objective - 1e-15 * objective.abs() {
                let change = (value - objective).abs() / objective.abs().max(1.0);
                std::mem::swap(&mut current, &mut candidate);
                objective = value;
                step = (step * 1.5).min(1e6 / max_degree_weight);
                // require a few consecutive quiet steps before declaring convergence
                stalled = if change < cfg.tol { stalled + 1 } else { 0 };
                break;
            }
            step *= 0.5;
            if step < 1e-14 / max_degree_weight {
                // no ascent direction left at this resolution
                return Ok(SdpSolution {
                    assignment: current,
                    objective,
                    iterations: iter,
                });
            }
        }
        if stalled >= 3 {
            return Ok(SdpSolution {
                assignment: current,
                objective,
                iterations: iter,
            });
        }
    }
    Err(Error::NotConverged {
        iters: cfg.max_iters,
        objective,
    })
}

/// Samples a uniform hyperplane through the origin and returns the side
/// `{u : v_u·Z >= 0}` as a membership mask.
pub fn maxcut_round<R: Rng + ?Sized>(a: &UnitVectorAssignment, rng: &mut R) -> Vec<bool> {
    let z: Vec<f64> = (0..a.rank).map(|_| StandardNormal.sample(&mut *rng)).collect();
    (0..a.vertices())
        .map(|u| a.row(u).iter().zip(&z).map(|(x, y)| x * y).sum::<f64>() >= 0.0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn solve(vertices: usize, edges: &[(usize, usize)]) -> SdpSolution {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        maxcut_sdp(
            vertices,
            edges,
            &MeanVector(vec![1.0; edges.len()]),
            &SdpConfig::default(),
            &mut rng,
        )
        .unwrap()
    }

    #[test]
    fn single_edge_is_antipodal() {
        let sol = solve(2, &[(0, 1)]);
        assert!(sol.objective >= 1.0 - 1e-6, "{}", sol.objective);
        sol.assignment.check_unit_rows(1e-9).unwrap();
    }

    #[test]
    fn triangle_reaches_nine_quarters() {
        let sol = solve(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!((sol.objective - 2.25).abs() < 1e-4, "{}", sol.objective);
    }

    #[test]
    fn empty_graph_is_trivial() {
        let sol = solve(3, &[]);
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn rank_below_bound_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cfg = SdpConfig {
            rank: Some(1),
            ..SdpConfig::default()
        };
        assert!(maxcut_sdp(8, &[(0, 1)], &MeanVector(vec![1.0]), &cfg, &mut rng).is_err());
    }

    #[test]
    fn iteration_cap_reports_last_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cfg = SdpConfig {
            max_iters: 1,
            tol: 0.0,
            ..SdpConfig::default()
        };
        let err = maxcut_sdp(3, &[(0, 1), (1, 2), (0, 2)], &MeanVector(vec![1.0; 3]), &cfg, &mut rng)
            .unwrap_err();
        assert!(matches!(err, Error::NotConverged { iters: 1, .. }));
    }

    #[test]
    fn rounding_of_identical_and_opposite_vectors() {
        let same = UnitVectorAssignment::from_rows(&[vec![1.0, 0.0], vec![1.0, 0.0]]);
        let opposite = UnitVectorAssignment::from_rows(&[vec![0.6, 0.8], vec![-0.6, -0.8]]);
        assert_eq!(same.crossing_probability(0, 1), 0.0);
        assert_eq!(opposite.crossing_probability(0, 1), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let s = maxcut_round(&same, &mut rng);
            assert_eq!(s[0], s[1]);
            let o = maxcut_round(&opposite, &mut rng);
            assert_ne!(o[0], o[1]);
        }
    }
}
