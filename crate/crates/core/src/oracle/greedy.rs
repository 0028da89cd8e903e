//! Greedy maximization of monotone submodular rewards (PMC coverage and
//! OIM spread). Step `j` exactly maximizes the reward over one-element
//! extensions of the current prefix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{cascade, DecompositionTrace, SpreadEstimator, SubAction, SubProblem, Weight};
use crate::error::{Error, Result};
use crate::model::{Action, MeanVector, Problem, ProblemInstance};

/// Coverage `f(A, μ) = Σ_{v∈R} (1 − Π_{u∈A, (u,v)∈E} (1 − μ_uv))` with cached
/// per-right-vertex survival products for O(deg) marginals.
#[derive(Debug, Clone)]
pub struct PmcCoverage<'a> {
    incident: Vec<Vec<(usize, usize)>>,
    survival: Vec<f64>,
    chosen: Vec<bool>,
    mu: &'a [f64],
}

impl<'a> PmcCoverage<'a> {
    pub fn new(left: usize, right: usize, edges: &[(usize, usize)], mu: &'a [f64]) -> Self {
        let mut incident = vec![Vec::new(); left];
        for (arm, &(u, v)) in edges.iter().enumerate() {
            incident[u].push((v, arm));
        }
        PmcCoverage {
            incident,
            survival: vec![1.0; right],
            chosen: vec![false; left],
            mu,
        }
    }

    /// `f(A ∪ {candidate}) − f(A)`.
    pub fn marginal(&self, candidate: usize) -> f64 {
        if self.chosen[candidate] {
            return 0.0;
        }
        self.incident[candidate]
            .iter()
            .map(|&(v, arm)| self.survival[v] * self.mu[arm])
            .sum()
    }

    pub fn insert(&mut self, candidate: usize) {
        if std::mem::replace(&mut self.chosen[candidate], true) {
            return;
        }
        for &(v, arm) in &self.incident[candidate] {
            self.survival[v] *= 1.0 - self.mu[arm];
        }
    }

    pub fn value(&self) -> f64 {
        self.survival.iter().map(|s| 1.0 - s).sum()
    }
}

/// Coverage value recomputed from scratch.
pub fn pmc_value(right: usize, edges: &[(usize, usize)], set: &[usize], mu: &[f64]) -> f64 {
    let mut survival = vec![1.0; right];
    for (arm, &(u, v)) in edges.iter().enumerate() {
        if set.contains(&u) {
            survival[v] *= 1.0 - mu[arm];
        }
    }
    survival.iter().map(|s| 1.0 - s).sum()
}

/// Marginal coverage of adding `candidate` to `set` on a PMC instance.
pub fn pmc_marginal(
    instance: &ProblemInstance,
    set: &[usize],
    candidate: usize,
    mu: &MeanVector,
) -> Result<f64> {
    let Problem::Pmc {
        left, right, edges, ..
    } = instance.problem()
    else {
        return Err(Error::Config("pmc_marginal needs a PMC instance".into()));
    };
    mu.ensure_len(edges.len())?;
    if candidate >= *left || set.iter().any(|&u| u >= *left) {
        return Err(Error::Infeasible(format!(
            "vertices must lie in L = 0..{left}"
        )));
    }
    if set.contains(&candidate) {
        return Err(Error::Infeasible(format!(
            "candidate {candidate} already in the set"
        )));
    }
    let mut cov = PmcCoverage::new(*left, *right, edges, mu.as_slice());
    for &u in set {
        cov.insert(u);
    }
    Ok(cov.marginal(candidate))
}

fn argmax_first(values: impl Iterator<Item = (usize, f64)>) -> Option<(usize, f64)> {
    // strict improvement keeps the smallest index among ties
    values.fold(None, |best, (i, v)| match best {
        Some((_, b)) if v <= b => best,
        _ => Some((i, v)),
    })
}

fn telescoping_trace(order: &[usize], values: &[f64], k: usize) -> DecompositionTrace {
    let subproblems = (0..order.len())
        .map(|j| SubProblem {
            sub_action: SubAction::Prefix(order[..=j].to_vec()),
            value: values[j],
            weight: Weight::Telescoping { k, step: j + 1 },
        })
        .collect();
    let mut set = order.to_vec();
    set.sort_unstable();
    DecompositionTrace {
        subproblems,
        final_action: Action::VertexSet(set),
    }
}

/// Greedy oracle for PMC (closed-form coverage) and OIM (spread from
/// `spread`). Ties go to the smallest vertex id.
pub fn greedy_submodular<R: Rng + ?Sized>(
    instance: &ProblemInstance,
    mu: &MeanVector,
    spread: SpreadEstimator,
    rng: &mut R,
) -> Result<(Action, DecompositionTrace)> {
    mu.ensure_len(instance.n_arms())?;
    let mu = mu.as_slice();
    match instance.problem() {
        Problem::Pmc {
            left,
            right,
            edges,
            k,
        } => {
            if *k > *left {
                return Err(Error::BudgetTooLarge { k: *k, size: *left });
            }
            let mut cov = PmcCoverage::new(*left, *right, edges, mu);
            let mut order = Vec::with_capacity(*k);
            let mut values = Vec::with_capacity(*k);
            for _ in 0..*k {
                let (best, _) = argmax_first(
                    (0..*left)
                        .filter(|&c| !order.contains(&c))
                        .map(|c| (c, cov.marginal(c))),
                )
                .expect("k <= |L| leaves a candidate");
                cov.insert(best);
                order.push(best);
                values.push(cov.value());
            }
            let trace = telescoping_trace(&order, &values, *k);
            Ok((trace.final_action.clone(), trace))
        }
        Problem::Oim { vertices, edges, k } => {
            if *k > *vertices {
                return Err(Error::BudgetTooLarge {
                    k: *k,
                    size: *vertices,
                });
            }
            let mut order: Vec<usize> = Vec::with_capacity(*k);
            let mut values = Vec::with_capacity(*k);
            for _ in 0..*k {
                // one world seed per step: every candidate sees the same cascades
                let step_seed: u64 = rng.random();
                let mut best: Option<(usize, f64)> = None;
                for c in (0..*vertices).filter(|c| !order.contains(c)) {
                    let mut seeds = order.clone();
                    seeds.push(c);
                    let value = match spread {
                        SpreadEstimator::Exact => {
                            cascade::exact_spread(*vertices, edges, &seeds, mu)?
                        }
                        SpreadEstimator::MonteCarlo { samples } => {
                            let mut world_rng = ChaCha8Rng::seed_from_u64(step_seed);
                            cascade::ic_spread(*vertices, edges, &seeds, mu, samples, &mut world_rng)?
                                .0
                        }
                    };
                    if best.is_none_or(|(_, b)| value > b) {
                        best = Some((c, value));
                    }
                }
                let (c, value) = best.expect("k <= |V| leaves a candidate");
                order.push(c);
                values.push(value);
            }
            let trace = telescoping_trace(&order, &values, *k);
            Ok((trace.final_action.clone(), trace))
        }
        _ => Err(Error::Config(
            "greedy_submodular needs a PMC or OIM instance".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Interval, ProblemInstance};
    use rand::SeedableRng;

    fn pmc(left: usize, right: usize, edges: Vec<(usize, usize)>, mu: Vec<f64>, k: usize) -> ProblemInstance {
        ProblemInstance::new(
            Problem::Pmc {
                left,
                right,
                edges,
                k,
            },
            MeanVector(mu),
            None,
            None,
            Interval::UNIT,
            None,
        )
        .unwrap()
    }

    #[test]
    fn marginal_of_single_edge() {
        let inst = pmc(1, 1, vec![(0, 0)], vec![0.5], 1);
        let m = pmc_marginal(&inst, &[], 0, &MeanVector(vec![0.5])).unwrap();
        assert_eq!(m, 0.5);
    }

    #[test]
    fn isolated_candidate_has_zero_marginal() {
        let inst = pmc(2, 1, vec![(0, 0)], vec![0.5], 1);
        let m = pmc_marginal(&inst, &[0], 1, &MeanVector(vec![0.5])).unwrap();
        assert_eq!(m, 0.0);
    }

    #[test]
    fn greedy_picks_larger_marginal() {
        // K_{2,1} with μ = (0.9, 0.1)
        let inst = pmc(2, 1, vec![(0, 0), (1, 0)], vec![0.9, 0.1], 1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (a, trace) =
            greedy_submodular(&inst, inst.means(), SpreadEstimator::default(), &mut rng).unwrap();
        assert_eq!(a, Action::VertexSet(vec![0]));
        assert_eq!(trace.ell(), 1);
        assert!((trace.subproblems[0].value - 0.9).abs() < 1e-15);
    }

    #[test]
    fn oim_star_center_chosen() {
        let edges = vec![(1, 0), (1, 2), (1, 3), (1, 4)];
        let inst = ProblemInstance::new(
            Problem::Oim {
                vertices: 5,
                edges,
                k: 1,
            },
            MeanVector(vec![1.0; 4]),
            None,
            None,
            Interval::UNIT,
            None,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for spread in [SpreadEstimator::Exact, SpreadEstimator::MonteCarlo { samples: 50 }] {
            let (a, _) = greedy_submodular(&inst, inst.means(), spread, &mut rng).unwrap();
            assert_eq!(a, Action::VertexSet(vec![1]));
        }
    }

    #[test]
    fn incremental_matches_scratch() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let (left, right) = (5, 4);
            let mut edges = Vec::new();
            for u in 0..left {
                for v in 0..right {
                    if rng.random::<f64>() < 0.6 {
                        edges.push((u, v));
                    }
                }
            }
            let mu: Vec<f64> = edges.iter().map(|_| rng.random()).collect();
            let set: Vec<usize> = (0..left).filter(|_| rng.random::<f64>() < 0.4).collect();
            let Some(c) = (0..left).find(|c| !set.contains(c)) else {
                continue;
            };
            let mut cov = PmcCoverage::new(left, right, &edges, &mu);
            set.iter().for_each(|&u| cov.insert(u));
            let mut with = set.clone();
            with.push(c);
            let scratch = pmc_value(right, &edges, &with, &mu) - pmc_value(right, &edges, &set, &mu);
            assert!((cov.marginal(c) - scratch).abs() < 1e-12);
        }
    }

    #[test]
    fn budget_equal_to_ground_set() {
        let inst = pmc(2, 1, vec![(0, 0)], vec![0.5], 2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(greedy_submodular(&inst, inst.means(), SpreadEstimator::Exact, &mut rng).is_ok());
    }
}
