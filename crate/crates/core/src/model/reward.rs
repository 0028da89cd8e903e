//! Expected rewards, triggering probabilities, the smoothness check and
//! brute-force optima.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Action, MeanVector, Problem, ProblemInstance, TOLERANCE};
use crate::error::{Error, Result};
use crate::oracle::cascade;
use crate::oracle::greedy::pmc_value;
use crate::oracle::kcenter::kcenter_cost;
use crate::oracle::maxcut::{cut_value, expected_cut};

/// Largest number of candidate actions `exact_optimum` will enumerate.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// Vertex ceiling for exhaustive search over covers, cuts and tours.
pub const MAX_EXHAUSTIVE_VERTICES: usize = 12;

fn sorted_distinct(set: &[usize], ground: usize, what: &str) -> Result<()> {
    if set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Infeasible(format!("{what} must be sorted and distinct")));
    }
    if let Some(&v) = set.iter().find(|&&v| v >= ground) {
        return Err(Error::Infeasible(format!(
            "{what} contains vertex {v}, ground set has {ground}"
        )));
    }
    Ok(())
}

fn kind_mismatch(instance: &ProblemInstance, action: &Action) -> Error {
    Error::Infeasible(format!("action {action} does not apply to {}", instance.kind()))
}

/// Checks that `action` belongs to the action space of `instance`. Vertex
/// sets may be smaller than `k` so that greedy prefixes can be evaluated.
pub fn check_feasible(instance: &ProblemInstance, action: &Action) -> Result<()> {
    match (instance.problem(), action) {
        (Problem::Pmc { k, .. } | Problem::Oim { k, .. }, Action::VertexSet(set)) => {
            sorted_distinct(set, instance.problem().ground_set(), "vertex set")?;
            if set.len() > *k {
                return Err(Error::Infeasible(format!(
                    "{} vertices chosen, budget is {k}",
                    set.len()
                )));
            }
            Ok(())
        }
        (Problem::KCenter { metric, k }, Action::VertexSet(set)) => {
            sorted_distinct(set, metric.vertices(), "center set")?;
            if set.is_empty() || set.len() > *k {
                return Err(Error::Infeasible(format!(
                    "{} centers chosen, need 1..={k}",
                    set.len()
                )));
            }
            Ok(())
        }
        (Problem::VertexCover { vertices, edges }, Action::Cover(set)) => {
            sorted_distinct(set, *vertices, "cover")?;
            if let Some(&(u, v)) = edges
                .iter()
                .find(|&&(u, v)| set.binary_search(&u).is_err() && set.binary_search(&v).is_err())
            {
                return Err(Error::Infeasible(format!("edge ({u}, {v}) is not covered")));
            }
            Ok(())
        }
        (Problem::MaxCut { vertices, .. }, Action::Cut(set)) => {
            sorted_distinct(set, *vertices, "cut side")
        }
        (Problem::MaxCut { vertices, .. }, Action::CutDistribution(a)) => {
            if a.vertices() != *vertices || a.rank == 0 || a.data.len() != vertices * a.rank {
                return Err(Error::Infeasible(format!(
                    "unit-vector assignment has {} rows, graph has {vertices} vertices",
                    a.vertices()
                )));
            }
            a.check_unit_rows(TOLERANCE)
        }
        (Problem::Tsp { metric }, Action::Tour(tour)) => {
            let n = metric.vertices();
            let mut seen = vec![false; n];
            if tour.len() != n {
                return Err(Error::Infeasible(format!(
                    "tour visits {} vertices, graph has {n}",
                    tour.len()
                )));
            }
            for &v in tour {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Infeasible(format!("tour repeats or exceeds vertex {v}")));
                }
            }
            Ok(())
        }
        _ => Err(kind_mismatch(instance, action)),
    }
}

fn side_mask(vertices: usize, set: &[usize]) -> Vec<bool> {
    let mut side = vec![false; vertices];
    set.iter().for_each(|&v| side[v] = true);
    side
}

/// Expected reward `r(A, μ)`. Minimization problems return the negated cost.
///
/// OIM spread is exact when the graph is small enough for world
/// enumeration and otherwise a fixed-seed Monte-Carlo estimate.
pub fn reward(instance: &ProblemInstance, action: &Action, mu: &MeanVector) -> Result<f64> {
    mu.ensure_len(instance.n_arms())?;
    check_feasible(instance, action)?;
    let m = mu.as_slice();
    Ok(match (instance.problem(), action) {
        (Problem::Pmc { right, edges, .. }, Action::VertexSet(set)) => pmc_value(*right, edges, set, m),
        (Problem::Oim { vertices, edges, .. }, Action::VertexSet(set)) => {
            if cascade::is_enumerable(*vertices, edges) {
                cascade::exact_spread(*vertices, edges, set, m)?
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(0);
                cascade::ic_spread(*vertices, edges, set, m, cascade::DEFAULT_MC_SAMPLES, &mut rng)?.0
            }
        }
        (Problem::KCenter { metric, .. }, Action::VertexSet(set)) => -kcenter_cost(metric, m, set),
        (Problem::VertexCover { .. }, Action::Cover(set)) => -set.iter().map(|&v| m[v]).sum::<f64>(),
        (Problem::MaxCut { vertices, edges }, Action::Cut(set)) => {
            cut_value(edges, m, &side_mask(*vertices, set))
        }
        (Problem::MaxCut { edges, .. }, Action::CutDistribution(a)) => expected_cut(edges, m, a),
        (Problem::Tsp { metric }, Action::Tour(tour)) => -metric.tour_cost(m, tour),
        _ => return Err(kind_mismatch(instance, action)),
    })
}

/// Probability `p_i(A)` that each arm is triggered when `action` is played
/// and outcomes follow the means `mu`.
///
/// Only OIM depends on `mu`; it needs a graph small enough for enumeration.
pub fn triggering_probabilities(
    instance: &ProblemInstance,
    action: &Action,
    mu: &MeanVector,
) -> Result<Vec<f64>> {
    mu.ensure_len(instance.n_arms())?;
    check_feasible(instance, action)?;
    let indicator = |hit: &dyn Fn(usize) -> bool, n: usize| -> Vec<f64> {
        (0..n).map(|i| if hit(i) { 1.0 } else { 0.0 }).collect()
    };
    let n = instance.n_arms();
    Ok(match (instance.problem(), action) {
        (Problem::Pmc { edges, .. }, Action::VertexSet(set)) => {
            indicator(&|i| set.binary_search(&edges[i].0).is_ok(), n)
        }
        (Problem::Oim { vertices, edges, .. }, Action::VertexSet(set)) => {
            cascade::exact_trigger_probabilities(*vertices, edges, set, mu.as_slice())?
        }
        (Problem::KCenter { metric, .. }, Action::VertexSet(set)) => indicator(
            &|i| {
                let (u, v) = metric.edges()[i];
                set.binary_search(&u).is_ok() || set.binary_search(&v).is_ok()
            },
            n,
        ),
        (Problem::VertexCover { .. }, Action::Cover(set)) => {
            indicator(&|i| set.binary_search(&i).is_ok(), n)
        }
        (Problem::MaxCut { vertices, edges }, Action::Cut(set)) => {
            let side = side_mask(*vertices, set);
            indicator(&|i| side[edges[i].0] != side[edges[i].1], n)
        }
        (Problem::MaxCut { edges, .. }, Action::CutDistribution(a)) => edges
            .iter()
            .map(|&(u, v)| a.crossing_probability(u, v))
            .collect(),
        (Problem::Tsp { metric }, Action::Tour(tour)) => {
            let arms = metric.tour_arms(tour);
            indicator(&|i| arms.binary_search(&i).is_ok(), n)
        }
        _ => return Err(kind_mismatch(instance, action)),
    })
}

/// `p_arm(A)` under the instance's true means, with a standard error.
///
/// Exact (standard error 0) except for OIM graphs too large to enumerate,
/// where `mc_samples` cascades seeded by `seed` are simulated.
pub fn triggering_probability(
    instance: &ProblemInstance,
    action: &Action,
    arm: usize,
    mc_samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let n = instance.n_arms();
    if arm >= n {
        return Err(Error::ArmOutOfRange { arm, n });
    }
    if let (Problem::Oim { vertices, edges, .. }, Action::VertexSet(set)) =
        (instance.problem(), action)
    {
        if !cascade::is_enumerable(*vertices, edges) {
            check_feasible(instance, action)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            return cascade::trigger_probability_mc(
                *vertices,
                edges,
                set,
                arm,
                instance.means().as_slice(),
                mc_samples,
                &mut rng,
            );
        }
    }
    let p = triggering_probabilities(instance, action, instance.means())?;
    Ok((p[arm], 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl SmoothnessCheck {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        SmoothnessCheck {
            lhs,
            rhs,
            holds: lhs <= rhs + TOLERANCE,
        }
    }
}

/// `|r(A, μ) − r(A, μ′)| ≤ Σ_i p_i(A) B_i |μ_i − μ′_i|` with the triggering
/// probabilities evaluated under `mu` and `B` taken from the instance.
pub fn check_smoothness(
    instance: &ProblemInstance,
    action: &Action,
    mu: &MeanVector,
    mu_prime: &MeanVector,
) -> Result<SmoothnessCheck> {
    mu_prime.ensure_len(instance.n_arms())?;
    let lhs = (reward(instance, action, mu)? - reward(instance, action, mu_prime)?).abs();
    let p = triggering_probabilities(instance, action, mu)?;
    let rhs = p
        .iter()
        .zip(instance.smoothness().weights())
        .zip(mu.as_slice().iter().zip(mu_prime.as_slice()))
        .map(|((p, b), (x, y))| p * b * (x - y).abs())
        .sum();
    Ok(SmoothnessCheck::new(lhs, rhs))
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Number of actions `enumerate_actions` would visit.
pub fn action_count(instance: &ProblemInstance) -> u128 {
    match instance.problem() {
        Problem::Pmc { left, k, .. } => binomial(*left, *k),
        Problem::Oim { vertices, k, .. } => binomial(*vertices, *k),
        Problem::KCenter { metric, k } => binomial(metric.vertices(), *k),
        Problem::VertexCover { vertices, .. } | Problem::MaxCut { vertices, .. } => {
            1u128 << (*vertices).min(127)
        }
        Problem::Tsp { metric } => factorial(metric.vertices() - 1) / 2,
    }
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Calls `f` on every tour through `0..n` starting at 0 whose second vertex
/// is smaller than its last, i.e. each undirected Hamiltonian cycle once.
pub fn for_each_tour(n: usize, mut f: impl FnMut(&[usize])) {
    if n < 3 {
        if n > 0 {
            f(&(0..n).collect::<Vec<_>>());
        }
        return;
    }
    let mut rest: Vec<usize> = (1..n).collect();
    // lexicographic permutations of 1..n
    loop {
        if rest[0] < rest[rest.len() - 1] {
            let mut tour = Vec::with_capacity(n);
            tour.push(0);
            tour.extend_from_slice(&rest);
            f(&tour);
        }
        let Some(i) = (0..rest.len() - 1).rev().find(|&i| rest[i] < rest[i + 1]) else {
            return;
        };
        let j = (i + 1..rest.len()).rev().find(|&j| rest[j] > rest[i]).expect("successor exists");
        rest.swap(i, j);
        rest[i + 1..].reverse();
    }
}

fn ensure_enumerable(instance: &ProblemInstance) -> Result<()> {
    let count = action_count(instance);
    let vertex_bound = matches!(
        instance.problem(),
        Problem::VertexCover { .. } | Problem::MaxCut { .. } | Problem::Tsp { .. }
    );
    if vertex_bound {
        let n = instance.problem().ground_set();
        if n > MAX_EXHAUSTIVE_VERTICES {
            return Err(Error::TooLarge {
                count,
                limit: action_count_limit(instance),
            });
        }
    } else if count > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            count,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

fn action_count_limit(instance: &ProblemInstance) -> u128 {
    match instance.problem() {
        Problem::Tsp { .. } => factorial(MAX_EXHAUSTIVE_VERTICES - 1) / 2,
        _ => 1u128 << MAX_EXHAUSTIVE_VERTICES,
    }
}

/// Visits every deterministic action of the instance. Max-Cut is enumerated
/// over deterministic cuts, which attain the optimum of any cut distribution.
pub fn enumerate_actions(instance: &ProblemInstance, mut f: impl FnMut(Action)) -> Result<()> {
    ensure_enumerable(instance)?;
    match instance.problem() {
        Problem::Pmc { k, .. } | Problem::Oim { k, .. } | Problem::KCenter { k, .. } => {
            for_each_subset(instance.problem().ground_set(), *k, |s| {
                f(Action::VertexSet(s.to_vec()))
            });
        }
        Problem::VertexCover { vertices, edges } => {
            for mask in 0u64..(1u64 << vertices) {
                if edges.iter().all(|&(u, v)| (mask >> u | mask >> v) & 1 == 1) {
                    f(Action::Cover((0..*vertices).filter(|&v| mask >> v & 1 == 1).collect()));
                }
            }
        }
        Problem::MaxCut { vertices, .. } => {
            for mask in 0u64..(1u64 << vertices) {
                f(Action::Cut((0..*vertices).filter(|&v| mask >> v & 1 == 1).collect()));
            }
        }
        Problem::Tsp { metric } => for_each_tour(metric.vertices(), |t| f(Action::Tour(t.to_vec()))),
    }
    Ok(())
}

/// Exhaustive argmax of `r(·, μ)`; ties go to the lexicographically smallest encoding.
pub fn exact_optimum(instance: &ProblemInstance, mu: &MeanVector) -> Result<(Action, f64)> {
    mu.ensure_len(instance.n_arms())?;
    let mut best: Option<(Action, f64)> = None;
    let mut failure = None;
    enumerate_actions(instance, |a| {
        if failure.is_some() {
            return;
        }
        match reward(instance, &a, mu) {
            Ok(v) => {
                let better = match &best {
                    None => true,
                    Some((b, bv)) => v > *bv || (v == *bv && a.encoding() < b.encoding()),
                };
                if better {
                    best = Some((a, v));
                }
            }
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    best.ok_or_else(|| Error::Infeasible("the action space is empty".into()))
}
