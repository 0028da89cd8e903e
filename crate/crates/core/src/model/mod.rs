//! Shared vocabulary of the CMAB-T setting: base arms, actions, triggered sets
//! and smoothness constants.
//!
//! Every problem is stated so that a larger reward is better. Minimization
//! problems report the negated cost as their reward and carry
//! [`Sense::Minimize`] so that approximation gaps can be formed in cost space.

mod graph;
mod instance;
pub mod reward;

pub use graph::Metric;
pub use instance::{InstanceFile, Problem, ProblemInstance, ProblemKind};
pub use reward::{
    check_smoothness, enumerate_actions, exact_optimum, reward, triggering_probabilities,
    triggering_probability, SmoothnessCheck, ENUMERATION_LIMIT, MAX_EXHAUSTIVE_VERTICES,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical slack used by every real-valued inequality check.
pub const TOLERANCE: f64 = 1e-9;

/// Vector of per-arm means: the true `μ*`, a posterior sample `θ`, or an
/// empirical estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeanVector(pub Vec<f64>);

impl MeanVector {
    pub fn new(values: Vec<f64>) -> Self {
        MeanVector(values)
    }

    pub fn constant(n: usize, value: f64) -> Self {
        MeanVector(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn ensure_len(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.0.len(),
            });
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for MeanVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo - TOLERANCE && x <= self.hi + TOLERANCE
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    /// Affine map of `x` onto `[0, 1]`.
    pub fn normalize(&self, x: f64) -> f64 {
        if self.width() > 0.0 {
            (x - self.lo) / self.width()
        } else {
            0.0
        }
    }

    /// Inverse of [`Interval::normalize`].
    pub fn denormalize(&self, u: f64) -> f64 {
        self.lo + u * self.width()
    }
}

impl From<[f64; 2]> for Interval {
    fn from(v: [f64; 2]) -> Self {
        Interval { lo: v[0], hi: v[1] }
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Unit vectors `v_u`, one row per vertex, produced by the Max-Cut relaxation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitVectorAssignment {
    pub rank: usize,
    /// Row-major `|V| x rank`.
    pub data: Vec<f64>,
}

impl UnitVectorAssignment {
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let rank = rows.first().map_or(0, Vec::len);
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        UnitVectorAssignment { rank, data }
    }

    pub fn vertices(&self) -> usize {
        if self.rank == 0 {
            0
        } else {
            self.data.len() / self.rank
        }
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.data[u * self.rank..(u + 1) * self.rank]
    }

    pub fn dot(&self, u: usize, v: usize) -> f64 {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Probability that a uniformly random hyperplane separates `u` and `v`.
    pub fn crossing_probability(&self, u: usize, v: usize) -> f64 {
        self.dot(u, v).clamp(-1.0, 1.0).acos() / std::f64::consts::PI
    }

    pub fn check_unit_rows(&self, tol: f64) -> Result<()> {
        for u in 0..self.vertices() {
            let norm = self.row(u).iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > tol {
                return Err(Error::Infeasible(format!(
                    "row {u} of the unit-vector assignment has norm {norm}"
                )));
            }
        }
        Ok(())
    }
}

/// A playable action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Action {
    /// Sorted distinct vertex ids (PMC, OIM, k-center).
    VertexSet(Vec<usize>),
    /// Sorted vertex cover, e.g. the rounding of a half-integral LP point.
    Cover(Vec<usize>),
    /// Hamiltonian cycle given as a vertex sequence; the closing edge is implicit.
    Tour(Vec<usize>),
    /// Deterministic cut: the sorted vertex ids on one side.
    Cut(Vec<usize>),
    /// Distribution over cuts induced by hyperplane rounding of unit vectors.
    CutDistribution(UnitVectorAssignment),
}

impl Action {
    /// Encoding used for lexicographic tie-breaking between discrete actions.
    pub fn encoding(&self) -> &[usize] {
        match self {
            Action::VertexSet(v) | Action::Cover(v) | Action::Tour(v) | Action::Cut(v) => v,
            Action::CutDistribution(_) => &[],
        }
    }

    pub fn is_randomized(&self) -> bool {
        matches!(self, Action::CutDistribution(_))
    }
}

impl std::fmt::Display for Action {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        match self {
            Action::VertexSet(v) => write!(f, "set[{}]", join(v)),
            Action::Cover(v) => write!(f, "cover[{}]", join(v)),
            Action::Tour(v) => write!(f, "tour[{}]", join(v)),
            Action::Cut(v) => write!(f, "cut[{}]", join(v)),
            Action::CutDistribution(a) => write!(f, "cut-distribution[{}x{}]", a.vertices(), a.rank),
        }
    }
}

/// Sorted distinct arm ids that were observed in one round.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TriggeredSet(Vec<usize>);

impl TriggeredSet {
    /// Builds a triggered set, sorting and deduplicating, and checking ids against `n`.
    pub fn new(mut arms: Vec<usize>, n: usize) -> Result<Self> {
        arms.sort_unstable();
        arms.dedup();
        if let Some(&arm) = arms.iter().find(|&&a| a >= n) {
            return Err(Error::ArmOutOfRange { arm, n });
        }
        Ok(TriggeredSet(arms))
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        TriggeredSet(
            mask.iter()
                .enumerate()
                .filter_map(|(i, &m)| m.then_some(i))
                .collect(),
        )
    }

    pub fn arms(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, arm: usize) -> bool {
        self.0.binary_search(&arm).is_ok()
    }
}

/// Per-arm Lipschitz weights `B` of the triggering-modulated smoothness condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SmoothnessCert(pub Vec<f64>);

impl SmoothnessCert {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(Error::invalid(
                "nonnegative B",
                format!("B[{i}] = {w} must be finite and nonnegative"),
            ));
        }
        Ok(SmoothnessCert(weights))
    }

    pub fn uniform(n: usize, value: f64) -> Self {
        SmoothnessCert(vec![value; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }
}

/// Approximation ratio of Goemans-Williamson hyperplane rounding:
/// `(2/π) · min_{0<θ≤π} θ / (1 − cos θ)`.
pub fn goemans_williamson_ratio() -> f64 {
    let f = |t: f64| t / (1.0 - t.cos());
    // unimodal on (0, π]; golden-section search
    let (mut a, mut b) = (1.0_f64, std::f64::consts::PI);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    2.0 / std::f64::consts::PI * f(0.5 * (a + b))
}
