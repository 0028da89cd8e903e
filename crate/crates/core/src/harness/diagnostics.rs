//! Instance constants that appear in the regret bounds, by enumeration.

use serde::{Deserialize, Serialize};

use super::Benchmark;
use crate::error::Result;
use crate::model::{enumerate_actions, reward, triggering_probabilities, Problem, ProblemInstance};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundDiagnostics {
    /// Smallest positive gap over all actions (`None` if every gap is 0).
    pub delta_min: Option<f64>,
    pub delta_max: f64,
    /// Largest number of arms with positive triggering probability.
    pub m: usize,
    /// Number of triggerable arms of the optimal action.
    pub m_star: usize,
    /// Smallest positive triggering probability.
    pub p_star: f64,
    pub b: Vec<f64>,
    /// Smallest positive gap among actions that can trigger arm `i`.
    pub delta_i_min: Vec<Option<f64>>,
    /// `Σ_j B_j c_j` per arm with worst-case weights.
    pub weight_sum: Vec<f64>,
    /// `Σ_i (Σ_j B_ij c_j)² ln(m) / Δ_{i,min}` over arms with a positive gap.
    pub leading_term: f64,
    pub actions: u64,
}

/// Worst-case `Σ_j c_j` times the sub-reward smoothness multiplier.
fn decomposition_factor(instance: &ProblemInstance) -> f64 {
    match instance.problem() {
        Problem::Pmc { k, .. } | Problem::Oim { k, .. } => {
            // |A* \ A^{j−1}| ≤ k turns c_j into (1 − 1/k)^{k−j}
            let kf = *k as f64;
            (1..=*k).map(|j| (1.0 - 1.0 / kf).powi((k - j) as i32)).sum()
        }
        Problem::KCenter { k, .. } => 0.5 * *k as f64,
        Problem::VertexCover { .. } => 1.0,
        // c = α with sub-reward smoothness 1/α
        Problem::MaxCut { .. } => 1.0,
        Problem::Tsp { metric } => {
            let n = metric.vertices();
            // |Ẽ| ≤ (n − 1) + n/2
            let multigraph = (n - 1) + n / 2;
            2.0 * (2.0 / 3.0) * multigraph as f64
        }
    }
}

pub fn bound_diagnostics(instance: &ProblemInstance) -> Result<BoundDiagnostics> {
    let bench = Benchmark::new(instance)?;
    let n = instance.n_arms();
    let mu = instance.means();
    let mut delta_min: Option<f64> = None;
    let mut delta_max = 0.0f64;
    let mut m = 0usize;
    let mut p_star = 1.0f64;
    let mut delta_i_min: Vec<Option<f64>> = vec![None; n];
    let mut actions = 0u64;
    let mut failure = None;
    enumerate_actions(instance, |a| {
        if failure.is_some() {
            return;
        }
        let mut step = || -> Result<()> {
            let gap = bench.gap_of_value(reward(instance, &a, mu)?);
            let p = triggering_probabilities(instance, &a, mu)?;
            actions += 1;
            delta_max = delta_max.max(gap);
            let triggered = p.iter().filter(|&&q| q > 0.0).count();
            m = m.max(triggered);
            for (i, &q) in p.iter().enumerate() {
                if q > 0.0 {
                    p_star = p_star.min(q);
                    if gap > 0.0 {
                        delta_i_min[i] = Some(delta_i_min[i].map_or(gap, |d| d.min(gap)));
                    }
                }
            }
            if gap > 0.0 {
                delta_min = Some(delta_min.map_or(gap, |d| d.min(gap)));
            }
            Ok(())
        };
        if let Err(e) = step() {
            failure = Some(e);
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let m_star = triggering_probabilities(instance, &bench.optimum, mu)?
        .iter()
        .filter(|&&q| q > 0.0)
        .count();
    let factor = decomposition_factor(instance);
    let b = instance.smoothness().weights().to_vec();
    let weight_sum: Vec<f64> = b.iter().map(|&bi| bi * factor).collect();
    let log_m = (m.max(1) as f64).ln();
    let leading_term = weight_sum
        .iter()
        .zip(&delta_i_min)
        .filter_map(|(w, d)| d.map(|d| w * w * log_m / d))
        .sum();
    Ok(BoundDiagnostics {
        delta_min,
        delta_max,
        m,
        m_star,
        p_star,
        b,
        delta_i_min,
        weight_sum,
        leading_term,
        actions,
    })
}
