//! Re-evaluates a decomposition trace under the true means and compares the
//! gap of the final action against the weighted exact sub-gaps.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Benchmark;
use crate::error::{Error, Result};
use crate::model::{reward, Action, Metric, Problem, ProblemInstance, TOLERANCE};
use crate::oracle::christofides::{edge_weight, odd_vertices};
use crate::oracle::kcenter::dist_to_set;
use crate::oracle::maxcut::{maxcut_sdp, sdp_objective, SdpConfig};
use crate::oracle::{DecompositionTrace, SubAction, Weight};

/// Vertex ceiling for enumerating half-integral points (`3^|V|` of them).
pub const MAX_HALF_INTEGRAL_VERTICES: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Reduce2ExactCheck {
    /// Approximation gap of the final action under the true means.
    pub lhs: f64,
    /// `Σ_j c_j (r_j(E_j*) − r_j(E_j))` under the true means.
    pub rhs: f64,
    pub holds: bool,
    /// `(c_j, r_j(E_j*), r_j(E_j))` per sub-problem.
    pub terms: Vec<(f64, f64, f64)>,
}

fn prefix_set(prefix: &[usize]) -> Action {
    let mut s = prefix.to_vec();
    s.sort_unstable();
    Action::VertexSet(s)
}

/// `E_j*` over one-element extensions of the trace's own prefix.
fn greedy_terms(
    instance: &ProblemInstance,
    trace: &DecompositionTrace,
    bench: &Benchmark,
) -> Result<Vec<(f64, f64, f64)>> {
    let mu = instance.means();
    let ground = instance.problem().ground_set();
    let optimum = bench.optimum.encoding();
    let mut terms = Vec::new();
    for sub in &trace.subproblems {
        let SubAction::Prefix(prefix) = &sub.sub_action else {
            return Err(Error::Config("expected a greedy prefix".into()));
        };
        let (last, before) = prefix
            .split_last()
            .ok_or_else(|| Error::Config("empty greedy prefix".into()))?;
        let value = reward(instance, &prefix_set(prefix), mu)?;
        let mut best = value;
        for c in (0..ground).filter(|c| !before.contains(c) && c != last) {
            let mut ext = before.to_vec();
            ext.push(c);
            best = best.max(reward(instance, &prefix_set(&ext), mu)?);
        }
        let weight = match sub.weight {
            Weight::Telescoping { k, step } => {
                let missing = optimum.iter().filter(|a| !before.contains(a)).count();
                (1.0 - 1.0 / k as f64).powi((k - step) as i32) / k as f64 * missing as f64
            }
            Weight::Fixed(c) => c,
        };
        terms.push((weight, best, value));
    }
    Ok(terms)
}

/// Farthest-first sub-rewards `r_j = d(a_j, {a_1..a_{j−1}})`, `r_1 = 0`.
fn kcenter_terms(metric: &Metric, mu: &[f64], trace: &DecompositionTrace) -> Result<Vec<(f64, f64, f64)>> {
    let n = metric.vertices();
    trace
        .subproblems
        .iter()
        .map(|sub| {
            let SubAction::Prefix(prefix) = &sub.sub_action else {
                return Err(Error::Config("expected a center prefix".into()));
            };
            let (&last, before) = prefix
                .split_last()
                .ok_or_else(|| Error::Config("empty center prefix".into()))?;
            let c = match sub.weight {
                Weight::Fixed(c) => c,
                Weight::Telescoping { .. } => {
                    return Err(Error::Config("k-center uses fixed weights".into()))
                }
            };
            if before.is_empty() {
                return Ok((c, 0.0, 0.0));
            }
            let value = dist_to_set(metric, mu, last, before);
            let best = (0..n)
                .filter(|v| !before.contains(v))
                .map(|v| dist_to_set(metric, mu, v, before))
                .fold(value, f64::max);
            Ok((c, best, value))
        })
        .collect()
}

/// Best `−xᵀμ` over all half-integral feasible points, by enumeration.
pub fn best_half_integral(vertices: usize, edges: &[(usize, usize)], mu: &[f64]) -> Result<f64> {
    if vertices > MAX_HALF_INTEGRAL_VERTICES {
        return Err(Error::TooLarge {
            count: 3u128.pow(vertices as u32),
            limit: 3u128.pow(MAX_HALF_INTEGRAL_VERTICES as u32),
        });
    }
    let mut x = vec![0u8; vertices];
    let mut best = f64::NEG_INFINITY;
    loop {
        if edges.iter().all(|&(u, v)| x[u] + x[v] >= 2) {
            let value = -x.iter().zip(mu).map(|(&a, &c)| f64::from(a) * 0.5 * c).sum::<f64>();
            best = best.max(value);
        }
        // base-3 counter
        let mut i = 0;
        while i < vertices && x[i] == 2 {
            x[i] = 0;
            i += 1;
        }
        if i == vertices {
            return Ok(best);
        }
        x[i] += 1;
    }
}

/// Minimum spanning tree weight by Kruskal's algorithm.
pub fn kruskal_weight(metric: &Metric, mu: &[f64]) -> f64 {
    let n = metric.vertices();
    let mut order: Vec<usize> = (0..metric.edges().len()).collect();
    order.sort_by(|&a, &b| mu[a].total_cmp(&mu[b]));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut total = 0.0;
    for arm in order {
        let (u, v) = metric.edges()[arm];
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            total += mu[arm];
        }
    }
    total
}

/// Minimum perfect matching weight on `vertices` by recursive enumeration.
pub fn matching_weight_brute(metric: &Metric, mu: &[f64], vertices: &[usize]) -> f64 {
    fn go(metric: &Metric, mu: &[f64], rest: &mut Vec<usize>) -> f64 {
        if rest.is_empty() {
            return 0.0;
        }
        let first = rest.remove(0);
        let mut best = f64::INFINITY;
        for i in 0..rest.len() {
            let partner = rest.remove(i);
            best = best.min(metric.dist(mu, first, partner) + go(metric, mu, rest));
            rest.insert(i, partner);
        }
        rest.insert(0, first);
        best
    }
    go(metric, mu, &mut vertices.to_vec())
}

/// Checks `Δ(A) ≤ Σ_j c_j (r_j(E_j*, μ*) − r_j(E_j, μ*))` for a trace
/// produced on arbitrary means, with `μ*` the instance's true means and each
/// `E_j*` found by an independent exact search.
pub fn check_reduce2exact(
    instance: &ProblemInstance,
    trace: &DecompositionTrace,
    bench: &Benchmark,
) -> Result<Reduce2ExactCheck> {
    if trace.subproblems.is_empty() {
        return Err(Error::Config("trace has no sub-problems".into()));
    }
    let mu = instance.means();
    let m = mu.as_slice();
    let lhs = bench.gap(instance, &trace.final_action)?;
    let terms = match instance.problem() {
        Problem::Pmc { .. } | Problem::Oim { .. } => greedy_terms(instance, trace, bench)?,
        Problem::KCenter { metric, .. } => kcenter_terms(metric, m, trace)?,
        Problem::VertexCover { vertices, edges } => {
            let sub = &trace.subproblems[0];
            let SubAction::HalfIntegral(x) = &sub.sub_action else {
                return Err(Error::Config("expected a half-integral point".into()));
            };
            let value = -x.iter().zip(m).map(|(&a, &c)| f64::from(a) * 0.5 * c).sum::<f64>();
            vec![(1.0, best_half_integral(*vertices, edges, m)?, value)]
        }
        Problem::MaxCut { vertices, edges } => {
            let sub = &trace.subproblems[0];
            let SubAction::UnitVectors(a) = &sub.sub_action else {
                return Err(Error::Config("expected unit vectors".into()));
            };
            let c = match sub.weight {
                Weight::Fixed(c) => c,
                Weight::Telescoping { .. } => {
                    return Err(Error::Config("Max-Cut uses a fixed weight".into()))
                }
            };
            let value = sdp_objective(edges, m, a);
            let mut rng = ChaCha8Rng::seed_from_u64(0x5d9);
            let cfg = SdpConfig {
                tol: 1e-12,
                ..SdpConfig::default()
            };
            let best = match maxcut_sdp(*vertices, edges, mu, &cfg, &mut rng) {
                Ok(sol) => sol.objective,
                Err(Error::NotConverged { objective, .. }) => objective,
                Err(e) => return Err(e),
            };
            // the relaxation optimum is at least every value seen
            vec![(c, best.max(value), value)]
        }
        Problem::Tsp { metric } => {
            let [tree_sub, match_sub] = &trace.subproblems[..] else {
                return Err(Error::Config("Christofides traces have two sub-problems".into()));
            };
            let (SubAction::SpanningTree(tree), SubAction::Matching(matching)) =
                (&tree_sub.sub_action, &match_sub.sub_action)
            else {
                return Err(Error::Config("expected a spanning tree and a matching".into()));
            };
            let weight = |w: Weight| match w {
                Weight::Fixed(c) => Ok(c),
                Weight::Telescoping { .. } => Err(Error::Config("TSP uses fixed weights".into())),
            };
            let odd = odd_vertices(metric.vertices(), tree);
            vec![
                (
                    weight(tree_sub.weight)?,
                    -kruskal_weight(metric, m),
                    -edge_weight(metric, m, tree),
                ),
                (
                    weight(match_sub.weight)?,
                    -matching_weight_brute(metric, m, &odd),
                    -edge_weight(metric, m, matching),
                ),
            ]
        }
    };
    let rhs = terms.iter().map(|(c, best, value)| c * (best - value)).sum::<f64>();
    Ok(Reduce2ExactCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + TOLERANCE,
        terms,
    })
}
