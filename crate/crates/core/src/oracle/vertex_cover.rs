//! Half-integral LP relaxation of weighted vertex cover.
//!
//! The LP optimum over `{0, ½, 1}^V` is read off a minimum cut of the
//! bipartite double cover: vertex `v` becomes `v_L` and `v_R`, edge `(u, v)`
//! becomes `(u_L, v_R)` and `(v_L, u_R)`, and
//! `x_v = ([v_L ∈ C] + [v_R ∈ C]) / 2` for the minimum weight cover `C`.

use std::collections::VecDeque;

use super::{DecompositionTrace, SubAction, SubProblem, Weight};
use crate::error::{Error, Result};
use crate::model::{Action, MeanVector};

/// Dense-matrix Edmonds–Karp max flow.
struct FlowNetwork {
    n: usize,
    cap: Vec<f64>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        FlowNetwork {
            n,
            cap: vec![0.0; n * n],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: f64) {
        self.cap[u * self.n + v] += c;
    }

    fn bfs(&self, s: usize, eps: f64) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.n];
        parent[s] = Some(s);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..self.n {
                if parent[v].is_none() && self.cap[u * self.n + v] > eps {
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    /// Runs max flow and returns the source side of a minimum cut.
    fn min_cut(&mut self, s: usize, t: usize, eps: f64) -> Vec<bool> {
        loop {
            let parent = self.bfs(s, eps);
            if parent[t].is_none() {
                return parent.iter().map(Option::is_some).collect();
            }
            let mut bottleneck = f64::INFINITY;
            let mut v = t;
            while v != s {
                let u = parent[v].expect("on path");
                bottleneck = bottleneck.min(self.cap[u * self.n + v]);
                v = u;
            }
            let mut v = t;
            while v != s {
                let u = parent[v].expect("on path");
                self.cap[u * self.n + v] -= bottleneck;
                self.cap[v * self.n + u] += bottleneck;
                v = u;
            }
        }
    }
}

/// Optimal half-integral point, as `2·x_v`.
pub fn half_integral_lp(vertices: usize, edges: &[(usize, usize)], costs: &[f64]) -> Result<Vec<u8>> {
    if costs.len() != vertices {
        return Err(Error::DimensionMismatch {
            expected: vertices,
            got: costs.len(),
        });
    }
    if let Some((v, &c)) = costs.iter().enumerate().find(|(_, c)| !(**c >= 0.0)) {
        return Err(Error::NegativeCost { vertex: v, value: c });
    }
    // nodes: 0..V left copies, V..2V right copies, 2V source, 2V+1 sink
    let (s, t) = (2 * vertices, 2 * vertices + 1);
    let total: f64 = costs.iter().sum();
    let big = 2.0 * total + 1.0;
    let mut net = FlowNetwork::new(2 * vertices + 2);
    for (v, &c) in costs.iter().enumerate() {
        net.add(s, v, c);
        net.add(vertices + v, t, c);
    }
    for &(u, v) in edges {
        net.add(u, vertices + v, big);
        net.add(v, vertices + u, big);
    }
    let eps = 1e-12 * (1.0 + total);
    let source_side = net.min_cut(s, t, eps);
    // left copy is in the cover when its source arc is cut, right copy when its sink arc is
    Ok((0..vertices)
        .map(|v| u8::from(!source_side[v]) + u8::from(source_side[vertices + v]))
        .collect())
}

/// LP relaxation oracle: solve the half-integral LP exactly, then keep every
/// vertex with `x_v >= 1/2`.
pub fn vc_half_integral(
    vertices: usize,
    edges: &[(usize, usize)],
    mu: &MeanVector,
) -> Result<(Action, DecompositionTrace)> {
    mu.ensure_len(vertices)?;
    let x2 = half_integral_lp(vertices, edges, mu.as_slice())?;
    let value = -x2
        .iter()
        .zip(mu.as_slice())
        .map(|(&x, &c)| f64::from(x) * 0.5 * c)
        .sum::<f64>();
    let cover: Vec<usize> = (0..vertices).filter(|&v| x2[v] >= 1).collect();
    let action = Action::Cover(cover);
    Ok((
        action.clone(),
        DecompositionTrace {
            subproblems: vec![SubProblem {
                sub_action: SubAction::HalfIntegral(x2),
                value,
                weight: Weight::Fixed(1.0),
            }],
            final_action: action,
        },
    ))
}
