//! Christofides' tour: minimum spanning tree, exact minimum perfect matching
//! on its odd-degree vertices, Eulerian circuit of the union, and
//! shortcutting from a uniformly chosen start edge of the multigraph.

use std::collections::BTreeMap;

use rand::Rng;

use super::{DecompositionTrace, SubAction, SubProblem, Weight};
use crate::error::{Error, Result};
use crate::model::{Action, MeanVector, Metric};

/// Largest odd-vertex set handed to the bitmask matching.
pub const MAX_ODD_VERTICES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ChristofidesOutput {
    pub tour: Action,
    pub trace: DecompositionTrace,
    /// Arm → probability of lying on the tour when the start edge is uniform on the multigraph.
    pub start_edge_probs: BTreeMap<usize, f64>,
    /// Multigraph edges `Ẽ` (tree edges then matching edges).
    pub multigraph: Vec<(usize, usize)>,
    /// Index into `multigraph` of the edge the shortcut started from.
    pub start_edge: usize,
}

/// Prim's algorithm on the complete graph; ties go to the smallest vertex id.
pub fn minimum_spanning_tree(metric: &Metric, mu: &[f64]) -> Vec<(usize, usize)> {
    let n = metric.vertices();
    if n == 0 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![(f64::INFINITY, 0usize); n];
    in_tree[0] = true;
    for v in 1..n {
        best[v] = (metric.dist(mu, 0, v), 0);
    }
    let mut tree = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let v = (0..n)
            .filter(|&v| !in_tree[v])
            .fold(None, |acc: Option<usize>, v| match acc {
                Some(a) if best[a].0 <= best[v].0 => Some(a),
                _ => Some(v),
            })
            .expect("a vertex remains outside the tree");
        in_tree[v] = true;
        let p = best[v].1;
        tree.push((p.min(v), p.max(v)));
        for w in 0..n {
            if !in_tree[w] {
                let d = metric.dist(mu, v, w);
                if d < best[w].0 {
                    best[w] = (d, v);
                }
            }
        }
    }
    tree
}

pub fn edge_weight(metric: &Metric, mu: &[f64], edges: &[(usize, usize)]) -> f64 {
    edges.iter().map(|&(u, v)| metric.dist(mu, u, v)).sum()
}

/// Vertices of odd degree in `edges`, ascending.
pub fn odd_vertices(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut deg = vec![0usize; n];
    for &(u, v) in edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    (0..n).filter(|&v| deg[v] % 2 == 1).collect()
}

/// Exact minimum-weight perfect matching on `vertices` by dynamic
/// programming over subsets: the lowest unmatched vertex is paired with
/// every other unmatched one.
pub fn min_weight_perfect_matching(
    metric: &Metric,
    mu: &[f64],
    vertices: &[usize],
) -> Result<Vec<(usize, usize)>> {
    let q = vertices.len();
    if q > MAX_ODD_VERTICES {
        return Err(Error::TooManyOddVertices {
            count: q,
            limit: MAX_ODD_VERTICES,
        });
    }
    if q % 2 == 1 {
        return Err(Error::Infeasible(format!(
            "perfect matching on {q} vertices"
        )));
    }
    let full = (1usize << q) - 1;
    let mut cost = vec![f64::INFINITY; 1 << q];
    let mut choice = vec![(0usize, 0usize); 1 << q];
    cost[0] = 0.0;
    // cost[mask] = best matching of the vertices in mask
    for mask in 1..=full {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let c = cost[rest & !(1 << j)] + metric.dist(mu, vertices[i], vertices[j]);
            if c < cost[mask] {
                cost[mask] = c;
                choice[mask] = (i, j);
            }
        }
    }
    let mut pairs = Vec::with_capacity(q / 2);
    let mut mask = full;
    while mask != 0 {
        let (i, j) = choice[mask];
        let (a, b) = (vertices[i], vertices[j]);
        pairs.push((a.min(b), a.max(b)));
        mask &= !(1 << i) & !(1 << j);
    }
    pairs.sort_unstable();
    Ok(pairs)
}

/// Hierholzer's algorithm. Returns the circuit as a list of
/// `(from, to, multigraph edge index)`; every edge appears exactly once.
pub fn eulerian_circuit(n: usize, edges: &[(usize, usize)]) -> Result<Vec<(usize, usize, usize)>> {
    if edges.is_empty() {
        return Ok(Vec::new());
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    if let Some(v) = (0..n).find(|&v| adj[v].len() % 2 == 1) {
        return Err(Error::Infeasible(format!(
            "vertex {v} has odd degree in the multigraph"
        )));
    }
    let mut used = vec![false; edges.len()];
    let mut cursor = vec![0usize; n];
    let start = edges[0].0;
    // stack of (vertex, edge used to arrive)
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut reversed: Vec<(usize, Option<usize>)> = Vec::with_capacity(edges.len() + 1);
    while let Some(&(v, _)) = stack.last() {
        let mut advanced = false;
        while cursor[v] < adj[v].len() {
            let (w, e) = adj[v][cursor[v]];
            cursor[v] += 1;
            if !used[e] {
                used[e] = true;
                stack.push((w, Some(e)));
                advanced = true;
                break;
            }
        }
        if !advanced {
            reversed.push(stack.pop().expect("nonempty"));
        }
    }
    if used.iter().any(|u| !u) {
        return Err(Error::Infeasible("multigraph is disconnected".into()));
    }
    reversed.reverse();
    Ok(reversed
        .windows(2)
        .map(|w| (w[0].0, w[1].0, w[1].1.expect("arrival edge")))
        .collect())
}

/// Walks the circuit starting at position `start` and skips repeated vertices.
pub fn shortcut(circuit: &[(usize, usize, usize)], start: usize) -> Vec<usize> {
    let len = circuit.len();
    let mut seen = std::collections::BTreeSet::new();
    let mut tour = Vec::new();
    let first = circuit[start].0;
    seen.insert(first);
    tour.push(first);
    for i in 0..len {
        let (_, to, _) = circuit[(start + i) % len];
        if seen.insert(to) {
            tour.push(to);
        }
    }
    tour
}

/// Rotates to start at vertex 0 and orients so the second vertex is smaller than the last.
pub fn canonical_tour(tour: &[usize]) -> Vec<usize> {
    let n = tour.len();
    let Some(pos) = tour.iter().position(|&v| v == 0) else {
        return tour.to_vec();
    };
    let mut out: Vec<usize> = (0..n).map(|i| tour[(pos + i) % n]).collect();
    if n > 2 && out[1] > out[n - 1] {
        out[1..].reverse();
    }
    out
}

pub fn christofides<R: Rng + ?Sized>(
    metric: &Metric,
    mu: &MeanVector,
    rng: &mut R,
) -> Result<ChristofidesOutput> {
    mu.ensure_len(metric.edges().len())?;
    let n = metric.vertices();
    if n < 3 {
        return Err(Error::Infeasible("a tour needs at least 3 vertices".into()));
    }
    let mu = mu.as_slice();
    let tree = minimum_spanning_tree(metric, mu);
    let odd = odd_vertices(n, &tree);
    let matching = min_weight_perfect_matching(metric, mu, &odd)?;

    let multigraph: Vec<(usize, usize)> = tree.iter().chain(&matching).copied().collect();
    let circuit = eulerian_circuit(n, &multigraph)?;
    // each start edge leads to one tour; the start edge itself is always kept
    let position_of: BTreeMap<usize, usize> = circuit
        .iter()
        .enumerate()
        .map(|(pos, &(_, _, e))| (e, pos))
        .collect();
    let tours: Vec<Vec<usize>> = (0..multigraph.len())
        .map(|e| shortcut(&circuit, position_of[&e]))
        .collect();
    let mut start_edge_probs: BTreeMap<usize, f64> = BTreeMap::new();
    let share = 1.0 / multigraph.len() as f64;
    for tour in &tours {
        for arm in metric.tour_arms(tour) {
            *start_edge_probs.entry(arm).or_insert(0.0) += share;
        }
    }
    let start_edge = rng.random_range(0..multigraph.len());
    let tour = Action::Tour(canonical_tour(&tours[start_edge]));

    let trace = DecompositionTrace {
        subproblems: vec![
            SubProblem {
                value: -edge_weight(metric, mu, &tree),
                sub_action: SubAction::SpanningTree(tree),
                weight: Weight::Fixed(2.0 / 3.0),
            },
            SubProblem {
                value: -edge_weight(metric, mu, &matching),
                sub_action: SubAction::Matching(matching),
                weight: Weight::Fixed(2.0 / 3.0),
            },
        ],
        final_action: tour.clone(),
    };
    Ok(ChristofidesOutput {
        tour,
        trace,
        start_edge_probs,
        multigraph,
        start_edge,
    })
}
