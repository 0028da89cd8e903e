//! Independent cascade on a directed graph whose edges are arms.
//!
//! Exact quantities are computed by enumerating all `2^|E|` live-edge worlds
//! with bitmask reachability; this is used whenever `|E| <= EXACT_EDGE_LIMIT`.
//! Larger graphs fall back to Monte-Carlo cascades.

use rand::Rng;

use crate::error::{Error, Result};

/// Largest edge count for which worlds are enumerated.
pub const EXACT_EDGE_LIMIT: usize = 20;
/// Bitmask reachability stores vertex sets in a `u64`.
pub const EXACT_VERTEX_LIMIT: usize = 64;
/// Default number of cascades when an exact answer is unavailable.
pub const DEFAULT_MC_SAMPLES: usize = 100_000;

pub fn is_enumerable(vertices: usize, edges: &[(usize, usize)]) -> bool {
    edges.len() <= EXACT_EDGE_LIMIT && vertices <= EXACT_VERTEX_LIMIT
}

fn ensure_enumerable(vertices: usize, edges: &[(usize, usize)]) -> Result<()> {
    if is_enumerable(vertices, edges) {
        Ok(())
    } else {
        Err(Error::TooLarge {
            count: 1u128 << edges.len().min(127),
            limit: 1u128 << EXACT_EDGE_LIMIT,
        })
    }
}

fn mask_of(seeds: &[usize]) -> u64 {
    seeds.iter().fold(0u64, |m, &s| m | (1u64 << s))
}

/// Calls `f(probability, reached)` for every world of nonzero probability.
fn for_each_world(
    vertices: usize,
    edges: &[(usize, usize)],
    seeds: &[usize],
    mu: &[f64],
    mut f: impl FnMut(f64, u64),
) {
    let m = edges.len();
    let start = mask_of(seeds);
    // edges with probability 0 or 1 are fixed; only the others are enumerated
    let mut fixed_live = vec![false; m];
    let mut free = Vec::new();
    for (j, &p) in mu.iter().enumerate() {
        if p >= 1.0 {
            fixed_live[j] = true;
        } else if p > 0.0 {
            free.push(j);
        }
    }
    let mut out = vec![0u64; vertices];
    for world in 0u64..(1u64 << free.len()) {
        let mut prob = 1.0;
        out.iter_mut().for_each(|o| *o = 0);
        for (j, &(u, v)) in edges.iter().enumerate() {
            if fixed_live[j] {
                out[u] |= 1 << v;
            }
        }
        for (b, &j) in free.iter().enumerate() {
            if world >> b & 1 == 1 {
                prob *= mu[j];
                let (u, v) = edges[j];
                out[u] |= 1 << v;
            } else {
                prob *= 1.0 - mu[j];
            }
        }
        let mut reached = start;
        let mut frontier = start;
        while frontier != 0 {
            let mut next = 0u64;
            let mut rest = frontier;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                next |= out[v];
            }
            frontier = next & !reached;
            reached |= next;
        }
        f(prob, reached);
    }
}

/// Exact influence spread `σ(seeds, μ)` by world enumeration.
pub fn exact_spread(
    vertices: usize,
    edges: &[(usize, usize)],
    seeds: &[usize],
    mu: &[f64],
) -> Result<f64> {
    ensure_enumerable(vertices, edges)?;
    let mut sigma = 0.0;
    for_each_world(vertices, edges, seeds, mu, |p, reached| {
        sigma += p * f64::from(reached.count_ones());
    });
    Ok(sigma)
}

/// Exact probability that each edge is triggered, i.e. that its source is influenced.
pub fn exact_trigger_probabilities(
    vertices: usize,
    edges: &[(usize, usize)],
    seeds: &[usize],
    mu: &[f64],
) -> Result<Vec<f64>> {
    ensure_enumerable(vertices, edges)?;
    let mut probs = vec![0.0; edges.len()];
    for_each_world(vertices, edges, seeds, mu, |p, reached| {
        for (j, &(u, _)) in edges.iter().enumerate() {
            if reached >> u & 1 == 1 {
                probs[j] += p;
            }
        }
    });
    // only rounding can push these outside [0, 1]
    probs.iter_mut().for_each(|q| *q = q.clamp(0.0, 1.0));
    Ok(probs)
}

/// Outgoing `(target, arm)` lists.
pub fn adjacency(vertices: usize, edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new(); vertices];
    for (arm, &(u, v)) in edges.iter().enumerate() {
        out[u].push((v, arm));
    }
    out
}

/// Vertices reached from `seeds` through live edges, by BFS.
pub fn reached_from(adj: &[Vec<(usize, usize)>], seeds: &[usize], live: &[bool]) -> Vec<bool> {
    let mut reached = vec![false; adj.len()];
    let mut queue: Vec<usize> = Vec::with_capacity(adj.len());
    for &s in seeds {
        if !reached[s] {
            reached[s] = true;
            queue.push(s);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        for &(v, arm) in &adj[u] {
            if live[arm] && !reached[v] {
                reached[v] = true;
                queue.push(v);
            }
        }
    }
    reached
}

fn mean_stderr(sum: f64, sum_sq: f64, samples: usize) -> (f64, f64) {
    let n = samples as f64;
    let mean = sum / n;
    if samples < 2 {
        return (mean, 0.0);
    }
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

/// Monte-Carlo estimate of the influence spread with its standard error.
pub fn ic_spread<R: Rng + ?Sized>(
    vertices: usize,
    edges: &[(usize, usize)],
    seeds: &[usize],
    mu: &[f64],
    samples: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let adj = adjacency(vertices, edges);
    let mut live = vec![false; edges.len()];
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        for (l, &p) in live.iter_mut().zip(mu) {
            *l = rng.random::<f64>() < p;
        }
        let count = reached_from(&adj, seeds, &live).iter().filter(|&&r| r).count() as f64;
        sum += count;
        sum_sq += count * count;
    }
    Ok(mean_stderr(sum, sum_sq, samples))
}

/// Monte-Carlo estimate of the probability that `arm` is triggered.
pub fn trigger_probability_mc<R: Rng + ?Sized>(
    vertices: usize,
    edges: &[(usize, usize)],
    seeds: &[usize],
    arm: usize,
    mu: &[f64],
    samples: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let adj = adjacency(vertices, edges);
    let source = edges[arm].0;
    let mut live = vec![false; edges.len()];
    let mut hits = 0usize;
    for _ in 0..samples {
        for (l, &p) in live.iter_mut().zip(mu) {
            *l = rng.random::<f64>() < p;
        }
        if reached_from(&adj, seeds, &live)[source] {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    Ok((p, (p * (1.0 - p) / samples as f64).sqrt()))
}

/// Largest number of vertices (itself included) that one vertex reaches
/// through edges of positive probability.
pub fn max_reach(vertices: usize, edges: &[(usize, usize)], mu: &[f64]) -> usize {
    let adj = adjacency(vertices, edges);
    let live: Vec<bool> = mu.iter().map(|&p| p > 0.0).collect();
    (0..vertices)
        .map(|u| reached_from(&adj, &[u], &live).iter().filter(|&&r| r).count())
        .max()
        .unwrap_or(0)
}
