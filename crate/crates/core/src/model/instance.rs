use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{goemans_williamson_ratio, Interval, MeanVector, Metric, Sense, SmoothnessCert};
use crate::error::{Error, Result};
use crate::oracle::cascade;
use crate::suite::OutcomeLaw;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Pmc,
    Oim,
    #[serde(rename = "kcenter")]
    KCenter,
    VertexCover,
    #[serde(rename = "maxcut")]
    MaxCut,
    Tsp,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 6] = [
        ProblemKind::Pmc,
        ProblemKind::Oim,
        ProblemKind::KCenter,
        ProblemKind::VertexCover,
        ProblemKind::MaxCut,
        ProblemKind::Tsp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Pmc => "pmc",
            ProblemKind::Oim => "oim",
            ProblemKind::KCenter => "kcenter",
            ProblemKind::VertexCover => "vertex_cover",
            ProblemKind::MaxCut => "maxcut",
            ProblemKind::Tsp => "tsp",
        }
    }

    pub fn sense(self) -> Sense {
        match self {
            ProblemKind::Pmc | ProblemKind::Oim | ProblemKind::MaxCut => Sense::Maximize,
            ProblemKind::KCenter | ProblemKind::VertexCover | ProblemKind::Tsp => Sense::Minimize,
        }
    }

    /// Guarantee of the oracle shipped for this problem.
    pub fn default_alpha(self) -> f64 {
        match self {
            ProblemKind::Pmc | ProblemKind::Oim => 1.0 - (-1.0f64).exp(),
            ProblemKind::KCenter | ProblemKind::VertexCover => 0.5,
            ProblemKind::MaxCut => goemans_williamson_ratio(),
            ProblemKind::Tsp => 2.0 / 3.0,
        }
    }
}

impl std::fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown problem kind `{s}`")))
    }
}

/// Combinatorial structure of an instance. Arms are indexed by position in
/// the edge list, except for vertex cover where arms are vertices.
#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    /// Bipartite graph; edges are `(left id, right id)` with right ids local to `R`.
    Pmc {
        left: usize,
        right: usize,
        edges: Vec<(usize, usize)>,
        k: usize,
    },
    Oim {
        vertices: usize,
        edges: Vec<(usize, usize)>,
        k: usize,
    },
    KCenter {
        metric: Metric,
        k: usize,
    },
    VertexCover {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    MaxCut {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    Tsp {
        metric: Metric,
    },
}

impl Problem {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Problem::Pmc { .. } => ProblemKind::Pmc,
            Problem::Oim { .. } => ProblemKind::Oim,
            Problem::KCenter { .. } => ProblemKind::KCenter,
            Problem::VertexCover { .. } => ProblemKind::VertexCover,
            Problem::MaxCut { .. } => ProblemKind::MaxCut,
            Problem::Tsp { .. } => ProblemKind::Tsp,
        }
    }

    pub fn n_arms(&self) -> usize {
        match self {
            Problem::Pmc { edges, .. }
            | Problem::Oim { edges, .. }
            | Problem::MaxCut { edges, .. } => edges.len(),
            Problem::KCenter { metric, .. } | Problem::Tsp { metric } => metric.edges().len(),
            Problem::VertexCover { vertices, .. } => *vertices,
        }
    }

    /// Number of vertices an action chooses from.
    pub fn ground_set(&self) -> usize {
        match self {
            Problem::Pmc { left, .. } => *left,
            Problem::Oim { vertices, .. }
            | Problem::VertexCover { vertices, .. }
            | Problem::MaxCut { vertices, .. } => *vertices,
            Problem::KCenter { metric, .. } | Problem::Tsp { metric } => metric.vertices(),
        }
    }

    pub fn k(&self) -> Option<usize> {
        match self {
            Problem::Pmc { k, .. } | Problem::Oim { k, .. } | Problem::KCenter { k, .. } => {
                Some(*k)
            }
            _ => None,
        }
    }
}

/// One environment: structure, true means `μ*`, approximation ratio,
/// smoothness constants, outcome domain and outcome law.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    problem: Problem,
    means: MeanVector,
    alpha: f64,
    smoothness: SmoothnessCert,
    domain: Interval,
    law: OutcomeLaw,
}

/// On-disk JSON layout of an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub kind: ProblemKind,
    pub vertices: usize,
    /// PMC only: vertices `0..left` form `L`, the rest form `R`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<usize>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
    /// Vertex cover only: per-vertex cost means.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub means: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    pub outcome_domain: Interval,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome_law: Option<OutcomeLaw>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeSpec {
    Weighted(usize, usize, f64),
    Plain(usize, usize),
}

impl EdgeSpec {
    fn endpoints(&self) -> (usize, usize) {
        match *self {
            EdgeSpec::Weighted(u, v, _) | EdgeSpec::Plain(u, v) => (u, v),
        }
    }

    fn weight(&self) -> Option<f64> {
        match *self {
            EdgeSpec::Weighted(_, _, w) => Some(w),
            EdgeSpec::Plain(..) => None,
        }
    }
}

fn require_k(kind: ProblemKind, k: Option<usize>, ground: usize) -> Result<usize> {
    let k = k.ok_or_else(|| Error::invalid("cardinality budget", format!("{kind} requires `k`")))?;
    if k == 0 || k > ground {
        return Err(Error::invalid(
            "cardinality budget",
            format!("k = {k} must lie in 1..={ground}"),
        ));
    }
    Ok(k)
}

fn undirected_simple(vertices: usize, edges: &[(usize, usize)]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for &(u, v) in edges {
        if u >= vertices || v >= vertices || u == v {
            return Err(Error::invalid(
                "simple graph",
                format!("edge ({u}, {v}) invalid for {vertices} vertices"),
            ));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::invalid("simple graph", format!("edge ({u}, {v}) repeated")));
        }
    }
    Ok(())
}

impl ProblemInstance {
    /// Validates and assembles an instance. `alpha`, `smoothness` and `law`
    /// default to the problem's natural values when `None`.
    pub fn new(
        problem: Problem,
        means: MeanVector,
        alpha: Option<f64>,
        smoothness: Option<SmoothnessCert>,
        domain: Interval,
        law: Option<OutcomeLaw>,
    ) -> Result<Self> {
        let kind = problem.kind();
        let n = problem.n_arms();
        means.ensure_len(n)?;
        if !(domain.lo.is_finite() && domain.hi.is_finite() && domain.lo < domain.hi) {
            return Err(Error::invalid(
                "outcome domain",
                format!("[{}, {}] is not a proper interval", domain.lo, domain.hi),
            ));
        }
        for (i, &m) in means.as_slice().iter().enumerate() {
            if !m.is_finite() || !domain.contains(m) {
                return Err(Error::invalid(
                    "means in outcome domain",
                    format!("mean {m} of arm {i} outside [{}, {}]", domain.lo, domain.hi),
                ));
            }
        }
        let alpha = alpha.unwrap_or_else(|| kind.default_alpha());
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::invalid("alpha in (0,1]", format!("alpha = {alpha}")));
        }
        let law = law.unwrap_or_else(|| OutcomeLaw::default_for(kind));
        law.validate(domain)?;
        law.check_problem(kind, domain)?;

        match &problem {
            Problem::Pmc {
                left,
                right,
                edges,
                k,
            } => {
                require_k(kind, Some(*k), *left)?;
                let mut seen = std::collections::BTreeSet::new();
                for &(u, v) in edges {
                    if u >= *left || v >= *right {
                        return Err(Error::invalid(
                            "bipartite edges",
                            format!("edge ({u}, {v}) must join L (size {left}) to R (size {right})"),
                        ));
                    }
                    if !seen.insert((u, v)) {
                        return Err(Error::invalid(
                            "bipartite edges",
                            format!("edge ({u}, {v}) repeated"),
                        ));
                    }
                }
                check_probabilities(&means)?;
            }
            Problem::Oim { vertices, edges, k } => {
                require_k(kind, Some(*k), *vertices)?;
                let mut seen = std::collections::BTreeSet::new();
                for &(u, v) in edges {
                    if u >= *vertices || v >= *vertices || u == v {
                        return Err(Error::invalid(
                            "directed graph",
                            format!("edge ({u}, {v}) invalid for {vertices} vertices"),
                        ));
                    }
                    if !seen.insert((u, v)) {
                        return Err(Error::invalid(
                            "directed graph",
                            format!("edge ({u}, {v}) repeated"),
                        ));
                    }
                }
                check_probabilities(&means)?;
                if let Some(i) = means.as_slice().iter().position(|&m| m <= 0.0) {
                    log::warn!(
                        "OIM edge {i} has probability 0: the minimum positive triggering probability p* may vanish"
                    );
                }
            }
            Problem::KCenter { metric, k } => {
                require_k(kind, Some(*k), metric.vertices())?;
                metric.check_triangle(means.as_slice())?;
            }
            Problem::Tsp { metric } => {
                if metric.vertices() < 3 {
                    return Err(Error::invalid(
                        "tour size",
                        "TSP needs at least 3 vertices",
                    ));
                }
                metric.check_triangle(means.as_slice())?;
            }
            Problem::VertexCover { vertices, edges } => {
                undirected_simple(*vertices, edges)?;
            }
            Problem::MaxCut { vertices, edges } => {
                undirected_simple(*vertices, edges)?;
            }
        }
        if matches!(
            kind,
            ProblemKind::KCenter | ProblemKind::Tsp | ProblemKind::VertexCover | ProblemKind::MaxCut
        ) {
            if let Some((i, &m)) = means.as_slice().iter().enumerate().find(|(_, &m)| m < 0.0) {
                return Err(Error::NegativeCost { vertex: i, value: m });
            }
        }

        let smoothness = match smoothness {
            Some(b) => {
                if b.weights().len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: b.weights().len(),
                    });
                }
                b
            }
            None => natural_smoothness(&problem, &means),
        };

        Ok(ProblemInstance {
            problem,
            means,
            alpha,
            smoothness,
            domain,
            law,
        })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn kind(&self) -> ProblemKind {
        self.problem.kind()
    }

    pub fn sense(&self) -> Sense {
        self.kind().sense()
    }

    pub fn n_arms(&self) -> usize {
        self.problem.n_arms()
    }

    pub fn means(&self) -> &MeanVector {
        &self.means
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn smoothness(&self) -> &SmoothnessCert {
        &self.smoothness
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn law(&self) -> &OutcomeLaw {
        &self.law
    }

    /// Same structure with different true means; the smoothness constants
    /// are kept unless they were derived from the old means.
    pub fn with_means(&self, means: MeanVector) -> Result<Self> {
        let keep_b = self.kind() != ProblemKind::Oim;
        ProblemInstance::new(
            self.problem.clone(),
            means,
            Some(self.alpha),
            keep_b.then(|| self.smoothness.clone()),
            self.domain,
            Some(self.law),
        )
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::invalid("alpha in (0,1]", format!("alpha = {alpha}")));
        }
        self.alpha = alpha;
        Ok(self)
    }

    pub fn with_smoothness(mut self, b: SmoothnessCert) -> Result<Self> {
        if b.weights().len() != self.n_arms() {
            return Err(Error::DimensionMismatch {
                expected: self.n_arms(),
                got: b.weights().len(),
            });
        }
        self.smoothness = b;
        Ok(self)
    }

    pub fn from_file(file: InstanceFile) -> Result<Self> {
        let kind = file.kind;
        let pairs: Vec<(usize, usize)> = file.edges.iter().map(EdgeSpec::endpoints).collect();
        let edge_weights = || -> Result<Vec<f64>> {
            file.edges
                .iter()
                .map(|e| {
                    e.weight().ok_or_else(|| {
                        let (u, v) = e.endpoints();
                        Error::invalid("edge weights", format!("edge ({u}, {v}) has no weight"))
                    })
                })
                .collect()
        };
        if kind != ProblemKind::Pmc && file.left.is_some() {
            return Err(Error::invalid("fields", "`left` is only valid for pmc"));
        }
        if kind != ProblemKind::VertexCover && file.means.is_some() {
            return Err(Error::invalid("fields", "`means` is only valid for vertex_cover"));
        }
        let no_k = matches!(
            kind,
            ProblemKind::VertexCover | ProblemKind::MaxCut | ProblemKind::Tsp
        );
        if no_k && file.k.is_some() {
            return Err(Error::invalid("fields", format!("`k` is not used by {kind}")));
        }

        let (problem, means) = match kind {
            ProblemKind::Pmc => {
                let left = file.left.ok_or_else(|| {
                    Error::invalid("fields", "pmc requires `left` (size of L)")
                })?;
                if left > file.vertices {
                    return Err(Error::invalid(
                        "bipartite edges",
                        format!("left = {left} exceeds {} vertices", file.vertices),
                    ));
                }
                let right = file.vertices - left;
                let edges = pairs
                    .iter()
                    .map(|&(u, v)| {
                        if u < left && v >= left && v < file.vertices {
                            Ok((u, v - left))
                        } else {
                            Err(Error::invalid(
                                "bipartite edges",
                                format!("edge ({u}, {v}) must go from L = 0..{left} to R = {left}..{}", file.vertices),
                            ))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                let k = require_k(kind, file.k, left)?;
                (
                    Problem::Pmc {
                        left,
                        right,
                        edges,
                        k,
                    },
                    edge_weights()?,
                )
            }
            ProblemKind::Oim => {
                let k = require_k(kind, file.k, file.vertices)?;
                (
                    Problem::Oim {
                        vertices: file.vertices,
                        edges: pairs,
                        k,
                    },
                    edge_weights()?,
                )
            }
            ProblemKind::KCenter => {
                let metric = Metric::new(file.vertices, pairs)?;
                let k = require_k(kind, file.k, file.vertices)?;
                (Problem::KCenter { metric, k }, edge_weights()?)
            }
            ProblemKind::Tsp => {
                let metric = Metric::new(file.vertices, pairs)?;
                (Problem::Tsp { metric }, edge_weights()?)
            }
            ProblemKind::MaxCut => (
                Problem::MaxCut {
                    vertices: file.vertices,
                    edges: pairs,
                },
                edge_weights()?,
            ),
            ProblemKind::VertexCover => {
                let means = file.means.clone().ok_or_else(|| {
                    Error::invalid("fields", "vertex_cover requires per-vertex `means`")
                })?;
                (
                    Problem::VertexCover {
                        vertices: file.vertices,
                        edges: pairs,
                    },
                    means,
                )
            }
        };
        let smoothness = file.b.map(SmoothnessCert::new).transpose()?;
        ProblemInstance::new(
            problem,
            MeanVector(means),
            file.alpha,
            smoothness,
            file.outcome_domain,
            file.outcome_law,
        )
    }

    pub fn to_file(&self) -> InstanceFile {
        let mu = self.means.as_slice();
        let weighted = |edges: &[(usize, usize)], offset: usize| {
            edges
                .iter()
                .zip(mu)
                .map(|(&(u, v), &w)| EdgeSpec::Weighted(u, v + offset, w))
                .collect::<Vec<_>>()
        };
        let (vertices, left, edges, means) = match &self.problem {
            Problem::Pmc {
                left, right, edges, ..
            } => (left + right, Some(*left), weighted(edges, *left), None),
            Problem::Oim { vertices, edges, .. } | Problem::MaxCut { vertices, edges } => {
                (*vertices, None, weighted(edges, 0), None)
            }
            Problem::KCenter { metric, .. } | Problem::Tsp { metric } => {
                (metric.vertices(), None, weighted(metric.edges(), 0), None)
            }
            Problem::VertexCover { vertices, edges } => (
                *vertices,
                None,
                edges.iter().map(|&(u, v)| EdgeSpec::Plain(u, v)).collect(),
                Some(mu.to_vec()),
            ),
        };
        InstanceFile {
            kind: self.kind(),
            vertices,
            left,
            edges,
            means,
            k: self.problem.k(),
            alpha: Some(self.alpha),
            b: Some(self.smoothness.weights().to_vec()),
            outcome_domain: self.domain,
            outcome_law: Some(self.law),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        ProblemInstance::from_file(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        ProblemInstance::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serializes")
    }

    /// Short stable identifier of the instance contents.
    pub fn fingerprint(&self) -> String {
        // FNV-1a over the canonical JSON
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in serde_json::to_string(&self.to_file())
            .expect("instance serializes")
            .bytes()
        {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{}-{h:016x}", self.kind())
    }
}

fn check_probabilities(means: &MeanVector) -> Result<()> {
    if let Some((i, m)) = means
        .as_slice()
        .iter()
        .enumerate()
        .find(|(_, m)| !(0.0..=1.0).contains(*m))
    {
        return Err(Error::invalid(
            "edge probabilities in [0,1]",
            format!("arm {i} has mean {m}"),
        ));
    }
    Ok(())
}

/// Smoothness constants each problem satisfies with its own reward:
/// all ones, except OIM which uses the largest number of vertices any single
/// vertex reaches through edges of positive probability.
pub fn natural_smoothness(problem: &Problem, means: &MeanVector) -> SmoothnessCert {
    let n = problem.n_arms();
    match problem {
        Problem::Oim {
            vertices, edges, ..
        } => {
            let reach = cascade::max_reach(*vertices, edges, means.as_slice());
            SmoothnessCert::uniform(n, reach as f64)
        }
        _ => SmoothnessCert::uniform(n, 1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PMC: &str = r#"{
        "kind": "pmc", "vertices": 3, "left": 2,
        "edges": [[0, 2, 0.9], [1, 2, 0.1]],
        "k": 1, "outcome_domain": [0, 1]
    }"#;

    #[test]
    fn parse_pmc_defaults() {
        let inst = ProblemInstance::parse(PMC).unwrap();
        assert_eq!(inst.kind(), ProblemKind::Pmc);
        assert_eq!(inst.n_arms(), 2);
        assert_eq!(inst.smoothness().weights(), &[1.0, 1.0]);
        assert!((inst.alpha() - (1.0 - (-1f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn unknown_field_rejected() {
        let text = PMC.replace("\"k\": 1", "\"k\": 1, \"colour\": 3");
        assert!(matches!(ProblemInstance::parse(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn roundtrip_through_json() {
        let inst = ProblemInstance::parse(PMC).unwrap();
        let back = ProblemInstance::parse(&inst.to_json()).unwrap();
        assert_eq!(inst, back);
    }

    #[test]
    fn triangle_violation_rejected_with_name() {
        let text = r#"{"kind": "tsp", "vertices": 3,
            "edges": [[0,1,0.1],[0,2,0.9],[1,2,0.1]], "outcome_domain": [0, 1]}"#;
        let err = ProblemInstance::parse(text).unwrap_err();
        assert!(err.to_string().contains("triangle inequality"), "{err}");
    }

    #[test]
    fn alpha_out_of_range_rejected() {
        let text = PMC.replace("\"k\": 1", "\"k\": 1, \"alpha\": 1.5");
        assert!(ProblemInstance::parse(&text).is_err());
    }

    #[test]
    fn wrong_b_length_rejected() {
        let text = PMC.replace("\"k\": 1", "\"k\": 1, \"B\": [1]");
        assert!(matches!(
            ProblemInstance::parse(&text),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn oim_default_b_is_max_reach() {
        let text = r#"{"kind": "oim", "vertices": 3,
            "edges": [[0,1,0.5],[1,2,0.5]], "k": 1, "outcome_domain": [0, 1]}"#;
        let inst = ProblemInstance::parse(text).unwrap();
        assert_eq!(inst.smoothness().weights(), &[3.0, 3.0]);
    }

    #[test]
    fn oim_zero_probability_is_accepted() {
        let text = r#"{"kind": "oim", "vertices": 2,
            "edges": [[0,1,0.0]], "k": 1, "outcome_domain": [0, 1]}"#;
        assert!(ProblemInstance::parse(text).is_ok());
    }
}
