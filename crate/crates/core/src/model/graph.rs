use crate::error::{Error, Result};
use crate::model::TOLERANCE;

/// Complete undirected graph whose edges are arms, as used by k-center and TSP.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    n: usize,
    edges: Vec<(usize, usize)>,
    arm_of: Vec<usize>,
}

impl Metric {
    /// Builds the arm index for a complete graph; every unordered pair must
    /// appear exactly once in `edges`.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut arm_of = vec![usize::MAX; n * n];
        for (arm, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n || u == v {
                return Err(Error::invalid(
                    "complete graph",
                    format!("edge ({u}, {v}) is not a pair of distinct vertices below {n}"),
                ));
            }
            if arm_of[u * n + v] != usize::MAX {
                return Err(Error::invalid(
                    "complete graph",
                    format!("edge ({u}, {v}) listed twice"),
                ));
            }
            arm_of[u * n + v] = arm;
            arm_of[v * n + u] = arm;
        }
        let expected = n * n.saturating_sub(1) / 2;
        if edges.len() != expected {
            return Err(Error::invalid(
                "complete graph",
                format!("{} edges given, {expected} required for {n} vertices", edges.len()),
            ));
        }
        Ok(Metric { n, edges, arm_of })
    }

    /// Complete graph with edges listed in lexicographic pair order.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Metric::new(n, edges).expect("lexicographic pair list is complete")
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Arm id of the pair `{u, v}`; `u != v`.
    pub fn arm(&self, u: usize, v: usize) -> usize {
        self.arm_of[u * self.n + v]
    }

    pub fn dist(&self, mu: &[f64], u: usize, v: usize) -> f64 {
        if u == v {
            0.0
        } else {
            mu[self.arm(u, v)]
        }
    }

    /// Reports the first triple violating the triangle inequality beyond [`TOLERANCE`].
    pub fn check_triangle(&self, mu: &[f64]) -> Result<()> {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                for c in 0..n {
                    if c == a || c == b {
                        continue;
                    }
                    let direct = self.dist(mu, a, c);
                    let via = self.dist(mu, a, b) + self.dist(mu, b, c);
                    if direct > via + TOLERANCE {
                        return Err(Error::invalid(
                            "triangle inequality",
                            format!("d({a},{c}) = {direct} > d({a},{b}) + d({b},{c}) = {via}"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn tour_cost(&self, mu: &[f64], tour: &[usize]) -> f64 {
        if tour.len() < 2 {
            return 0.0;
        }
        tour.iter()
            .zip(tour.iter().cycle().skip(1))
            .map(|(&u, &v)| self.dist(mu, u, v))
            .sum()
    }

    pub fn tour_arms(&self, tour: &[usize]) -> Vec<usize> {
        if tour.len() < 2 {
            return Vec::new();
        }
        let mut arms: Vec<usize> = tour
            .iter()
            .zip(tour.iter().cycle().skip(1))
            .map(|(&u, &v)| self.arm(u, v))
            .collect();
        arms.sort_unstable();
        arms.dedup();
        arms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_indexing() {
        let m = Metric::complete(4);
        assert_eq!(m.edges().len(), 6);
        assert_eq!(m.arm(2, 1), m.arm(1, 2));
        assert_eq!(m.edges()[m.arm(3, 0)], (0, 3));
    }

    #[test]
    fn missing_edge_rejected() {
        assert!(Metric::new(3, vec![(0, 1), (1, 2)]).is_err());
        assert!(Metric::new(3, vec![(0, 1), (1, 2), (2, 1)]).is_err());
    }

    #[test]
    fn triangle_violation_named() {
        let m = Metric::complete(3);
        // d(0,1)=1, d(0,2)=5, d(1,2)=1
        let err = m.check_triangle(&[1.0, 5.0, 1.0]).unwrap_err();
        assert!(err.to_string().contains("triangle inequality"));
        m.check_triangle(&[1.0, 2.0, 1.0]).unwrap();
    }

    #[test]
    fn square_tour_cost() {
        let m = Metric::complete(4);
        let s = 2f64.sqrt();
        // corners 0=(0,0) 1=(1,0) 2=(1,1) 3=(0,1)
        let mut mu = vec![0.0; 6];
        mu[m.arm(0, 1)] = 1.0;
        mu[m.arm(1, 2)] = 1.0;
        mu[m.arm(2, 3)] = 1.0;
        mu[m.arm(3, 0)] = 1.0;
        mu[m.arm(0, 2)] = s;
        mu[m.arm(1, 3)] = s;
        assert_eq!(m.tour_cost(&mu, &[0, 1, 2, 3]), 4.0);
        assert_eq!(m.tour_arms(&[0, 1, 2, 3]).len(), 4);
    }
}
