use super::{DecompositionTrace, SubAction, SubProblem, Weight};
use crate::error::{Error, Result};
use crate::model::{Action, MeanVector, Metric, Problem, ProblemInstance};

/// `max_v min_{a∈A} d(v, a)`.
pub fn kcenter_cost(metric: &Metric, mu: &[f64], centers: &[usize]) -> f64 {
    (0..metric.vertices())
        .map(|v| {
            centers
                .iter()
                .map(|&a| metric.dist(mu, v, a))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// `d(v, S)`; infinite for an empty `S`.
pub fn dist_to_set(metric: &Metric, mu: &[f64], v: usize, set: &[usize]) -> f64 {
    set.iter()
        .map(|&a| metric.dist(mu, v, a))
        .fold(f64::INFINITY, f64::min)
}

/// Farthest-first traversal. The first center is vertex 0; each later center
/// is the vertex farthest from those already chosen (smallest id on ties).
/// Sub-reward `j` is the distance of the `j`-th center to its predecessors.
pub fn kcenter_greedy(
    instance: &ProblemInstance,
    mu: &MeanVector,
) -> Result<(Action, DecompositionTrace)> {
    let Problem::KCenter { metric, k } = instance.problem() else {
        return Err(Error::Config("kcenter_greedy needs a k-center instance".into()));
    };
    mu.ensure_len(metric.edges().len())?;
    let n = metric.vertices();
    if *k > n {
        return Err(Error::BudgetTooLarge { k: *k, size: n });
    }
    let mu = mu.as_slice();
    let mut order = vec![0usize];
    let mut values = vec![0.0];
    while order.len() < *k {
        let mut best: Option<(usize, f64)> = None;
        for v in (0..n).filter(|v| !order.contains(v)) {
            let d = dist_to_set(metric, mu, v, &order);
            if best.is_none_or(|(_, b)| d > b) {
                best = Some((v, d));
            }
        }
        let (v, d) = best.expect("k <= |V| leaves a candidate");
        order.push(v);
        values.push(d);
    }
    let subproblems = (0..order.len())
        .map(|j| SubProblem {
            sub_action: SubAction::Prefix(order[..=j].to_vec()),
            value: values[j],
            weight: Weight::Fixed(0.5),
        })
        .collect();
    let mut set = order;
    set.sort_unstable();
    let action = Action::VertexSet(set);
    Ok((
        action.clone(),
        DecompositionTrace {
            subproblems,
            final_action: action,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Interval;

    fn line_instance(points: &[f64], k: usize) -> ProblemInstance {
        let metric = Metric::complete(points.len());
        let mu = metric
            .edges()
            .iter()
            .map(|&(u, v)| (points[u] - points[v]).abs())
            .collect();
        ProblemInstance::new(
            Problem::KCenter { metric, k },
            MeanVector(mu),
            None,
            None,
            Interval::new(0.0, 20.0),
            None,
        )
        .unwrap()
    }

    #[test]
    fn line_points() {
        let inst = line_instance(&[0.0, 1.0, 10.0], 2);
        let (a, trace) = kcenter_greedy(&inst, inst.means()).unwrap();
        assert_eq!(a, Action::VertexSet(vec![0, 2]));
        let Problem::KCenter { metric, .. } = inst.problem() else { unreachable!() };
        assert_eq!(kcenter_cost(metric, inst.means().as_slice(), &[0, 2]), 1.0);
        assert_eq!(trace.subproblems[1].value, 10.0);
    }

    #[test]
    fn all_vertices_give_zero_cost() {
        let inst = line_instance(&[0.0, 3.0, 4.0, 9.0], 4);
        let (a, _) = kcenter_greedy(&inst, inst.means()).unwrap();
        let Problem::KCenter { metric, .. } = inst.problem() else { unreachable!() };
        let Action::VertexSet(set) = a else { unreachable!() };
        assert_eq!(kcenter_cost(metric, inst.means().as_slice(), &set), 0.0);
    }
}
