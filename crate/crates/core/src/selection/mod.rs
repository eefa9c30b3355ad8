//! Exact network-regularized selection.
//!
//! For scores `c`, network weights `W` and parameters `(lambda, eta)` the
//! selector returns
//!
//! ```text
//! argmax_{f in {0,1}^n}  c'f - lambda * f'Lf - eta * |f|
//! ```
//!
//! by computing a minimum s/t cut of the [`AugmentedGraph`]. Capacities are
//! converted to 128-bit fixed point before the flow computation so the cut is
//! exact; the objective is always re-evaluated in floating point from the
//! original inputs. Among several optimal selections the smallest one (the
//! residual-reachable source side) is returned.

mod augmented;
pub mod maxflow;

pub use augmented::{build_augmented_graph, AugmentedGraph, RegularizationParams};
pub use maxflow::Solver;

use serde::Serialize;

use crate::netbuild::SnpNetwork;
use crate::{Error, Result};
use augmented::fixed_point_exponent;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionResult {
    /// Selected node indices, ascending.
    pub selected: Vec<usize>,
    pub objective: f64,
    /// Minimum cut capacity, in score units.
    pub cut_value: f64,
    /// Offset between the cut and the objective: objective = -(cut_value + constant).
    pub constant: f64,
    pub params: RegularizationParams,
}

impl SelectionResult {
    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut f = vec![false; n];
        for &p in &self.selected {
            f[p] = true;
        }
        f
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }
}

/// Objective value of an indicator vector.
pub fn objective(
    scores: &[f64],
    net: &SnpNetwork,
    params: RegularizationParams,
    selected: &[bool],
) -> f64 {
    let (gain, count) = scores
        .iter()
        .zip(selected)
        .filter(|(_, &s)| s)
        .fold((0.0, 0usize), |(g, k), (c, _)| (g + c, k + 1));
    gain - params.lambda * net.boundary_weight(selected) - params.eta * count as f64
}

/// Returns the exact maximizer of the regularized objective, minimal under ties.
pub fn select(
    scores: &[f64],
    net: &SnpNetwork,
    params: RegularizationParams,
) -> Result<SelectionResult> {
    select_with(scores, net, params, Solver::default())
}

pub fn select_with(
    scores: &[f64],
    net: &SnpNetwork,
    params: RegularizationParams,
    solver: Solver,
) -> Result<SelectionResult> {
    let graph = build_augmented_graph(scores, net, params)?;
    let exponent = fixed_point_exponent(graph.total_capacity());
    Ok(solve_graph(&graph, exponent, scores, net, params, solver))
}

fn solve_graph(
    graph: &AugmentedGraph,
    exponent: i32,
    scores: &[f64],
    net: &SnpNetwork,
    params: RegularizationParams,
    solver: Solver,
) -> SelectionResult {
    let cut = graph.quantize(exponent).solve(solver);
    let selected: Vec<usize> = cut
        .source_side
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(p, _)| p)
        .collect();
    let cut_value = cut.flow as f64 / 2f64.powi(exponent);
    let obj = objective(scores, net, params, &cut.source_side);

    let magnitude = 1.0 + graph.total_capacity() + graph.constant.abs();
    assert!(
        (obj + cut_value + graph.constant).abs() <= 1e-9 * magnitude,
        "cut identity violated: objective {obj}, cut {cut_value}, constant {}",
        graph.constant
    );
    SelectionResult {
        selected,
        objective: obj,
        cut_value,
        constant: graph.constant,
        params,
    }
}

/// Solves for each `eta` (ascending) at fixed `lambda`.
///
/// All problems share one fixed-point scale, so the returned minimal
/// selections are nested: later (larger) `eta` never selects a node an
/// earlier one left out.
pub fn parametric_sweep(
    scores: &[f64],
    net: &SnpNetwork,
    lambda: f64,
    etas: &[f64],
    solver: Solver,
) -> Result<Vec<SelectionResult>> {
    if etas.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::invalid("eta values must be sorted ascending"));
    }
    let graphs = etas
        .iter()
        .map(|&eta| {
            let params = RegularizationParams::new(lambda, eta)?;
            Ok((params, build_augmented_graph(scores, net, params)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let total = graphs
        .iter()
        .map(|(_, g)| g.total_capacity())
        .fold(0.0, f64::max);
    let exponent = fixed_point_exponent(total);
    Ok(graphs
        .iter()
        .map(|(params, g)| solve_graph(g, exponent, scores, net, *params, solver))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netbuild::Edge;

    fn path3() -> SnpNetwork {
        SnpNetwork::new(
            vec!["1".into(), "2".into(), "3".into()],
            [
                Edge {
                    a: 0,
                    b: 1,
                    weight: 1.0,
                },
                Edge {
                    a: 1,
                    b: 2,
                    weight: 1.0,
                },
            ],
        )
        .unwrap()
    }

    fn params(lambda: f64, eta: f64) -> RegularizationParams {
        RegularizationParams::new(lambda, eta).unwrap()
    }

    #[test]
    fn zero_lambda_thresholds_scores() {
        let net = SnpNetwork::new(
            vec!["1".into(), "2".into()],
            [Edge {
                a: 0,
                b: 1,
                weight: 1.0,
            }],
        )
        .unwrap();
        let r = select(&[3.0, 1.0], &net, params(0.0, 2.0)).unwrap();
        assert_eq!(r.selected, [0]);
        assert_eq!(r.objective, 1.0);
    }

    #[test]
    fn path_instance_selects_everything() {
        // Oracle by enumeration: {1,2,3} scores 3, runner-up {1,3} scores 2.
        for solver in [Solver::BoykovKolmogorov, Solver::Dinic] {
            let r = select_with(&[3.0, 0.0, 3.0], &path3(), params(1.0, 1.0), solver).unwrap();
            assert_eq!(r.selected, [0, 1, 2]);
            assert_eq!(r.objective, 3.0);
            assert_eq!(r.cut_value, 1.0);
            assert_eq!(r.constant, -4.0);
        }
    }

    #[test]
    fn all_scores_below_eta_select_nothing() {
        let r = select(&[0.5, 0.2, 0.9], &path3(), params(2.0, 1.0)).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.objective, 0.0);
    }

    #[test]
    fn ties_resolve_to_minimal_selection() {
        // Empty, {1} and {1,2} all score 0 here.
        let net = SnpNetwork::new(
            vec!["1".into(), "2".into()],
            [Edge {
                a: 0,
                b: 1,
                weight: 1.0,
            }],
        )
        .unwrap();
        let r = select(&[3.0, 1.0], &net, params(1.0, 2.0)).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.objective, 0.0);
    }

    #[test]
    fn sweep_examples() {
        let net = path3();
        let c = [3.0, 0.0, 3.0];
        let same = parametric_sweep(&c, &net, 1.0, &[1.0, 1.0], Solver::default()).unwrap();
        assert_eq!(same[0], same[1]);
        let r = parametric_sweep(&c, &net, 1.0, &[0.0, 10.0], Solver::default()).unwrap();
        assert_eq!(r[0].selected, [0, 1, 2]);
        assert!(r[1].is_empty());
        assert!(parametric_sweep(&c, &net, 1.0, &[2.0, 1.0], Solver::default()).is_err());
    }

    #[test]
    fn all_zero_capacities() {
        let r = select(&[1.0, 1.0, 1.0], &path3(), params(0.0, 1.0)).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.cut_value, 0.0);
    }
}
