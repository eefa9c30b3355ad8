use serde::{Deserialize, Serialize};

use super::maxflow::{FlowProblem, PairArc};
use crate::netbuild::SnpNetwork;
use crate::{Error, Result};

/// Connectivity weight `lambda` and sparsity weight `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizationParams {
    pub lambda: f64,
    pub eta: f64,
}

impl RegularizationParams {
    pub fn new(lambda: f64, eta: f64) -> Result<Self> {
        let p = RegularizationParams { lambda, eta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("lambda", self.lambda), ("eta", self.eta)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// The s/t graph whose minimum cuts are the optimal selections.
///
/// Node `p` is tied to the source with capacity `c_p - eta` when `c_p > eta`,
/// to the sink with `eta - c_p` when `c_p < eta`, and to neither on equality.
/// Every network edge becomes a pair of arcs of capacity `lambda * w`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedGraph {
    pub source: Vec<f64>,
    pub sink: Vec<f64>,
    pub pairs: Vec<(usize, usize, f64)>,
    /// Sum over `c_p >= eta` of `eta - c_p`; cut(f) + constant is the
    /// minimization form of the objective.
    pub constant: f64,
}

pub fn build_augmented_graph(
    scores: &[f64],
    net: &SnpNetwork,
    params: RegularizationParams,
) -> Result<AugmentedGraph> {
    params.validate()?;
    if scores.len() != net.n_nodes() {
        return Err(Error::LengthMismatch {
            expected: net.n_nodes(),
            actual: scores.len(),
        });
    }
    if let Some(c) = scores.iter().find(|c| !c.is_finite()) {
        return Err(Error::invalid(format!("non-finite association score {c}")));
    }
    let eta = params.eta;
    let source = scores
        .iter()
        .map(|&c| if c > eta { c - eta } else { 0.0 })
        .collect();
    let sink = scores
        .iter()
        .map(|&c| if c < eta { eta - c } else { 0.0 })
        .collect();
    let constant = scores.iter().filter(|&&c| c >= eta).map(|&c| eta - c).sum();
    let pairs = net
        .edges()
        .iter()
        .map(|e| (e.a, e.b, params.lambda * e.weight))
        .collect();
    Ok(AugmentedGraph {
        source,
        sink,
        pairs,
        constant,
    })
}

impl AugmentedGraph {
    pub fn n_nodes(&self) -> usize {
        self.source.len()
    }

    /// Undirected network edges plus terminal edges.
    pub fn edge_count(&self) -> usize {
        let terminal = self
            .source
            .iter()
            .zip(&self.sink)
            .filter(|(s, t)| **s > 0.0 || **t > 0.0)
            .count();
        self.pairs.len() + terminal
    }

    /// Sum of all capacities, counting both directions of network edges.
    pub(crate) fn total_capacity(&self) -> f64 {
        self.source.iter().sum::<f64>()
            + self.sink.iter().sum::<f64>()
            + 2.0 * self.pairs.iter().map(|p| p.2).sum::<f64>()
    }

    /// Cut capacity of a selection, in floating point.
    pub fn cut_value(&self, selected: &[bool]) -> f64 {
        let terminal: f64 = (0..self.n_nodes())
            .map(|v| {
                if selected[v] {
                    self.sink[v]
                } else {
                    self.source[v]
                }
            })
            .sum();
        let pairs: f64 = self
            .pairs
            .iter()
            .filter(|(a, b, _)| selected[*a] != selected[*b])
            .map(|p| p.2)
            .sum();
        terminal + pairs
    }

    /// Fixed-point image with every capacity multiplied by `2^exponent` and rounded.
    pub(crate) fn quantize(&self, exponent: i32) -> FlowProblem {
        let scale = 2f64.powi(exponent);
        let q = |x: f64| (x * scale).round() as i128;
        FlowProblem {
            source: self.source.iter().map(|&x| q(x)).collect(),
            sink: self.sink.iter().map(|&x| q(x)).collect(),
            arcs: self
                .pairs
                .iter()
                .map(|&(a, b, w)| {
                    let c = q(w);
                    PairArc {
                        a,
                        b,
                        forward: c,
                        backward: c,
                    }
                })
                .collect(),
        }
    }
}

/// Power-of-two exponent mapping a capacity total onto about 2^100, leaving
/// 27 bits of i128 headroom. Power-of-two scaling keeps x * 2^e exact in f64.
pub(crate) fn fixed_point_exponent(total: f64) -> i32 {
    if !(total > 0.0) {
        return 0;
    }
    (100 - total.log2().ceil() as i32).clamp(-900, 900)
}
