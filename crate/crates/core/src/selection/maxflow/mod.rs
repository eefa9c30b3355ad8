//! Exact maximum flow / minimum s-t cut on integer capacities.
//!
//! Problems are given in terminal form: every non-terminal node carries a
//! capacity from the source and to the sink, plus undirected node pairs with
//! one capacity per direction. Both solvers return the *minimal* source side
//! of a minimum cut, i.e. the nodes reachable from the source in the final
//! residual graph.

mod bk;
mod dinic;

use serde::{Deserialize, Serialize};

pub type Capacity = i128;

/// Max-flow algorithm used to find the minimum cut.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    /// Boykov-Kolmogorov search trees; fast on sparse graphs.
    #[default]
    BoykovKolmogorov,
    /// Dinic blocking flows; strongly polynomial.
    Dinic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairArc {
    pub a: usize,
    pub b: usize,
    /// Capacity a -> b.
    pub forward: Capacity,
    /// Capacity b -> a.
    pub backward: Capacity,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FlowProblem {
    /// Capacity source -> v.
    pub source: Vec<Capacity>,
    /// Capacity v -> sink.
    pub sink: Vec<Capacity>,
    pub arcs: Vec<PairArc>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCut {
    pub flow: Capacity,
    /// `true` for non-terminal nodes on the (minimal) source side.
    pub source_side: Vec<bool>,
}

impl FlowProblem {
    pub fn n_nodes(&self) -> usize {
        self.source.len()
    }

    /// Capacity of the cut separating `{s} ∪ side` from the rest.
    pub fn cut_capacity(&self, side: &[bool]) -> Capacity {
        let terminal: Capacity = (0..self.n_nodes())
            .map(|v| {
                if side[v] {
                    self.sink[v]
                } else {
                    self.source[v]
                }
            })
            .sum();
        let pairs: Capacity = self
            .arcs
            .iter()
            .map(|e| match (side[e.a], side[e.b]) {
                (true, false) => e.forward,
                (false, true) => e.backward,
                _ => 0,
            })
            .sum();
        terminal + pairs
    }

    pub fn solve(&self, solver: Solver) -> MinCut {
        debug_assert_eq!(self.source.len(), self.sink.len());
        let cut = match solver {
            Solver::BoykovKolmogorov => bk::solve(self),
            Solver::Dinic => dinic::solve(self),
        };
        // Max-flow/min-cut certificate.
        assert_eq!(
            cut.flow,
            self.cut_capacity(&cut.source_side),
            "flow value differs from the capacity of the extracted cut"
        );
        cut
    }
}

/// Compressed adjacency over the pair arcs: arc `2k` is `a -> b` of pair
/// `k`, arc `2k + 1` its reverse.
pub(crate) struct Residual {
    pub head: Vec<usize>,
    pub r_cap: Vec<Capacity>,
    pub first: Vec<usize>,
    pub adj: Vec<usize>,
}

impl Residual {
    pub(crate) fn new(n: usize, arcs: &[PairArc]) -> Self {
        let mut head = Vec::with_capacity(2 * arcs.len());
        let mut r_cap = Vec::with_capacity(2 * arcs.len());
        let mut count = vec![0usize; n + 1];
        for e in arcs {
            head.push(e.b);
            r_cap.push(e.forward);
            head.push(e.a);
            r_cap.push(e.backward);
            count[e.a] += 1;
            count[e.b] += 1;
        }
        let mut first = vec![0usize; n + 1];
        for v in 0..n {
            first[v + 1] = first[v] + count[v];
        }
        let mut fill = first.clone();
        let mut adj = vec![0usize; 2 * arcs.len()];
        for (k, e) in arcs.iter().enumerate() {
            adj[fill[e.a]] = 2 * k;
            fill[e.a] += 1;
            adj[fill[e.b]] = 2 * k + 1;
            fill[e.b] += 1;
        }
        Residual {
            head,
            r_cap,
            first,
            adj,
        }
    }

    #[inline]
    pub(crate) fn arcs_of(&self, v: usize) -> &[usize] {
        &self.adj[self.first[v]..self.first[v + 1]]
    }

    /// Nodes reachable from `roots` along arcs with positive residual capacity.
    pub(crate) fn reachable(&self, roots: impl Iterator<Item = usize>) -> Vec<bool> {
        let n = self.first.len() - 1;
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        for r in roots {
            if !seen[r] {
                seen[r] = true;
                stack.push(r);
            }
        }
        while let Some(v) = stack.pop() {
            for &a in self.arcs_of(v) {
                let w = self.head[a];
                if !seen[w] && self.r_cap[a] > 0 {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

#[inline]
pub(crate) fn sister(arc: usize) -> usize {
    arc ^ 1
}
