use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

use rand::seq::index::sample;
use serde::Serialize;

use crate::numfmt::fmt_num;
use crate::rng;
use crate::tsv::{expect_arity, parse_f64, TsvLines};
use crate::{Error, Result};

/// Undirected weighted edge with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// Sparse undirected network over SNPs, stored as a canonical edge list
/// (each edge once, sorted by endpoints) plus a weighted-degree cache.
#[derive(Debug, Clone, PartialEq)]
pub struct SnpNetwork {
    snp_ids: Vec<String>,
    edges: Vec<Edge>,
    degree: Vec<f64>,
}

impl SnpNetwork {
    /// Validates and canonicalizes an edge list. Endpoints may come in either
    /// order; self-loops, non-positive or non-finite weights and repeated
    /// edges are rejected.
    pub fn new(snp_ids: Vec<String>, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let n = snp_ids.len();
        let mut canon: Vec<Edge> = Vec::new();
        for e in edges {
            if e.a >= n || e.b >= n {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) out of range for {n} nodes",
                    e.a, e.b
                )));
            }
            if e.a == e.b {
                return Err(Error::invalid(format!("self-loop on node {}", e.a)));
            }
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) has invalid weight {}",
                    e.a, e.b, e.weight
                )));
            }
            canon.push(Edge {
                a: e.a.min(e.b),
                b: e.a.max(e.b),
                weight: e.weight,
            });
        }
        canon.sort_by_key(|e| (e.a, e.b));
        if let Some(w) = canon
            .windows(2)
            .find(|w| (w[0].a, w[0].b) == (w[1].a, w[1].b))
        {
            return Err(Error::invalid(format!(
                "edge ({}, {}) listed more than once",
                w[0].a, w[0].b
            )));
        }
        Ok(Self::from_canonical(snp_ids, canon))
    }

    /// Unweighted network from unique sorted `(a, b)` pairs with `a < b`.
    pub(crate) fn from_canonical_pairs(
        snp_ids: Vec<String>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let edges = pairs
            .into_iter()
            .map(|(a, b)| Edge { a, b, weight: 1.0 })
            .collect();
        Self::from_canonical(snp_ids, edges)
    }

    fn from_canonical(snp_ids: Vec<String>, edges: Vec<Edge>) -> Self {
        let mut degree = vec![0.0; snp_ids.len()];
        for e in &edges {
            degree[e.a] += e.weight;
            degree[e.b] += e.weight;
        }
        SnpNetwork {
            snp_ids,
            edges,
            degree,
        }
    }

    /// Network with no edges.
    pub fn empty(snp_ids: Vec<String>) -> Self {
        Self::from_canonical(snp_ids, Vec::new())
    }

    pub fn n_nodes(&self) -> usize {
        self.snp_ids.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn snp_ids(&self) -> &[String] {
        &self.snp_ids
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Weighted degree, the diagonal of D.
    pub fn degree(&self, node: usize) -> f64 {
        self.degree[node]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges
            .binary_search_by_key(&key, |e| (e.a, e.b))
            .is_ok()
    }

    /// f'Lf as the edge sum of w_pq (f_p - f_q)^2; L is never materialized.
    pub fn laplacian_quadratic(&self, f: &[f64]) -> Result<f64> {
        if f.len() != self.n_nodes() {
            return Err(Error::LengthMismatch {
                expected: self.n_nodes(),
                actual: f.len(),
            });
        }
        Ok(self
            .edges
            .iter()
            .map(|e| {
                let d = f[e.a] - f[e.b];
                e.weight * d * d
            })
            .sum())
    }

    /// Total weight of edges with exactly one endpoint selected; equals f'Lf
    /// for a 0/1 indicator.
    pub fn boundary_weight(&self, selected: &[bool]) -> f64 {
        self.edges
            .iter()
            .filter(|e| selected[e.a] != selected[e.b])
            .map(|e| e.weight)
            .sum()
    }

    /// Deletes floor(fraction * |E|) edges sampled uniformly without replacement.
    pub fn remove_edges(&self, fraction: f64, seed: u64) -> Result<SnpNetwork> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::invalid(format!(
                "edge-removal fraction must lie in [0, 1], got {fraction}"
            )));
        }
        let total = self.n_edges();
        let count = ((fraction * total as f64) + 1e-9).floor() as usize;
        let count = count.min(total);
        let mut rng = rng::stream(seed, "remove-edges", 0);
        let mut drop = vec![false; total];
        for i in sample(&mut rng, total, count) {
            drop[i] = true;
        }
        let edges = self
            .edges
            .iter()
            .zip(&drop)
            .filter(|(_, &d)| !d)
            .map(|(e, _)| *e)
            .collect();
        Ok(Self::from_canonical(self.snp_ids.clone(), edges))
    }

    /// Subnetwork induced by `keep` (indices into this network), relabelled
    /// to positions in `keep`.
    pub fn induced_subgraph(&self, keep: &[usize]) -> SnpNetwork {
        let mut new_index = vec![usize::MAX; self.n_nodes()];
        for (i, &k) in keep.iter().enumerate() {
            new_index[k] = i;
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| new_index[e.a] != usize::MAX && new_index[e.b] != usize::MAX)
            .map(|e| {
                let (a, b) = (new_index[e.a], new_index[e.b]);
                Edge {
                    a: a.min(b),
                    b: a.max(b),
                    weight: e.weight,
                }
            })
            .collect();
        edges.sort_by_key(|e| (e.a, e.b));
        Self::from_canonical(
            keep.iter().map(|&k| self.snp_ids[k].clone()).collect(),
            edges,
        )
    }

    /// Connected components as a label per node (labels in order of first node).
    pub fn components(&self) -> Vec<usize> {
        let n = self.n_nodes();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = Vec::with_capacity(n);
        for v in 0..n {
            let r = find(&mut parent, v);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            out.push(label[r]);
        }
        out
    }

    /// Writes `snp_id_a<TAB>snp_id_b<TAB>weight`, each edge once with the
    /// lexicographically smaller id first, rows sorted.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut rows: Vec<(&str, &str, f64)> = self
            .edges
            .iter()
            .map(|e| {
                let (x, y) = (self.snp_ids[e.a].as_str(), self.snp_ids[e.b].as_str());
                if x <= y {
                    (x, y, e.weight)
                } else {
                    (y, x, e.weight)
                }
            })
            .collect();
        rows.sort_by(|l, r| (l.0, l.1).cmp(&(r.0, r.1)));
        writeln!(out, "snp_id_a\tsnp_id_b\tweight")?;
        for (a, b, w) in rows {
            writeln!(out, "{a}\t{b}\t{}", fmt_num(w))?;
        }
        Ok(())
    }

    /// Reads an edge list over the node universe `snp_ids`; unknown ids are an error.
    pub fn read_tsv<R: BufRead>(reader: R, snp_ids: &[String]) -> Result<SnpNetwork> {
        let index: HashMap<&str, usize> = snp_ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut lines = TsvLines::new(reader, "network edge list");
        let mut edges = Vec::new();
        let mut first = true;
        while let Some((line, f)) = lines.next_record()? {
            expect_arity(lines.what(), line, &f, 3)?;
            if std::mem::take(&mut first) && f[0] == "snp_id_a" {
                continue;
            }
            let lookup = |id: &str| {
                index.get(id).copied().ok_or_else(|| {
                    Error::parse("network edge list", line, format!("unknown SNP id {id:?}"))
                })
            };
            let (a, b) = (lookup(&f[0])?, lookup(&f[1])?);
            let weight = parse_f64(lines.what(), line, &f[2])?;
            edges.push(Edge { a, b, weight });
        }
        SnpNetwork::new(snp_ids.to_vec(), edges)
    }

    pub fn load(path: &Path, snp_ids: &[String]) -> Result<SnpNetwork> {
        Self::read_tsv(crate::datamodel::open(path)?, snp_ids)
    }
}
