use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::SnpNetwork;
use crate::datamodel::{GeneAnnotation, GeneInteractionList, SnpMap};
use crate::{Error, Result};

/// Which network to build. Gene-based kinds carry the proximity window in
/// base pairs: a SNP is near a gene when it lies in `[start - window, end + window]`
/// on the gene's chromosome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NetworkKind {
    Gs,
    Gm { window: u64 },
    Gi { window: u64 },
}

impl NetworkKind {
    pub fn label(&self) -> &'static str {
        match self {
            NetworkKind::Gs => "GS",
            NetworkKind::Gm { .. } => "GM",
            NetworkKind::Gi { .. } => "GI",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BuildReport {
    /// SNPs sharing (chromosome, position) with their predecessor; ordered by id.
    pub duplicate_positions: usize,
    /// Interactions naming a gene absent from the annotation.
    pub skipped_interactions: usize,
    pub genes_without_snps: usize,
}

fn gs_pairs(map: &SnpMap, report: &mut BuildReport) -> Vec<(usize, usize)> {
    let records = map.records();
    let mut pairs = Vec::with_capacity(records.len());
    for i in 1..records.len() {
        let (prev, cur) = (&records[i - 1], &records[i]);
        if prev.chrom == cur.chrom {
            if prev.pos == cur.pos {
                report.duplicate_positions += 1;
            }
            pairs.push((i - 1, i));
        }
    }
    if report.duplicate_positions > 0 {
        log::warn!(
            "{} SNPs share a position with a neighbour; ordered by SNP id",
            report.duplicate_positions
        );
    }
    pairs
}

fn gene_ranges(
    map: &SnpMap,
    genes: &GeneAnnotation,
    window: u64,
    report: &mut BuildReport,
) -> Vec<Range<usize>> {
    let ranges: Vec<Range<usize>> = genes
        .genes()
        .iter()
        .map(|g| genes.nearby_snps(g, map, window))
        .collect();
    report.genes_without_snps = ranges.iter().filter(|r| r.is_empty()).count();
    ranges
}

fn push_clique(pairs: &mut Vec<(usize, usize)>, r: &Range<usize>) {
    for p in r.clone() {
        for q in p + 1..r.end {
            pairs.push((p, q));
        }
    }
}

fn push_bipartite(pairs: &mut Vec<(usize, usize)>, x: &Range<usize>, y: &Range<usize>) {
    for p in x.clone() {
        for q in y.clone() {
            if p != q {
                pairs.push((p.min(q), p.max(q)));
            }
        }
    }
}

fn finish(map: &SnpMap, mut pairs: Vec<(usize, usize)>) -> SnpNetwork {
    pairs.sort_unstable();
    pairs.dedup();
    SnpNetwork::from_canonical_pairs(map.snp_ids(), pairs)
}

/// Sequence network: consecutive SNPs of each chromosome are linked.
pub fn build_gs(map: &SnpMap) -> (SnpNetwork, BuildReport) {
    let mut report = BuildReport::default();
    let pairs = gs_pairs(map, &mut report);
    (finish(map, pairs), report)
}

/// Gene-membership network: the sequence network plus a clique over the
/// SNPs near each gene.
pub fn build_gm(map: &SnpMap, genes: &GeneAnnotation, window: u64) -> (SnpNetwork, BuildReport) {
    let mut report = BuildReport::default();
    let mut pairs = gs_pairs(map, &mut report);
    for r in gene_ranges(map, genes, window, &mut report) {
        push_clique(&mut pairs, &r);
    }
    (finish(map, pairs), report)
}

/// Gene-interaction network: the gene-membership network plus all links
/// between SNPs near two interacting genes.
pub fn build_gi(
    map: &SnpMap,
    genes: &GeneAnnotation,
    interactions: &GeneInteractionList,
    window: u64,
) -> (SnpNetwork, BuildReport) {
    let mut report = BuildReport::default();
    let mut pairs = gs_pairs(map, &mut report);
    let ranges = gene_ranges(map, genes, window, &mut report);
    for r in &ranges {
        push_clique(&mut pairs, r);
    }
    for (a, b) in interactions.pairs() {
        match (genes.index_of(a), genes.index_of(b)) {
            (Some(i), Some(j)) => push_bipartite(&mut pairs, &ranges[i], &ranges[j]),
            _ => report.skipped_interactions += 1,
        }
    }
    if report.skipped_interactions > 0 {
        log::warn!(
            "skipped {} interactions referencing unannotated genes",
            report.skipped_interactions
        );
    }
    (finish(map, pairs), report)
}

/// Builds the network of the requested kind, checking that its inputs were supplied.
pub fn build_network(
    kind: NetworkKind,
    map: &SnpMap,
    genes: Option<&GeneAnnotation>,
    interactions: Option<&GeneInteractionList>,
) -> Result<(SnpNetwork, BuildReport)> {
    match kind {
        NetworkKind::Gs => Ok(build_gs(map)),
        NetworkKind::Gm { window } => {
            let genes =
                genes.ok_or_else(|| Error::invalid("GM network requires a gene annotation"))?;
            Ok(build_gm(map, genes, window))
        }
        NetworkKind::Gi { window } => {
            let genes =
                genes.ok_or_else(|| Error::invalid("GI network requires a gene annotation"))?;
            let interactions = interactions
                .ok_or_else(|| Error::invalid("GI network requires an interaction list"))?;
            Ok(build_gi(map, genes, interactions, window))
        }
    }
}
