use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::Serialize;

use crate::tsv::{expect_arity, nonempty_id, parse_u64, TsvLines};
use crate::{Error, Result};

/// Chromosome label with natural ordering: `2 < 10`, `chr2 == 2` in rank,
/// numeric labels before non-numeric ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chromosome(String);

impl Chromosome {
    pub fn new(label: impl Into<String>) -> Self {
        Chromosome(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn sort_key(&self) -> (u8, u64, &str) {
        let s = self.0.as_str();
        let bare = if s.len() > 3 && s[..3].eq_ignore_ascii_case("chr") {
            &s[3..]
        } else {
            s
        };
        match bare.parse::<u64>() {
            Ok(n) => (0, n, s),
            Err(_) => (1, 0, s),
        }
    }
}

impl Ord for Chromosome {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Chromosome {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnpRecord {
    pub snp_id: String,
    pub chrom: Chromosome,
    pub pos: u64,
}

impl SnpRecord {
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        (&self.chrom, self.pos, &self.snp_id).cmp(&(&other.chrom, other.pos, &other.snp_id))
    }
}

/// Genomic coordinates of every SNP, held in canonical
/// (chromosome, position, id) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnpMap {
    records: Vec<SnpRecord>,
    index: HashMap<String, usize>,
}

impl SnpMap {
    pub fn new(mut records: Vec<SnpRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Empty("SNP map has no records".into()));
        }
        records.sort_by(SnpRecord::canonical_cmp);
        let mut index = HashMap::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if index.insert(r.snp_id.clone(), i).is_some() {
                return Err(Error::invalid(format!(
                    "duplicate SNP id {:?} in map",
                    r.snp_id
                )));
            }
        }
        Ok(SnpMap { records, index })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[SnpRecord] {
        &self.records
    }

    pub fn snp_ids(&self) -> Vec<String> {
        self.records.iter().map(|r| r.snp_id.clone()).collect()
    }

    pub fn index_of(&self, snp_id: &str) -> Option<usize> {
        self.index.get(snp_id).copied()
    }

    /// Keeps the records at the given canonical indices.
    pub fn subset(&self, keep: &[usize]) -> Result<SnpMap> {
        SnpMap::new(keep.iter().map(|&i| self.records[i].clone()).collect())
    }

    /// Canonical indices of SNPs on `chrom` with position in `[lo, hi]`.
    pub fn range(&self, chrom: &Chromosome, lo: u64, hi: u64) -> std::ops::Range<usize> {
        let start = self
            .records
            .partition_point(|r| (&r.chrom, r.pos) < (chrom, lo));
        let end = self
            .records
            .partition_point(|r| (&r.chrom, r.pos) <= (chrom, hi));
        start..end.max(start)
    }

    /// Parses `snp_id<TAB>chrom<TAB>pos` lines (optional `snp_id` header).
    pub fn read_tsv<R: BufRead>(reader: R) -> Result<SnpMap> {
        let mut lines = TsvLines::new(reader, "SNP map");
        let mut records = Vec::new();
        let mut first = true;
        while let Some((line, f)) = lines.next_record()? {
            expect_arity(lines.what(), line, &f, 3)?;
            if std::mem::take(&mut first) && f[0] == "snp_id" {
                continue;
            }
            records.push(SnpRecord {
                snp_id: nonempty_id(lines.what(), line, &f[0])?,
                chrom: Chromosome::new(nonempty_id(lines.what(), line, &f[1])?),
                pos: parse_u64(lines.what(), line, &f[2])?,
            });
        }
        SnpMap::new(records)
    }

    pub fn load(path: &Path) -> Result<SnpMap> {
        Self::read_tsv(super::open(path)?)
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "snp_id\tchrom\tpos")?;
        for r in &self.records {
            writeln!(out, "{}\t{}\t{}", r.snp_id, r.chrom, r.pos)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gene {
    pub gene_id: String,
    pub chrom: Chromosome,
    pub start: u64,
    pub end: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneAnnotation {
    genes: Vec<Gene>,
    index: HashMap<String, usize>,
}

impl GeneAnnotation {
    pub fn new(genes: Vec<Gene>) -> Result<Self> {
        let mut index = HashMap::with_capacity(genes.len());
        for (i, g) in genes.iter().enumerate() {
            if g.start > g.end {
                return Err(Error::invalid(format!(
                    "gene {:?} has start {} after end {}",
                    g.gene_id, g.start, g.end
                )));
            }
            if index.insert(g.gene_id.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate gene id {:?}", g.gene_id)));
            }
        }
        Ok(GeneAnnotation { genes, index })
    }

    pub fn genes(&self) -> &[Gene] {
        &self.genes
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn get(&self, gene_id: &str) -> Option<&Gene> {
        self.index.get(gene_id).map(|&i| &self.genes[i])
    }

    pub fn index_of(&self, gene_id: &str) -> Option<usize> {
        self.index.get(gene_id).copied()
    }

    /// Canonical map indices of SNPs within `window` bp of the gene body, inclusive.
    pub fn nearby_snps(&self, gene: &Gene, map: &SnpMap, window: u64) -> std::ops::Range<usize> {
        map.range(
            &gene.chrom,
            gene.start.saturating_sub(window),
            gene.end.saturating_add(window),
        )
    }

    /// Parses `gene_id<TAB>chrom<TAB>start<TAB>end` lines (optional `gene_id` header).
    pub fn read_tsv<R: BufRead>(reader: R) -> Result<GeneAnnotation> {
        let mut lines = TsvLines::new(reader, "gene annotation");
        let mut genes = Vec::new();
        let mut first = true;
        while let Some((line, f)) = lines.next_record()? {
            expect_arity(lines.what(), line, &f, 4)?;
            if std::mem::take(&mut first) && f[0] == "gene_id" {
                continue;
            }
            genes.push(Gene {
                gene_id: nonempty_id(lines.what(), line, &f[0])?,
                chrom: Chromosome::new(nonempty_id(lines.what(), line, &f[1])?),
                start: parse_u64(lines.what(), line, &f[2])?,
                end: parse_u64(lines.what(), line, &f[3])?,
            });
        }
        GeneAnnotation::new(genes)
    }

    pub fn load(path: &Path) -> Result<GeneAnnotation> {
        Self::read_tsv(super::open(path)?)
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "gene_id\tchrom\tstart\tend")?;
        for g in &self.genes {
            writeln!(out, "{}\t{}\t{}\t{}", g.gene_id, g.chrom, g.start, g.end)?;
        }
        Ok(())
    }
}

/// Undirected gene-gene interactions, each pair stored once as (smaller, larger) id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeneInteractionList {
    pairs: BTreeSet<(String, String)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InteractionLoadReport {
    pub self_pairs_dropped: usize,
    pub duplicates_dropped: usize,
    pub unresolved_dropped: usize,
}

impl GeneInteractionList {
    pub fn from_pairs<I, A, B>(pairs: I) -> (GeneInteractionList, InteractionLoadReport)
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut list = GeneInteractionList::default();
        let mut report = InteractionLoadReport::default();
        for (a, b) in pairs {
            let (a, b) = (a.into(), b.into());
            if a == b {
                report.self_pairs_dropped += 1;
                continue;
            }
            let key = if a < b { (a, b) } else { (b, a) };
            if !list.pairs.insert(key) {
                report.duplicates_dropped += 1;
            }
        }
        (list, report)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, a: &str, b: &str) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.pairs.contains(&(key.0.to_string(), key.1.to_string()))
    }

    /// Drops pairs with an endpoint missing from `genes`; returns how many were dropped.
    pub fn retain_resolvable(&mut self, genes: &GeneAnnotation) -> usize {
        let before = self.pairs.len();
        self.pairs
            .retain(|(a, b)| genes.get(a).is_some() && genes.get(b).is_some());
        let dropped = before - self.pairs.len();
        if dropped > 0 {
            log::warn!("dropped {dropped} interactions referencing unannotated genes");
        }
        dropped
    }

    /// Parses `gene_id_a<TAB>gene_id_b` lines (optional `gene_id_a` header).
    pub fn read_tsv<R: BufRead>(reader: R) -> Result<(GeneInteractionList, InteractionLoadReport)> {
        let mut lines = TsvLines::new(reader, "interaction list");
        let mut raw = Vec::new();
        let mut first = true;
        while let Some((line, f)) = lines.next_record()? {
            expect_arity(lines.what(), line, &f, 2)?;
            if std::mem::take(&mut first) && f[0] == "gene_id_a" {
                continue;
            }
            raw.push((
                nonempty_id(lines.what(), line, &f[0])?,
                nonempty_id(lines.what(), line, &f[1])?,
            ));
        }
        Ok(Self::from_pairs(raw))
    }

    /// Loads the list and resolves it against `genes`.
    pub fn load(
        path: &Path,
        genes: &GeneAnnotation,
    ) -> Result<(GeneInteractionList, InteractionLoadReport)> {
        let (mut list, mut report) = Self::read_tsv(super::open(path)?)?;
        report.unresolved_dropped = list.retain_resolvable(genes);
        Ok((list, report))
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "gene_id_a\tgene_id_b")?;
        for (a, b) in &self.pairs {
            writeln!(out, "{a}\t{b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chromosome_natural_order() {
        let mut c: Vec<Chromosome> = ["10", "2", "X", "chr3", "1"]
            .into_iter()
            .map(Chromosome::new)
            .collect();
        c.sort();
        let labels: Vec<&str> = c.iter().map(Chromosome::as_str).collect();
        assert_eq!(labels, ["1", "2", "chr3", "10", "X"]);
    }

    #[test]
    fn map_is_sorted_canonically() {
        let map =
            SnpMap::read_tsv("snp_id\tchrom\tpos\nb\t2\t5\nc\t1\t9\na\t1\t9\nd\t1\t3\n".as_bytes())
                .unwrap();
        assert_eq!(map.snp_ids(), ["d", "a", "c", "b"]);
        assert_eq!(map.range(&Chromosome::new("1"), 4, 9), 1..3);
        assert_eq!(map.range(&Chromosome::new("3"), 0, 100).len(), 0);
        assert!(SnpMap::read_tsv("a\t1\t1\na\t1\t2\n".as_bytes()).is_err());
        assert!(SnpMap::read_tsv("a\t1\t-1\n".as_bytes()).is_err());
    }

    #[test]
    fn genes_validate_interval() {
        assert!(GeneAnnotation::read_tsv("g\t1\t10\t5\n".as_bytes()).is_err());
        assert!(GeneAnnotation::read_tsv("g\t1\t1\t5\ng\t1\t1\t5\n".as_bytes()).is_err());
        let genes = GeneAnnotation::read_tsv("gene_id\tchrom\tstart\tend\ng\t1\t5\t5\n".as_bytes())
            .unwrap();
        assert_eq!(genes.len(), 1);
    }

    #[test]
    fn interactions_drop_self_duplicate_and_unresolved() {
        let (mut list, report) =
            GeneInteractionList::read_tsv("A\tB\nB\tA\nC\tC\nA\tZ\n".as_bytes()).unwrap();
        assert_eq!(report.self_pairs_dropped, 1);
        assert_eq!(report.duplicates_dropped, 1);
        assert_eq!(list.len(), 2);
        let genes = GeneAnnotation::read_tsv("A\t1\t1\t2\nB\t1\t5\t6\n".as_bytes()).unwrap();
        assert_eq!(list.retain_resolvable(&genes), 1);
        assert!(list.contains("B", "A"));
    }
}
