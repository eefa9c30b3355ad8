use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::Serialize;

use crate::tsv::TsvLines;
use crate::{Error, Result};

pub const MISSING_TOKEN: &str = "NA";

/// Minor-allele counts for `m` individuals by `n` SNPs.
///
/// Values are stored column-major (one contiguous column per SNP) since
/// every consumer walks SNP columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenotypeMatrix {
    individual_ids: Vec<String>,
    snp_ids: Vec<String>,
    values: Vec<u8>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GenotypeLoadReport {
    pub imputed_cells: usize,
    /// SNPs whose every call was missing; imputed to 0.
    pub fully_missing_snps: usize,
}

fn check_unique(ids: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::invalid(format!("duplicate {what} id {id:?}")));
        }
    }
    Ok(())
}

impl GenotypeMatrix {
    /// Builds a validated matrix from column-major values.
    pub fn new(individual_ids: Vec<String>, snp_ids: Vec<String>, values: Vec<u8>) -> Result<Self> {
        let m = individual_ids.len();
        let n = snp_ids.len();
        if m < 2 {
            return Err(Error::invalid(format!(
                "need at least 2 individuals, got {m}"
            )));
        }
        if n < 1 {
            return Err(Error::invalid("need at least 1 SNP"));
        }
        if values.len() != m * n {
            return Err(Error::LengthMismatch {
                expected: m * n,
                actual: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|&&v| v > 2) {
            return Err(Error::invalid(format!(
                "genotype value {v} outside {{0,1,2}}"
            )));
        }
        check_unique(&individual_ids, "individual")?;
        check_unique(&snp_ids, "SNP")?;
        Ok(GenotypeMatrix {
            individual_ids,
            snp_ids,
            values,
        })
    }

    pub fn n_individuals(&self) -> usize {
        self.individual_ids.len()
    }

    pub fn n_snps(&self) -> usize {
        self.snp_ids.len()
    }

    pub fn individual_ids(&self) -> &[String] {
        &self.individual_ids
    }

    pub fn snp_ids(&self) -> &[String] {
        &self.snp_ids
    }

    pub fn column(&self, snp: usize) -> &[u8] {
        let m = self.n_individuals();
        &self.values[snp * m..(snp + 1) * m]
    }

    pub fn column_f64(&self, snp: usize) -> Vec<f64> {
        self.column(snp).iter().map(|&v| f64::from(v)).collect()
    }

    pub fn get(&self, individual: usize, snp: usize) -> u8 {
        self.values[snp * self.n_individuals() + individual]
    }

    /// Minor-allele frequency of a SNP: min(f, 1 - f) with f the allele frequency.
    pub fn maf(&self, snp: usize) -> f64 {
        let total: u64 = self.column(snp).iter().map(|&v| u64::from(v)).sum();
        let f = total as f64 / (2 * self.n_individuals()) as f64;
        f.min(1.0 - f)
    }

    /// Keeps SNPs with MAF strictly above `threshold`; returns the kept original indices.
    pub fn maf_filter(&self, threshold: f64) -> Result<(GenotypeMatrix, Vec<usize>)> {
        if !(0.0..0.5).contains(&threshold) {
            return Err(Error::invalid(format!(
                "MAF threshold must lie in [0, 0.5), got {threshold}"
            )));
        }
        let kept: Vec<usize> = (0..self.n_snps())
            .filter(|&p| self.maf(p) > threshold)
            .collect();
        if kept.is_empty() {
            return Err(Error::Empty(format!(
                "no SNP has minor-allele frequency above {threshold}"
            )));
        }
        Ok((self.select_snps(&kept), kept))
    }

    /// Restricts to the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> GenotypeMatrix {
        let m = self.n_individuals();
        let mut values = Vec::with_capacity(rows.len() * self.n_snps());
        for p in 0..self.n_snps() {
            let col = &self.values[p * m..(p + 1) * m];
            values.extend(rows.iter().map(|&i| col[i]));
        }
        GenotypeMatrix {
            individual_ids: rows
                .iter()
                .map(|&i| self.individual_ids[i].clone())
                .collect(),
            snp_ids: self.snp_ids.clone(),
            values,
        }
    }

    /// Restricts to the given SNP columns, in the given order.
    pub fn select_snps(&self, snps: &[usize]) -> GenotypeMatrix {
        let mut values = Vec::with_capacity(snps.len() * self.n_individuals());
        for &p in snps {
            values.extend_from_slice(self.column(p));
        }
        GenotypeMatrix {
            individual_ids: self.individual_ids.clone(),
            snp_ids: snps.iter().map(|&p| self.snp_ids[p].clone()).collect(),
            values,
        }
    }

    /// Parses the genotype TSV: header `iid<TAB>snp...`, one row per
    /// individual, cells in {0,1,2,NA}. Missing cells are imputed with the
    /// per-SNP mode (smallest value on ties).
    pub fn read_tsv<R: BufRead>(reader: R) -> Result<(GenotypeMatrix, GenotypeLoadReport)> {
        let mut lines = TsvLines::new(reader, "genotype file");
        let (hline, header) = lines
            .next_record()?
            .ok_or_else(|| Error::Empty("genotype file is empty".into()))?;
        if header.first().map(String::as_str) != Some("iid") {
            return Err(lines.error(hline, "header must start with \"iid\""));
        }
        let snp_ids: Vec<String> = header[1..].to_vec();
        if snp_ids.iter().any(String::is_empty) {
            return Err(lines.error(hline, "empty SNP id in header"));
        }
        check_unique(&snp_ids, "SNP")?;
        let n = snp_ids.len();

        // Row-major while reading; None marks a missing call.
        let mut rows: Vec<Option<u8>> = Vec::new();
        let mut individual_ids = Vec::new();
        while let Some((line, fields)) = lines.next_record()? {
            if fields.len() != n + 1 {
                return Err(lines.error(
                    line,
                    format!("expected {} fields, found {}", n + 1, fields.len()),
                ));
            }
            if fields[0].is_empty() {
                return Err(lines.error(line, "empty individual id"));
            }
            individual_ids.push(fields[0].clone());
            for cell in &fields[1..] {
                let v = match cell.as_str() {
                    "0" => Some(0),
                    "1" => Some(1),
                    "2" => Some(2),
                    MISSING_TOKEN => None,
                    other => {
                        return Err(lines.error(line, format!("invalid genotype token {other:?}")))
                    }
                };
                rows.push(v);
            }
        }
        let m = individual_ids.len();
        let mut report = GenotypeLoadReport::default();
        let mut values = vec![0u8; m * n];
        for p in 0..n {
            let mut counts = [0usize; 3];
            for i in 0..m {
                if let Some(v) = rows[i * n + p] {
                    counts[v as usize] += 1;
                }
            }
            let observed: usize = counts.iter().sum();
            if observed == 0 && m > 0 {
                report.fully_missing_snps += 1;
            }
            // max_by_key keeps the last maximum; iterate in reverse for smallest-on-tie.
            let mode = (0..3u8)
                .rev()
                .max_by_key(|&v| counts[v as usize])
                .unwrap_or(0);
            for i in 0..m {
                values[p * m + i] = rows[i * n + p].unwrap_or_else(|| {
                    report.imputed_cells += 1;
                    mode
                });
            }
        }
        if report.imputed_cells > 0 {
            log::warn!(
                "imputed {} missing genotype calls with the per-SNP mode",
                report.imputed_cells
            );
        }
        let g = GenotypeMatrix::new(individual_ids, snp_ids, values)?;
        Ok((g, report))
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "iid")?;
        for id in &self.snp_ids {
            write!(out, "\t{id}")?;
        }
        writeln!(out)?;
        let mut line = String::new();
        for (i, iid) in self.individual_ids.iter().enumerate() {
            line.clear();
            line.push_str(iid);
            for p in 0..self.n_snps() {
                line.push('\t');
                line.push(char::from(b'0' + self.get(i, p)));
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }
}

pub fn load_genotypes(path: &Path) -> Result<(GenotypeMatrix, GenotypeLoadReport)> {
    GenotypeMatrix::read_tsv(super::open(path)?)
}
