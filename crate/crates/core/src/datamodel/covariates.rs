use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::numfmt::fmt_num;
use crate::tsv::{parse_f64, TsvLines};
use crate::{Error, Result};

/// Real-valued per-individual covariates (m rows, k labelled columns).
#[derive(Debug, Clone, PartialEq)]
pub struct Covariates {
    individual_ids: Vec<String>,
    labels: Vec<String>,
    /// Column-major, `labels.len()` columns of `individual_ids.len()` values.
    values: Vec<f64>,
}

impl Covariates {
    pub fn new(individual_ids: Vec<String>, labels: Vec<String>, values: Vec<f64>) -> Result<Self> {
        let m = individual_ids.len();
        let k = labels.len();
        if values.len() != m * k {
            return Err(Error::LengthMismatch {
                expected: m * k,
                actual: values.len(),
            });
        }
        if k >= m && k > 0 {
            return Err(Error::invalid(format!(
                "{k} covariates need more than {k} individuals, got {m}"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite covariate value"));
        }
        let mut seen = HashSet::new();
        for id in &individual_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::invalid(format!("duplicate individual id {id:?}")));
            }
        }
        let cov = Covariates {
            individual_ids,
            labels,
            values,
        };
        for j in 0..k {
            let col = cov.column(j);
            if col.iter().all(|&v| v == col[0]) {
                return Err(Error::invalid(format!(
                    "covariate {:?} is constant and duplicates the intercept",
                    cov.labels[j]
                )));
            }
        }
        Ok(cov)
    }

    pub fn n_individuals(&self) -> usize {
        self.individual_ids.len()
    }

    pub fn n_covariates(&self) -> usize {
        self.labels.len()
    }

    pub fn individual_ids(&self) -> &[String] {
        &self.individual_ids
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn column(&self, j: usize) -> &[f64] {
        let m = self.n_individuals();
        &self.values[j * m..(j + 1) * m]
    }

    /// Restricts to the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Covariates {
        let mut values = Vec::with_capacity(rows.len() * self.n_covariates());
        for j in 0..self.n_covariates() {
            let col = self.column(j);
            values.extend(rows.iter().map(|&i| col[i]));
        }
        Covariates {
            individual_ids: rows
                .iter()
                .map(|&i| self.individual_ids[i].clone())
                .collect(),
            labels: self.labels.clone(),
            values,
        }
    }

    /// Parses the covariate TSV: header `iid<TAB>c1...ck`, then one row per individual.
    pub fn read_tsv<R: BufRead>(reader: R) -> Result<Covariates> {
        let mut lines = TsvLines::new(reader, "covariate file");
        let (hline, header) = lines
            .next_record()?
            .ok_or_else(|| Error::Empty("covariate file is empty".into()))?;
        if header.first().map(String::as_str) != Some("iid") {
            return Err(lines.error(hline, "header must start with \"iid\""));
        }
        let labels = header[1..].to_vec();
        let k = labels.len();
        let mut ids = Vec::new();
        let mut rows = Vec::new();
        while let Some((line, f)) = lines.next_record()? {
            if f.len() != k + 1 {
                return Err(lines.error(
                    line,
                    format!("expected {} fields, found {}", k + 1, f.len()),
                ));
            }
            if f[0].is_empty() {
                return Err(lines.error(line, "empty individual id"));
            }
            ids.push(f[0].clone());
            for cell in &f[1..] {
                rows.push(parse_f64(lines.what(), line, cell)?);
            }
        }
        let m = ids.len();
        let mut values = vec![0.0; m * k];
        for i in 0..m {
            for j in 0..k {
                values[j * m + i] = rows[i * k + j];
            }
        }
        Covariates::new(ids, labels, values)
    }

    pub fn load(path: &Path) -> Result<Covariates> {
        Self::read_tsv(super::open(path)?)
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "iid")?;
        for l in &self.labels {
            write!(out, "\t{l}")?;
        }
        writeln!(out)?;
        for (i, id) in self.individual_ids.iter().enumerate() {
            write!(out, "{id}")?;
            for j in 0..self.n_covariates() {
                write!(out, "\t{}", fmt_num(self.column(j)[i]))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let c =
            Covariates::read_tsv("iid\tpc1\tage\na\t0.5\t30\nb\t-0.5\t40\nc\t0\t50\n".as_bytes())
                .unwrap();
        assert_eq!(c.labels(), ["pc1", "age"]);
        assert_eq!(c.column(1), [30.0, 40.0, 50.0]);
        let err = Covariates::read_tsv("iid\tk\na\t1\nb\t1\nc\t1\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("constant"));
        assert!(Covariates::read_tsv("iid\tx\ty\na\t1\t2\nb\t2\t1\n".as_bytes()).is_err());
    }
}
