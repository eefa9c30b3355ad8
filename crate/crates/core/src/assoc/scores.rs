use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datamodel::GenotypeMatrix;
use crate::numfmt::fmt_num;
use crate::tsv::{expect_arity, nonempty_id, parse_f64, TsvLines};
use crate::{Error, Result};

/// Nonnegative per-SNP association scores aligned to a SNP order.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationScores {
    pub snp_ids: Vec<String>,
    pub c: Vec<f64>,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreOptions {
    /// Scale genotype columns to unit sample standard deviation.
    pub standardize: bool,
    /// Divide every score by the residual sum of squares, which makes scores
    /// invariant to the phenotype's scale (about chi-square(1) under no
    /// association when standardized).
    pub normalize_phenotype: bool,
    /// Optional nonnegative per-SNP multipliers.
    pub weights: Option<Vec<f64>>,
}

impl Default for ScoreOptions {
    fn default() -> Self {
        ScoreOptions {
            standardize: true,
            normalize_phenotype: false,
            weights: None,
        }
    }
}

impl ScoreOptions {
    pub fn describe(&self) -> String {
        format!(
            "linear-kernel score (standardize={}, normalize_phenotype={}, weights={})",
            self.standardize,
            self.normalize_phenotype,
            if self.weights.is_some() {
                "custom"
            } else {
                "1"
            }
        )
    }
}

/// c_p = w_p (g_p' y)^2 with g_p the centered (optionally standardized)
/// genotype column and `y_resid` the covariate-residualized phenotype.
/// Zero-variance columns score 0.
pub fn skat_linear_scores(
    g: &GenotypeMatrix,
    y_resid: &[f64],
    options: &ScoreOptions,
) -> Result<AssociationScores> {
    let m = g.n_individuals();
    if y_resid.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            actual: y_resid.len(),
        });
    }
    if m < 3 {
        return Err(Error::invalid(format!(
            "scoring needs at least 3 individuals, got {m}"
        )));
    }
    if let Some(w) = &options.weights {
        if w.len() != g.n_snps() {
            return Err(Error::LengthMismatch {
                expected: g.n_snps(),
                actual: w.len(),
            });
        }
        if w.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
            return Err(Error::invalid("SNP weights must be finite and nonnegative"));
        }
    }
    let y_sum: f64 = y_resid.iter().sum();
    let rss: f64 = y_resid.iter().map(|v| v * v).sum();
    let c = (0..g.n_snps())
        .into_par_iter()
        .map(|p| {
            let col = g.column(p);
            let total: u64 = col.iter().map(|&v| u64::from(v)).sum();
            let mean = total as f64 / m as f64;
            let ss: f64 = col.iter().map(|&v| (f64::from(v) - mean).powi(2)).sum();
            if ss <= 0.0 {
                return 0.0;
            }
            let raw: f64 = col
                .iter()
                .zip(y_resid)
                .map(|(&v, y)| f64::from(v) * y)
                .sum();
            let mut score = raw - mean * y_sum;
            if options.standardize {
                score /= (ss / (m - 1) as f64).sqrt();
            }
            let mut c = score * score;
            if options.normalize_phenotype {
                c = if rss > 0.0 { c / rss } else { 0.0 };
            }
            if let Some(w) = &options.weights {
                c *= w[p];
            }
            c
        })
        .collect();
    Ok(AssociationScores {
        snp_ids: g.snp_ids().to_vec(),
        c,
        provenance: options.describe(),
    })
}

impl AssociationScores {
    pub fn new(snp_ids: Vec<String>, c: Vec<f64>, provenance: impl Into<String>) -> Result<Self> {
        if snp_ids.len() != c.len() {
            return Err(Error::LengthMismatch {
                expected: snp_ids.len(),
                actual: c.len(),
            });
        }
        if let Some(v) = c.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::invalid(format!(
                "association score {v} is not finite and nonnegative"
            )));
        }
        Ok(AssociationScores {
            snp_ids,
            c,
            provenance: provenance.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// Restricts to the given SNP indices, in the given order.
    pub fn subset(&self, keep: &[usize]) -> AssociationScores {
        AssociationScores {
            snp_ids: keep.iter().map(|&i| self.snp_ids[i].clone()).collect(),
            c: keep.iter().map(|&i| self.c[i]).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "snp_id\tc")?;
        for (id, c) in self.snp_ids.iter().zip(&self.c) {
            writeln!(out, "{id}\t{}", fmt_num(*c))?;
        }
        Ok(())
    }

    /// Parses `snp_id<TAB>c` lines (optional `snp_id` header).
    pub fn read_tsv<R: BufRead>(reader: R) -> Result<AssociationScores> {
        let mut lines = TsvLines::new(reader, "score file");
        let mut ids = Vec::new();
        let mut c = Vec::new();
        let mut first = true;
        while let Some((line, f)) = lines.next_record()? {
            expect_arity(lines.what(), line, &f, 2)?;
            if std::mem::take(&mut first) && f[0] == "snp_id" {
                continue;
            }
            ids.push(nonempty_id(lines.what(), line, &f[0])?);
            c.push(parse_f64(lines.what(), line, &f[1])?);
        }
        if ids.is_empty() {
            return Err(Error::Empty("score file has no records".into()));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = ids.iter().find(|id| !seen.insert(id.as_str())) {
            return Err(Error::invalid(format!(
                "duplicate SNP id {dup:?} in score file"
            )));
        }
        AssociationScores::new(ids, c, "file")
    }

    pub fn load(path: &Path) -> Result<AssociationScores> {
        Self::read_tsv(crate::datamodel::open(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geno(cols: &[&[u8]]) -> GenotypeMatrix {
        let m = cols[0].len();
        GenotypeMatrix::new(
            (0..m).map(|i| format!("i{i}")).collect(),
            (0..cols.len()).map(|p| format!("s{p}")).collect(),
            cols.iter().flat_map(|c| c.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn orthogonal_and_constant_columns_score_zero() {
        let g = geno(&[&[1, 1, 1, 1], &[0, 2, 0, 2]]);
        // Residual orthogonal to the centered second column.
        let y = [1.0, 1.0, -1.0, -1.0];
        let s = skat_linear_scores(&g, &y, &ScoreOptions::default()).unwrap();
        assert_eq!(s.c, [0.0, 0.0]);
    }

    #[test]
    fn three_vector_dot_product() {
        // Column (2,0,1): mean 1, centered (1,-1,0), sample sd 1, so the
        // standardized column is (1,-1,0). With y = (1,-1,0)/sqrt(2):
        // (g'y)^2 = (2/sqrt(2))^2 = 2.
        let g = geno(&[&[2, 0, 1]]);
        let y = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
        let s = skat_linear_scores(&g, &y, &ScoreOptions::default()).unwrap();
        assert!((s.c[0] - 2.0).abs() < 1e-12);
        let raw = skat_linear_scores(
            &geno(&[&[2, 0, 2]]),
            &y,
            &ScoreOptions {
                standardize: false,
                ..Default::default()
            },
        )
        .unwrap();
        // Centered (2/3, -4/3, 2/3) . y = sqrt(2).
        assert!((raw.c[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn normalization_and_weights() {
        let g = geno(&[&[2, 0, 1, 1], &[0, 1, 2, 2]]);
        let y = [0.5, -1.0, 0.25, 0.25];
        let base = skat_linear_scores(&g, &y, &ScoreOptions::default()).unwrap();
        let y10: Vec<f64> = y.iter().map(|v| v * 10.0).collect();
        let opts = ScoreOptions {
            normalize_phenotype: true,
            weights: Some(vec![1.0, 0.5]),
            ..Default::default()
        };
        let a = skat_linear_scores(&g, &y, &opts).unwrap();
        let b = skat_linear_scores(&g, &y10, &opts).unwrap();
        let rss: f64 = y.iter().map(|v| v * v).sum();
        assert!((a.c[0] - base.c[0] / rss).abs() < 1e-12);
        assert!((a.c[1] - 0.5 * base.c[1] / rss).abs() < 1e-12);
        assert!((a.c[0] - b.c[0]).abs() < 1e-12);
    }

    #[test]
    fn score_file_round_trip() {
        let s = AssociationScores::new(vec!["a".into(), "b".into()], vec![0.5, 3.0], "x").unwrap();
        let mut buf = Vec::new();
        s.write_tsv(&mut buf).unwrap();
        let back = AssociationScores::read_tsv(buf.as_slice()).unwrap();
        assert_eq!(back.c, s.c);
        assert!(AssociationScores::read_tsv("a\t-1\n".as_bytes()).is_err());
        assert!(AssociationScores::read_tsv("a\t1\na\t2\n".as_bytes()).is_err());
    }
}
