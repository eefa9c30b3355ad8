use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::CovariateBasis;
use crate::datamodel::{Covariates, GenotypeMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnivariateResult {
    pub t_statistics: Vec<f64>,
    pub p_values: Vec<f64>,
    /// SNPs with p <= alpha / n, ascending.
    pub selected: Vec<usize>,
    /// Bonferroni-corrected per-SNP threshold alpha / n.
    pub threshold: f64,
}

/// Single-SNP least-squares scan: for every SNP regress `y` on
/// `[intercept | covariates | g_p]` and test the genotype coefficient with a
/// two-sided t-test on m - k - 2 degrees of freedom. SNPs whose genotype is
/// collinear with the covariates get p = 1.
pub fn univariate_baseline(
    g: &GenotypeMatrix,
    y: &[f64],
    cov: Option<&Covariates>,
    alpha: f64,
) -> Result<UnivariateResult> {
    let m = g.n_individuals();
    if y.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            actual: y.len(),
        });
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    let basis = CovariateBasis::new(m, cov)?;
    let k = basis.rank() - 1;
    if m <= k + 2 {
        return Err(Error::invalid(format!(
            "need more than {} individuals for {k} covariates, got {m}",
            k + 2
        )));
    }
    let df = (m - k - 2) as f64;
    let t_dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::invalid(e.to_string()))?;

    let mut y_res = y.to_vec();
    basis.project_out(&mut y_res);
    let syy: f64 = y_res.iter().map(|v| v * v).sum();

    let n = g.n_snps();
    let mut t_statistics = Vec::with_capacity(n);
    let mut p_values = Vec::with_capacity(n);
    for p in 0..n {
        let raw = g.column_f64(p);
        let norm0: f64 = raw.iter().map(|v| v * v).sum();
        let mut x = raw;
        basis.project_out(&mut x);
        let sxx: f64 = x.iter().map(|v| v * v).sum();
        if norm0 == 0.0 || sxx <= 1e-18 * norm0 {
            t_statistics.push(0.0);
            p_values.push(1.0);
            continue;
        }
        let sxy: f64 = x.iter().zip(&y_res).map(|(a, b)| a * b).sum();
        let beta = sxy / sxx;
        let rss = (syy - sxy * beta).max(0.0);
        let (t, pv) = if rss == 0.0 {
            if beta == 0.0 {
                (0.0, 1.0)
            } else {
                (beta.signum() * f64::INFINITY, 0.0)
            }
        } else {
            let t = beta / (rss / df / sxx).sqrt();
            (t, (2.0 * t_dist.cdf(-t.abs())).min(1.0))
        };
        t_statistics.push(t);
        p_values.push(pv);
    }
    let threshold = alpha / n as f64;
    let selected = if alpha > 0.0 {
        (0..n).filter(|&p| p_values[p] <= threshold).collect()
    } else {
        Vec::new()
    };
    Ok(UnivariateResult {
        t_statistics,
        p_values,
        selected,
        threshold,
    })
}
