use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::datamodel::Dataset;
use crate::{Error, Result};

pub const DEFAULT_RIDGE_PENALTY: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Predictivity {
    /// Mean over folds of the squared Pearson correlation between held-out
    /// predictions and phenotypes.
    pub mean_r2: f64,
    pub fold_r2: Vec<f64>,
    /// Folds whose correlation was undefined (constant prediction or
    /// phenotype, or fewer than two held-out rows); they count as 0.
    pub degenerate_folds: Vec<usize>,
    /// No SNP was selected; nothing was fitted and the result is 0.
    pub empty_selection: bool,
    pub penalty: f64,
}

/// Cross-validated ridge regression of the phenotype on the selected SNPs.
///
/// `fold_of[i]` is the fold of individual `i`. Genotype columns are
/// standardized with training statistics; columns constant on the training
/// rows are dropped. The intercept is not penalized.
pub fn ridge_predictivity(
    dataset: &Dataset,
    selected: &[usize],
    fold_of: &[usize],
    penalty: f64,
) -> Result<Predictivity> {
    let m = dataset.n_individuals();
    let n = dataset.genotypes.n_snps();
    if fold_of.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            actual: fold_of.len(),
        });
    }
    if !(penalty.is_finite() && penalty >= 0.0) {
        return Err(Error::invalid(format!(
            "ridge penalty must be finite and nonnegative, got {penalty}"
        )));
    }
    if let Some(&p) = selected.iter().find(|&&p| p >= n) {
        return Err(Error::invalid(format!(
            "selected SNP index {p} out of range for {n} SNPs"
        )));
    }
    let folds: BTreeSet<usize> = fold_of.iter().copied().collect();
    if folds.len() < 2 {
        return Err(Error::invalid("ridge evaluation needs at least 2 folds"));
    }
    let selected: Vec<usize> = selected
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if selected.is_empty() {
        return Ok(Predictivity {
            mean_r2: 0.0,
            fold_r2: vec![0.0; folds.len()],
            degenerate_folds: Vec::new(),
            empty_selection: true,
            penalty,
        });
    }
    let mut fold_r2 = Vec::with_capacity(folds.len());
    let mut degenerate_folds = Vec::new();
    for &fold in &folds {
        let train: Vec<usize> = (0..m).filter(|&i| fold_of[i] != fold).collect();
        let test: Vec<usize> = (0..m).filter(|&i| fold_of[i] == fold).collect();
        let predicted = fit_predict(dataset, &selected, &train, &test, penalty)?;
        let actual: Vec<f64> = test.iter().map(|&i| dataset.phenotype[i]).collect();
        match squared_pearson(&predicted, &actual) {
            Some(r2) => fold_r2.push(r2),
            None => {
                fold_r2.push(0.0);
                degenerate_folds.push(fold);
            }
        }
    }
    Ok(Predictivity {
        mean_r2: fold_r2.iter().sum::<f64>() / fold_r2.len() as f64,
        fold_r2,
        degenerate_folds,
        empty_selection: false,
        penalty,
    })
}

fn fit_predict(
    dataset: &Dataset,
    selected: &[usize],
    train: &[usize],
    test: &[usize],
    penalty: f64,
) -> Result<Vec<f64>> {
    let g = &dataset.genotypes;
    let mt = train.len() as f64;
    let y_mean = train.iter().map(|&i| dataset.phenotype[i]).sum::<f64>() / mt;
    let mut centers = Vec::new();
    let mut columns = Vec::new();
    for &p in selected {
        let col = g.column(p);
        let mean = train.iter().map(|&i| f64::from(col[i])).sum::<f64>() / mt;
        let ss: f64 = train
            .iter()
            .map(|&i| (f64::from(col[i]) - mean).powi(2))
            .sum();
        if ss > 0.0 && train.len() > 1 {
            let sd = (ss / (mt - 1.0)).sqrt();
            centers.push((p, mean, sd));
            columns.push(p);
        }
    }
    if columns.is_empty() {
        return Ok(vec![y_mean; test.len()]);
    }
    let design = |rows: &[usize]| {
        DMatrix::from_fn(rows.len(), centers.len(), |r, j| {
            let (p, mean, sd) = centers[j];
            (f64::from(g.get(rows[r], p)) - mean) / sd
        })
    };
    let x = design(train);
    let y = DVector::from_iterator(
        train.len(),
        train.iter().map(|&i| dataset.phenotype[i] - y_mean),
    );
    let singular = || Error::invalid("ridge system is singular; use a positive penalty");
    let beta = if x.ncols() <= x.nrows() {
        let mut a = x.tr_mul(&x);
        for j in 0..a.ncols() {
            a[(j, j)] += penalty;
        }
        a.cholesky().ok_or_else(singular)?.solve(&x.tr_mul(&y))
    } else {
        // dual form: beta = X' (XX' + penalty I)^-1 y
        let mut k = &x * x.transpose();
        for j in 0..k.ncols() {
            k[(j, j)] += penalty;
        }
        x.tr_mul(&k.cholesky().ok_or_else(singular)?.solve(&y))
    };
    let pred = design(test) * beta;
    Ok(pred.iter().map(|v| v + y_mean).collect())
}

fn squared_pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() < 2 || a.iter().all(|&v| v == a[0]) || b.iter().all(|&v| v == b[0]) {
        return None;
    }
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some((sab * sab / (saa * sbb)).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datamodel::GenotypeMatrix;

    fn dataset(cols: &[Vec<u8>], y: Vec<f64>) -> Dataset {
        let m = y.len();
        Dataset {
            genotypes: GenotypeMatrix::new(
                (0..m).map(|i| format!("i{i:02}")).collect(),
                (0..cols.len()).map(|p| format!("s{p}")).collect(),
                cols.concat(),
            )
            .unwrap(),
            phenotype: y,
            covariates: None,
        }
    }

    #[test]
    fn planted_linear_signal_is_recovered() {
        let a: Vec<u8> = (0..30).map(|i| (i * 7 % 3) as u8).collect();
        let b: Vec<u8> = (0..30).map(|i| ((i / 3) % 3) as u8).collect();
        let y: Vec<f64> = a
            .iter()
            .zip(&b)
            .map(|(&u, &v)| 1.5 * f64::from(u) - 0.7 * f64::from(v) + 2.0)
            .collect();
        let d = dataset(&[a, b], y);
        let folds: Vec<usize> = (0..30).map(|i| i % 3).collect();
        let r = ridge_predictivity(&d, &[0, 1], &folds, 1e-8).unwrap();
        assert!(r.mean_r2 >= 0.99, "{r:?}");
        assert!(r.degenerate_folds.is_empty());
    }

    #[test]
    fn empty_selection_and_constant_column_are_flagged() {
        let d = dataset(
            &[vec![1; 6], vec![0, 1, 2, 0, 1, 2]],
            vec![1.0, 2.0, 0.0, 3.0, 1.0, 2.0],
        );
        let folds = vec![0, 1, 0, 1, 0, 1];
        let r = ridge_predictivity(&d, &[], &folds, 1.0).unwrap();
        assert!(r.empty_selection);
        assert_eq!(r.mean_r2, 0.0);
        let r = ridge_predictivity(&d, &[0], &folds, 1.0).unwrap();
        assert_eq!(r.degenerate_folds, [0, 1]);
        assert_eq!(r.mean_r2, 0.0);
        assert!(ridge_predictivity(&d, &[0], &[0; 6], 1.0).is_err());
        assert!(ridge_predictivity(&d, &[5], &folds, 1.0).is_err());
    }

    #[test]
    fn dual_form_matches_primal() {
        // Same penalty, more columns than training rows versus a duplicate-free primal.
        let cols: Vec<Vec<u8>> = (0..8)
            .map(|p| (0..6).map(|i| ((i * (p + 1) + p) % 3) as u8).collect())
            .collect();
        let y = vec![0.3, -1.0, 2.0, 0.5, 1.1, -0.4];
        let d = dataset(&cols, y);
        let train = [0, 1, 2, 3];
        let test = [4, 5];
        let sel: Vec<usize> = (0..8).collect();
        let dual = fit_predict(&d, &sel, &train, &test, 0.5).unwrap();
        // primal by hand on the same standardized design
        let g = &d.genotypes;
        let mut cs = Vec::new();
        for &p in &sel {
            let v: Vec<f64> = train.iter().map(|&i| f64::from(g.get(i, p))).collect();
            let mean = v.iter().sum::<f64>() / 4.0;
            let ss: f64 = v.iter().map(|x| (x - mean).powi(2)).sum();
            if ss > 0.0 {
                cs.push((p, mean, (ss / 3.0).sqrt()));
            }
        }
        let x = DMatrix::from_fn(4, cs.len(), |r, j| {
            (f64::from(g.get(train[r], cs[j].0)) - cs[j].1) / cs[j].2
        });
        let ym = train.iter().map(|&i| d.phenotype[i]).sum::<f64>() / 4.0;
        let y = DVector::from_iterator(4, train.iter().map(|&i| d.phenotype[i] - ym));
        let a = x.tr_mul(&x) + DMatrix::identity(cs.len(), cs.len()) * 0.5;
        let beta = a.lu().solve(&x.tr_mul(&y)).unwrap();
        for (r, &i) in test.iter().enumerate() {
            let pred: f64 = cs
                .iter()
                .enumerate()
                .map(|(j, &(p, m, s))| (f64::from(g.get(i, p)) - m) / s * beta[j])
                .sum::<f64>()
                + ym;
            assert!((pred - dual[r]).abs() < 1e-10);
        }
    }
}
