use crate::datamodel::Covariates;
use crate::{Error, Result};

/// Relative norm below which a column counts as linearly dependent on the previous ones.
const DEPENDENCE_TOL: f64 = 1e-9;

/// Orthonormal basis of span([1 | covariates]), built by modified
/// Gram-Schmidt with one re-orthogonalization pass.
#[derive(Debug, Clone)]
pub struct CovariateBasis {
    m: usize,
    vectors: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl CovariateBasis {
    /// Basis for an intercept plus the given covariates, over `m` individuals.
    pub fn new(m: usize, cov: Option<&Covariates>) -> Result<Self> {
        let mut columns: Vec<(String, Vec<f64>)> = vec![("intercept".into(), vec![1.0; m])];
        if let Some(c) = cov {
            if c.n_individuals() != m {
                return Err(Error::LengthMismatch {
                    expected: m,
                    actual: c.n_individuals(),
                });
            }
            for (j, label) in c.labels().iter().enumerate() {
                columns.push((label.clone(), c.column(j).to_vec()));
            }
        }
        if columns.len() >= m {
            return Err(Error::invalid(format!(
                "{} design columns need more than {} individuals",
                columns.len(),
                m
            )));
        }
        let mut basis = CovariateBasis {
            m,
            vectors: Vec::new(),
        };
        let mut dependent = Vec::new();
        for (label, mut v) in columns {
            let norm0 = dot(&v, &v).sqrt();
            basis.project_out(&mut v);
            basis.project_out(&mut v);
            let norm = dot(&v, &v).sqrt();
            if norm0 == 0.0 || norm <= DEPENDENCE_TOL * norm0 {
                dependent.push(label);
                continue;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            basis.vectors.push(v);
        }
        if !dependent.is_empty() {
            return Err(Error::RankDeficient { columns: dependent });
        }
        Ok(basis)
    }

    pub fn n_individuals(&self) -> usize {
        self.m
    }

    /// Number of design columns, intercept included.
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Removes the component of `v` lying in the covariate span, in place.
    pub fn project_out(&self, v: &mut [f64]) {
        for q in &self.vectors {
            let coef = dot(q, v);
            v.iter_mut().zip(q).for_each(|(x, qi)| *x -= coef * qi);
        }
    }
}

/// `y` minus its least-squares projection onto `[intercept | covariates]`.
pub fn residualize(y: &[f64], cov: Option<&Covariates>) -> Result<Vec<f64>> {
    let basis = CovariateBasis::new(y.len(), cov)?;
    let mut r = y.to_vec();
    basis.project_out(&mut r);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cov(cols: &[&[f64]]) -> Covariates {
        let m = cols[0].len();
        Covariates::new(
            (0..m).map(|i| format!("i{i}")).collect(),
            (0..cols.len()).map(|j| format!("c{j}")).collect(),
            cols.iter().flat_map(|c| c.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn no_covariates_centers() {
        let r = residualize(&[1.0, 2.0, 3.0, 6.0], None).unwrap();
        for (a, b) in r.iter().zip([-2.0, -1.0, 0.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_linear_fit_leaves_zero() {
        let x = [0.5, -1.0, 2.0, 3.0, 0.0];
        let y: Vec<f64> = x.iter().map(|v| 4.0 - 2.0 * v).collect();
        let r = residualize(&y, Some(&cov(&[&x]))).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-12), "{r:?}");
    }

    #[test]
    fn two_by_two_normal_equations() {
        // y = (1,2,3,4) on [1, (1,1,0,0)]: group means 1.5 and 3.5, so the
        // residual is (-0.5, 0.5, -0.5, 0.5).
        let r = residualize(&[1.0, 2.0, 3.0, 4.0], Some(&cov(&[&[1.0, 1.0, 0.0, 0.0]]))).unwrap();
        for (a, b) in r.iter().zip([-0.5, 0.5, -0.5, 0.5]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(dot(&r, &[1.0, 1.0, 0.0, 0.0]).abs() < 1e-12);
        assert!(r.iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn dependent_columns_are_named() {
        let a = [1.0, 2.0, 0.0, 5.0, 1.0];
        let b: Vec<f64> = a.iter().map(|v| 3.0 * v - 1.0).collect();
        let err = residualize(&[0.0; 5], Some(&cov(&[&a, &b]))).unwrap_err();
        match err {
            Error::RankDeficient { columns } => assert_eq!(columns, ["c1"]),
            other => panic!("unexpected {other}"),
        }
    }
}
