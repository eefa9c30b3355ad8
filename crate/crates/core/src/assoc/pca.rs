use crate::datamodel::{Covariates, GenotypeMatrix};
use crate::{Error, Result};

const MAX_ITERATIONS: usize = 20_000;
const TOLERANCE: f64 = 1e-10;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// Dense symmetric matrix, row-major.
struct Sym {
    d: usize,
    a: Vec<f64>,
}

impl Sym {
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(&self.a[i * self.d..(i + 1) * self.d], v);
        }
    }
}

/// Leading `k` principal-component score vectors of the column-centered
/// genotype matrix, each of unit norm.
///
/// Eigenvectors of the smaller Gram matrix (XX' or X'X) are found one at a
/// time by power iteration, deflating by projection against those already
/// found. Each component's sign makes its largest-magnitude loading positive.
pub fn top_principal_components(g: &GenotypeMatrix, k: usize) -> Result<Covariates> {
    let (m, n) = (g.n_individuals(), g.n_snps());
    if k < 1 || k >= m.min(n) {
        return Err(Error::invalid(format!(
            "number of principal components must satisfy 1 <= k < min(m, n) = {}, got {k}",
            m.min(n)
        )));
    }
    let centered: Vec<Vec<f64>> = (0..n)
        .map(|p| {
            let col = g.column_f64(p);
            let mean = col.iter().sum::<f64>() / m as f64;
            col.into_iter().map(|v| v - mean).collect()
        })
        .collect();

    // Work in the individual space when m <= n, else in SNP space.
    let individual_space = m <= n;
    let d = if individual_space { m } else { n };
    let mut gram = vec![0.0; d * d];
    if individual_space {
        for col in &centered {
            for i in 0..m {
                let ci = col[i];
                if ci != 0.0 {
                    let row = &mut gram[i * m..(i + 1) * m];
                    row.iter_mut().zip(col).for_each(|(r, cj)| *r += ci * cj);
                }
            }
        }
    } else {
        for a in 0..n {
            for b in a..n {
                let v = dot(&centered[a], &centered[b]);
                gram[a * n + b] = v;
                gram[b * n + a] = v;
            }
        }
    }
    let trace: f64 = (0..d).map(|i| gram[i * d + i]).sum();
    let sym = Sym { d, a: gram };

    let mut found: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut work = vec![0.0; d];
    for comp in 0..k {
        let mut v: Vec<f64> = (0..d)
            .map(|i| 1.0 + ((i as f64 + 1.0) * 0.618_033_988_749_895).fract())
            .collect();
        deflate(&mut v, &found);
        normalize(&mut v);
        let mut converged = false;
        let mut residual = f64::INFINITY;
        for _ in 0..MAX_ITERATIONS {
            sym.apply(&v, &mut work);
            deflate(&mut work, &found);
            let theta = dot(&v, &work);
            if theta <= 1e-12 * trace.max(f64::MIN_POSITIVE) {
                return Err(Error::invalid(format!(
                    "centered genotype matrix has rank {comp}, fewer than the {k} requested components"
                )));
            }
            residual = work
                .iter()
                .zip(&v)
                .map(|(w, x)| (w - theta * x).powi(2))
                .sum::<f64>()
                .sqrt()
                / theta;
            normalize(&mut work);
            std::mem::swap(&mut v, &mut work);
            if residual <= TOLERANCE {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                component: comp + 1,
                residual,
            });
        }
        found.push(v);
    }

    let mut values = Vec::with_capacity(m * k);
    for v in &found {
        // Scores u (length m) and loadings X'u (length n).
        let mut scores: Vec<f64> = if individual_space {
            v.clone()
        } else {
            (0..m)
                .map(|i| centered.iter().zip(v).map(|(col, vp)| col[i] * vp).sum())
                .collect()
        };
        normalize(&mut scores);
        let loadings: Vec<f64> = centered.iter().map(|col| dot(col, &scores)).collect();
        let largest = loadings.iter().fold(0.0f64, |a, l| a.max(l.abs()));
        let pivot = loadings
            .iter()
            .find(|l| l.abs() >= largest * (1.0 - 1e-9))
            .copied()
            .unwrap_or(0.0);
        if pivot < 0.0 {
            scores.iter_mut().for_each(|s| *s = -*s);
        }
        values.extend(scores);
    }
    Covariates::new(
        g.individual_ids().to_vec(),
        (1..=k).map(|i| format!("PC{i}")).collect(),
        values,
    )
}

fn deflate(v: &mut [f64], found: &[Vec<f64>]) {
    for q in found {
        let c = dot(q, v);
        v.iter_mut().zip(q).for_each(|(x, qi)| *x -= c * qi);
    }
}
