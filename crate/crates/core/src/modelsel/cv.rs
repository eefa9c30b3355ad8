use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{default_grid, mean_consistency};
use crate::assoc::{residualize, skat_linear_scores, ScoreOptions};
use crate::datamodel::Dataset;
use crate::netbuild::SnpNetwork;
use crate::rng::keyed_hash;
use crate::selection::{parametric_sweep, Solver};
use crate::{Error, Result};

/// How a grid cell's fold cardinalities are compared to the size limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterRule {
    /// Filter when the mean fold selection size exceeds the limit.
    #[default]
    MeanCardinality,
    /// Filter when any single fold exceeds the limit.
    AnyFold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub folds: usize,
    pub lambda_grid: Vec<f64>,
    pub eta_grid: Vec<f64>,
    /// Cells selecting more than this fraction of all SNPs are ignored.
    pub max_selected_frac: f64,
    pub filter: FilterRule,
    pub seed: u64,
    pub solver: Solver,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            folds: 10,
            lambda_grid: default_grid(),
            eta_grid: default_grid(),
            max_selected_frac: 0.01,
            filter: FilterRule::MeanCardinality,
            seed: 0,
            solver: Solver::default(),
        }
    }
}

impl CvConfig {
    pub fn validate(&self) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::invalid(format!(
                "need at least 2 folds, got {}",
                self.folds
            )));
        }
        for (name, grid) in [("lambda", &self.lambda_grid), ("eta", &self.eta_grid)] {
            if grid.is_empty() {
                return Err(Error::invalid(format!("{name} grid is empty")));
            }
            if grid.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::invalid(format!(
                    "{name} grid values must be finite and nonnegative"
                )));
            }
        }
        if !(self.max_selected_frac > 0.0 && self.max_selected_frac <= 1.0) {
            return Err(Error::invalid(format!(
                "max_selected_frac must lie in (0, 1], got {}",
                self.max_selected_frac
            )));
        }
        Ok(())
    }
}

/// Produces association scores from a training subset.
pub trait Scorer: Sync {
    fn describe(&self) -> String;
    fn scores(&self, train: &Dataset) -> Result<Vec<f64>>;
}

/// Covariate-residualized linear-kernel scores.
#[derive(Debug, Clone, Default)]
pub struct SkatScorer {
    pub options: ScoreOptions,
}

impl Scorer for SkatScorer {
    fn describe(&self) -> String {
        self.options.describe()
    }

    fn scores(&self, train: &Dataset) -> Result<Vec<f64>> {
        let y = residualize(&train.phenotype, train.covariates.as_ref())?;
        Ok(skat_linear_scores(&train.genotypes, &y, &self.options)?.c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellReport {
    pub lambda: f64,
    pub eta: f64,
    /// Selection made on the training part of each fold, indexed by fold.
    pub fold_selections: Vec<Vec<usize>>,
    pub mean_consistency: f64,
    pub mean_cardinality: f64,
    pub filtered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvReport {
    pub config: CvConfig,
    pub scorer: String,
    pub n_individuals: usize,
    pub n_snps: usize,
    pub fold_sizes: Vec<usize>,
    /// Cells ordered by lambda, then eta, both ascending.
    pub cells: Vec<CellReport>,
    /// Index into `cells`.
    pub chosen: usize,
    pub lambda: f64,
    pub eta: f64,
    /// SNPs selected in every fold at the chosen cell, ascending.
    pub final_selection: Vec<usize>,
    pub final_snp_ids: Vec<String>,
}

/// Assigns each individual to one of `k` folds.
///
/// Individuals are ordered by a seed-keyed hash of their id and dealt out
/// round-robin, so the assignment depends only on the seed and the id set.
pub fn assign_folds(ids: &[String], k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::invalid(format!("need at least 2 folds, got {k}")));
    }
    if ids.len() < k {
        return Err(Error::invalid(format!(
            "{} individuals cannot fill {k} folds",
            ids.len()
        )));
    }
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by(|&a, &b| {
        (keyed_hash(seed, &ids[a]), &ids[a]).cmp(&(keyed_hash(seed, &ids[b]), &ids[b]))
    });
    let mut fold_of = vec![0; ids.len()];
    for (rank, &i) in order.iter().enumerate() {
        fold_of[i] = rank % k;
    }
    Ok(fold_of)
}

fn sorted_unique(grid: &[f64]) -> Vec<f64> {
    let mut v = grid.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Grid search over `(lambda, eta)` with k-fold cross-validation.
///
/// For every fold the scores are recomputed on the training individuals and
/// every grid cell is solved. A cell's stability is the mean pairwise
/// consistency of its fold selections. Cells whose selections are too large
/// are discarded; among the rest the most stable wins, ties going to the
/// smaller mean cardinality, then smaller eta, then smaller lambda. The final
/// selection is the intersection of the winning cell's fold selections.
pub fn cross_validate(
    dataset: &Dataset,
    net: &SnpNetwork,
    config: &CvConfig,
    scorer: &dyn Scorer,
) -> Result<CvReport> {
    config.validate()?;
    let g = &dataset.genotypes;
    let n = g.n_snps();
    if net.snp_ids() != g.snp_ids() {
        return Err(Error::invalid(
            "network nodes and genotype columns must list the same SNPs in the same order",
        ));
    }
    let k = config.folds;
    let fold_of = assign_folds(dataset.individual_ids(), k, config.seed)?;
    let lambdas = sorted_unique(&config.lambda_grid);
    let etas = sorted_unique(&config.eta_grid);

    let fold_scores = (0..k)
        .into_par_iter()
        .map(|fold| {
            let train: Vec<usize> = (0..fold_of.len()).filter(|&i| fold_of[i] != fold).collect();
            scorer.scores(&dataset.select_rows(&train))
        })
        .collect::<Result<Vec<_>>>()?;
    for s in &fold_scores {
        if s.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: s.len(),
            });
        }
    }

    // sweeps[fold * lambdas.len() + l][e] = selected indices
    let sweeps = (0..k * lambdas.len())
        .into_par_iter()
        .map(|task| {
            let (fold, l) = (task / lambdas.len(), task % lambdas.len());
            let results =
                parametric_sweep(&fold_scores[fold], net, lambdas[l], &etas, config.solver)?;
            Ok(results.into_iter().map(|r| r.selected).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;

    let limit = config.max_selected_frac * n as f64;
    let mut cells = Vec::with_capacity(lambdas.len() * etas.len());
    for (l, &lambda) in lambdas.iter().enumerate() {
        for (e, &eta) in etas.iter().enumerate() {
            let fold_selections: Vec<Vec<usize>> = (0..k)
                .map(|fold| sweeps[fold * lambdas.len() + l][e].clone())
                .collect();
            let sizes: Vec<f64> = fold_selections.iter().map(|s| s.len() as f64).collect();
            let mean_cardinality = sizes.iter().sum::<f64>() / k as f64;
            let filtered = match config.filter {
                FilterRule::MeanCardinality => mean_cardinality > limit,
                FilterRule::AnyFold => sizes.iter().any(|&s| s > limit),
            };
            cells.push(CellReport {
                lambda,
                eta,
                mean_consistency: mean_consistency(&fold_selections, n),
                mean_cardinality,
                fold_selections,
                filtered,
            });
        }
    }

    let chosen = (0..cells.len())
        .filter(|&i| !cells[i].filtered)
        .min_by(|&a, &b| {
            let (x, y) = (&cells[a], &cells[b]);
            y.mean_consistency
                .total_cmp(&x.mean_consistency)
                .then(x.mean_cardinality.total_cmp(&y.mean_cardinality))
                .then(x.eta.total_cmp(&y.eta))
                .then(x.lambda.total_cmp(&y.lambda))
        })
        .ok_or_else(|| {
            Error::Infeasible(format!(
                "every one of the {} grid cells selects more than {} of {n} SNPs; \
                 extend the grids toward larger lambda or eta, or raise max_selected_frac",
                cells.len(),
                config.max_selected_frac
            ))
        })?;

    let cell = &cells[chosen];
    let mut common: BTreeSet<usize> = cell.fold_selections[0].iter().copied().collect();
    for s in &cell.fold_selections[1..] {
        let other: BTreeSet<usize> = s.iter().copied().collect();
        common = common.intersection(&other).copied().collect();
    }
    let final_selection: Vec<usize> = common.into_iter().collect();
    for s in &cell.fold_selections {
        assert!(final_selection.iter().all(|p| s.binary_search(p).is_ok()));
    }

    let mut fold_sizes = vec![0; k];
    for &f in &fold_of {
        fold_sizes[f] += 1;
    }
    Ok(CvReport {
        config: config.clone(),
        scorer: scorer.describe(),
        n_individuals: dataset.n_individuals(),
        n_snps: n,
        fold_sizes,
        lambda: cell.lambda,
        eta: cell.eta,
        final_snp_ids: final_selection
            .iter()
            .map(|&p| g.snp_ids()[p].clone())
            .collect(),
        final_selection,
        chosen,
        cells,
    })
}
