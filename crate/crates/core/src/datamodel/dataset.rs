use std::collections::HashMap;

use serde::Serialize;

use super::{Covariates, GenotypeMatrix, Phenotype, SnpMap};
use crate::{Error, Result};

/// Genotypes, phenotype and optional covariates sharing one individual order
/// (lexicographic by id).
#[derive(Debug, Clone)]
pub struct Dataset {
    pub genotypes: GenotypeMatrix,
    pub phenotype: Vec<f64>,
    pub covariates: Option<Covariates>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AlignReport {
    pub joined: usize,
    pub dropped_from_genotypes: usize,
    pub dropped_from_phenotype: usize,
    pub dropped_from_covariates: usize,
}

impl Dataset {
    pub fn n_individuals(&self) -> usize {
        self.genotypes.n_individuals()
    }

    pub fn individual_ids(&self) -> &[String] {
        self.genotypes.individual_ids()
    }

    /// Restricts every component to the given rows.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            genotypes: self.genotypes.select_rows(rows),
            phenotype: rows.iter().map(|&i| self.phenotype[i]).collect(),
            covariates: self.covariates.as_ref().map(|c| c.select_rows(rows)),
        }
    }

    pub fn select_snps(&self, snps: &[usize]) -> Dataset {
        Dataset {
            genotypes: self.genotypes.select_snps(snps),
            phenotype: self.phenotype.clone(),
            covariates: self.covariates.clone(),
        }
    }
}

fn positions(ids: &[String]) -> HashMap<&str, usize> {
    ids.iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect()
}

/// Joins genotypes, phenotype and covariates on individual id.
///
/// Individuals missing from any input are dropped; the result is ordered by id.
pub fn align(
    g: &GenotypeMatrix,
    y: &Phenotype,
    cov: Option<&Covariates>,
) -> Result<(Dataset, AlignReport)> {
    let y_pos = positions(y.individual_ids());
    let c_pos = cov.map(|c| positions(c.individual_ids()));
    let mut common: Vec<(&str, usize)> = g
        .individual_ids()
        .iter()
        .enumerate()
        .filter(|(_, id)| {
            y_pos.contains_key(id.as_str())
                && c_pos.as_ref().is_none_or(|c| c.contains_key(id.as_str()))
        })
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    if common.is_empty() {
        return Err(Error::Empty(
            "genotype, phenotype and covariate files share no individual".into(),
        ));
    }
    common.sort_unstable();
    if common.len() < 2 {
        return Err(Error::invalid(
            "fewer than 2 individuals remain after joining inputs",
        ));
    }
    let g_rows: Vec<usize> = common.iter().map(|&(_, i)| i).collect();
    let phenotype = common
        .iter()
        .map(|&(id, _)| y.values()[y_pos[id]])
        .collect();
    let covariates = match (cov, &c_pos) {
        (Some(c), Some(pos)) => {
            let rows: Vec<usize> = common.iter().map(|&(id, _)| pos[id]).collect();
            let sub = c.select_rows(&rows);
            // Re-validate: the joined subset can violate k < m or turn a column constant.
            Some(Covariates::new(
                sub.individual_ids().to_vec(),
                sub.labels().to_vec(),
                (0..sub.n_covariates())
                    .flat_map(|j| sub.column(j).to_vec())
                    .collect(),
            )?)
        }
        _ => None,
    };
    let joined = common.len();
    let report = AlignReport {
        joined,
        dropped_from_genotypes: g.n_individuals() - joined,
        dropped_from_phenotype: y.len() - joined,
        dropped_from_covariates: cov.map_or(0, |c| c.n_individuals() - joined),
    };
    if report.dropped_from_genotypes
        + report.dropped_from_phenotype
        + report.dropped_from_covariates
        > 0
    {
        log::info!("joined {joined} individuals; report {report:?}");
    }
    Ok((
        Dataset {
            genotypes: g.select_rows(&g_rows),
            phenotype,
            covariates,
        },
        report,
    ))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SnpAlignReport {
    pub joined: usize,
    pub genotype_snps_without_position: usize,
    pub map_snps_without_genotype: usize,
}

/// Reorders genotype columns into canonical map order, keeping SNPs present in both.
pub fn align_snps(
    g: &GenotypeMatrix,
    map: &SnpMap,
) -> Result<(GenotypeMatrix, SnpMap, SnpAlignReport)> {
    let g_pos = positions(g.snp_ids());
    let mut keep_map = Vec::new();
    let mut cols = Vec::new();
    for (i, r) in map.records().iter().enumerate() {
        if let Some(&p) = g_pos.get(r.snp_id.as_str()) {
            keep_map.push(i);
            cols.push(p);
        }
    }
    if cols.is_empty() {
        return Err(Error::Empty(
            "no genotyped SNP appears in the SNP map".into(),
        ));
    }
    let report = SnpAlignReport {
        joined: cols.len(),
        genotype_snps_without_position: g.n_snps() - cols.len(),
        map_snps_without_genotype: map.len() - cols.len(),
    };
    Ok((g.select_snps(&cols), map.subset(&keep_map)?, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geno(ids: &[&str]) -> GenotypeMatrix {
        let m = ids.len();
        GenotypeMatrix::new(
            ids.iter().map(|s| s.to_string()).collect(),
            vec!["s".into()],
            (0..m).map(|i| (i % 3) as u8).collect(),
        )
        .unwrap()
    }

    #[test]
    fn joins_on_common_ids_in_lexicographic_order() {
        let g = geno(&["c", "a", "b", "d"]);
        let y = Phenotype::new(
            vec!["b".into(), "a".into(), "c".into(), "e".into()],
            vec![2.0, 1.0, 3.0, 9.0],
        )
        .unwrap();
        let (d, r) = align(&g, &y, None).unwrap();
        assert_eq!(d.individual_ids(), ["a", "b", "c"]);
        assert_eq!(d.phenotype, [1.0, 2.0, 3.0]);
        // a was row 1 (value 1), b row 2 (value 2), c row 0 (value 0).
        assert_eq!(d.genotypes.column(0), [1, 2, 0]);
        assert_eq!(r.dropped_from_genotypes, 1);
        assert_eq!(r.dropped_from_phenotype, 1);
    }

    #[test]
    fn empty_intersection_is_an_error() {
        let g = geno(&["a", "b"]);
        let y = Phenotype::new(vec!["x".into()], vec![1.0]).unwrap();
        assert!(matches!(align(&g, &y, None), Err(Error::Empty(_))));
    }
}
