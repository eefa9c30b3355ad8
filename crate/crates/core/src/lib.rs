//! Network-guided selection of SNP sets.
//!
//! Given per-SNP association scores and a SNP-SNP network, the selector finds
//! the indicator vector that maximizes association minus a Laplacian
//! connectivity penalty minus an l0 sparsity penalty. The problem is solved
//! exactly by reduction to an s/t minimum cut.
//!
//! Module map:
//! - [`datamodel`]: genotype, phenotype, annotation and covariate types and their TSV formats.
//! - [`netbuild`]: sequence, gene-membership and gene-interaction SNP networks.
//! - [`assoc`]: covariate residualization, linear-kernel association scores, PCA, univariate baseline.
//! - [`selection`]: the min-cut reduction, max-flow solvers and the exact selector.
//! - [`modelsel`]: cross-validated grid search with consistency scoring and ridge predictivity.
//! - [`sim`]: simulated genomes, causal placement scenarios and power/FDR/F-score studies.

pub mod assoc;
pub mod datamodel;
mod error;
pub mod modelsel;
pub mod netbuild;
pub mod numfmt;
pub mod rng;
pub mod selection;
pub mod sim;
mod tsv;

pub use error::{Error, Result};
