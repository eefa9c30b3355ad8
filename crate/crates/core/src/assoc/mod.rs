//! Per-SNP association with a (covariate-corrected) phenotype.

mod pca;
mod residual;
mod scores;
mod univariate;

pub use pca::top_principal_components;
pub use residual::{residualize, CovariateBasis};
pub use scores::{skat_linear_scores, AssociationScores, ScoreOptions};
pub use univariate::{univariate_baseline, UnivariateResult};
