//! Cross-validated choice of `(lambda, eta)` and evaluation of selected sets.

mod consistency;
mod cv;
mod grid;
mod ridge;

pub use consistency::{consistency_index, mean_consistency};
pub use cv::{
    assign_folds, cross_validate, CellReport, CvConfig, CvReport, FilterRule, Scorer, SkatScorer,
};
pub use grid::{default_grid, parse_grid};
pub use ridge::{ridge_predictivity, Predictivity, DEFAULT_RIDGE_PENALTY};
