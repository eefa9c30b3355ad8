//! Simulated genomes, causal-SNP placement scenarios and selection studies.
//!
//! Genotypes are independent binomial draws (no linkage disequilibrium) laid
//! out on a regular grid of positions with synthetic genes and gene
//! interactions, so every network kind can be built on them.

mod genome;
mod metrics;
mod phenotype;
mod scenario;
mod study;

pub use genome::{simulate_genotypes, GenomeLayout, SimulatedGenome, SimulationConfig};
pub use metrics::{score_selection, SelectionMetrics};
pub use phenotype::{
    draw_effects, effect_sd_for_heritability, expected_heritability, phenotype_from_effects,
    simulate_phenotype,
};
pub use scenario::{place_causal, Scenario, ScenarioKind};
pub use study::{run_study, Method, StudyConfig, StudyReport, StudyRow};
