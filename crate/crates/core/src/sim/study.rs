use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::phenotype::expected_heritability;
use super::scenario::random_subset;
use super::{
    place_causal, score_selection, simulate_genotypes, simulate_phenotype, Scenario, ScenarioKind,
};
use super::{SelectionMetrics, SimulationConfig};
use crate::assoc::{univariate_baseline, ScoreOptions};
use crate::datamodel::Dataset;
use crate::modelsel::{cross_validate, CvConfig, SkatScorer};
use crate::netbuild::{build_network, NetworkKind, SnpNetwork};
use crate::numfmt::fmt_num;
use crate::rng::{derive_seed, stream};
use crate::{Error, Result};

/// A selection procedure compared in a study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Method {
    /// Per-SNP t-tests with Bonferroni threshold `alpha / n`.
    Univariate { alpha: f64 },
    /// Network-regularized min-cut selection tuned by cross-validation;
    /// evaluated once per study network.
    NetworkCut,
    /// Returns the causal set.
    Oracle,
    /// A uniform random set of `n_causal` SNPs.
    Random,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Univariate { .. } => "univariate",
            Method::NetworkCut => "snpcut",
            Method::Oracle => "oracle",
            Method::Random => "random",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    /// Genome, effect and noise settings; `simulation.scenario.kind` is
    /// ignored in favour of `scenarios`.
    pub simulation: SimulationConfig,
    pub scenarios: Vec<ScenarioKind>,
    pub methods: Vec<Method>,
    pub networks: Vec<NetworkKind>,
    pub repeats: usize,
    pub cv: CvConfig,
    pub score_options: ScoreOptions,
    /// Fraction of each network's edges removed before selection.
    pub remove_edges_frac: f64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        let simulation = SimulationConfig::default();
        let window = simulation.layout.window;
        StudyConfig {
            simulation,
            scenarios: ScenarioKind::ALL.to_vec(),
            methods: vec![Method::Univariate { alpha: 0.05 }, Method::NetworkCut],
            networks: vec![
                NetworkKind::Gs,
                NetworkKind::Gm { window },
                NetworkKind::Gi { window },
            ],
            repeats: 30,
            // 1% of 1,000 SNPs cannot hold 20 causal SNPs or one gene window
            cv: CvConfig {
                max_selected_frac: 0.1,
                ..CvConfig::default()
            },
            score_options: ScoreOptions::default(),
            remove_edges_frac: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub scenario: ScenarioKind,
    pub method: String,
    pub network: Option<String>,
    pub repeats: usize,
    pub fscore_mean: f64,
    /// Standard error of the mean; absent for a single repeat.
    pub fscore_se: Option<f64>,
    pub power_mean: f64,
    pub fdr_mean: f64,
    pub selected_mean: f64,
    /// F-score of every repeat, in repeat order.
    pub fscores: Vec<f64>,
    /// Repeats where cross-validation filtered every grid cell; they count
    /// as empty selections.
    pub infeasible_repeats: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub expected_heritability: f64,
    pub rows: Vec<StudyRow>,
}

impl StudyReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "scenario\tmethod\tnetwork\trepeats\tfscore_mean\tfscore_se\tpower_mean\tfdr_mean\tselected_mean\tinfeasible_repeats\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.scenario,
                r.method,
                r.network.as_deref().unwrap_or("NA"),
                r.repeats,
                fmt_num(r.fscore_mean),
                r.fscore_se.map_or_else(|| "NA".to_string(), fmt_num),
                fmt_num(r.power_mean),
                fmt_num(r.fdr_mean),
                fmt_num(r.selected_mean),
                r.infeasible_repeats,
            );
        }
        out
    }
}

/// (method, network) pairs evaluated per scenario, in report order.
fn cells(config: &StudyConfig) -> Vec<(Method, Option<NetworkKind>)> {
    let mut out = Vec::new();
    for &m in &config.methods {
        if m == Method::NetworkCut {
            out.extend(config.networks.iter().map(|&k| (m, Some(k))));
        } else {
            out.push((m, None));
        }
    }
    out
}

/// Runs every (scenario, method, network) cell on `repeats` independent
/// simulated data sets and aggregates power, FDR and F-score.
///
/// Repeat `r` draws everything from streams seeded by
/// `derive_seed(seed, "repeat", r)`, so results do not depend on evaluation
/// order or thread count.
pub fn run_study(config: &StudyConfig) -> Result<StudyReport> {
    config.simulation.validate()?;
    config.cv.validate()?;
    if config.repeats == 0 {
        return Err(Error::invalid("repeats must be at least 1"));
    }
    if config.scenarios.is_empty() || config.methods.is_empty() {
        return Err(Error::invalid(
            "a study needs at least one scenario and one method",
        ));
    }
    if config.methods.contains(&Method::NetworkCut) && config.networks.is_empty() {
        return Err(Error::invalid(
            "the snpcut method needs at least one network",
        ));
    }
    for m in &config.methods {
        if let Method::Univariate { alpha } = m {
            if !(0.0..=1.0).contains(alpha) {
                return Err(Error::invalid(format!(
                    "alpha must lie in [0, 1], got {alpha}"
                )));
            }
        }
    }
    let cells = cells(config);
    let per_repeat = (0..config.repeats)
        .into_par_iter()
        .map(|r| run_repeat(config, &cells, r as u64))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for (s, &scenario) in config.scenarios.iter().enumerate() {
        for (c, (method, network)) in cells.iter().enumerate() {
            let metrics: Vec<&SelectionMetrics> =
                per_repeat.iter().map(|rep| &rep[s][c].0).collect();
            let mut row = aggregate(scenario, *method, *network, &metrics);
            row.infeasible_repeats = per_repeat.iter().filter(|rep| rep[s][c].1).count();
            rows.push(row);
        }
    }
    let sim = &config.simulation;
    Ok(StudyReport {
        config: config.clone(),
        expected_heritability: expected_heritability(
            sim.effect_sd,
            sim.noise_sd,
            sim.scenario.n_causal,
            sim.maf_low,
        ),
        rows,
    })
}

fn aggregate(
    scenario: ScenarioKind,
    method: Method,
    network: Option<NetworkKind>,
    metrics: &[&SelectionMetrics],
) -> StudyRow {
    let r = metrics.len() as f64;
    let mean = |f: fn(&SelectionMetrics) -> f64| metrics.iter().map(|m| f(m)).sum::<f64>() / r;
    let fscores: Vec<f64> = metrics.iter().map(|m| m.fscore).collect();
    let fscore_mean = mean(|m| m.fscore);
    let fscore_se = (metrics.len() > 1).then(|| {
        let var = fscores
            .iter()
            .map(|f| (f - fscore_mean).powi(2))
            .sum::<f64>()
            / (r - 1.0);
        (var / r).sqrt()
    });
    StudyRow {
        scenario,
        method: method.label().to_string(),
        network: network.map(|k| k.label().to_string()),
        repeats: metrics.len(),
        fscore_mean,
        fscore_se,
        power_mean: mean(|m| m.power),
        fdr_mean: mean(|m| m.fdr),
        selected_mean: mean(|m| m.n_selected as f64),
        fscores,
        infeasible_repeats: 0,
    }
}

/// Metrics of one repeat, indexed `[scenario][cell]`.
fn run_repeat(
    config: &StudyConfig,
    cells: &[(Method, Option<NetworkKind>)],
    r: u64,
) -> Result<Vec<Vec<(SelectionMetrics, bool)>>> {
    let seed = derive_seed(config.simulation.seed, "repeat", r);
    let base = SimulationConfig {
        seed,
        ..config.simulation.clone()
    };
    let genome = simulate_genotypes(&base)?;
    let n = genome.genotypes.n_snps();

    let mut networks: Vec<(NetworkKind, SnpNetwork)> = Vec::new();
    for &kind in &config.networks {
        let (net, _) = build_network(
            kind,
            &genome.map,
            Some(&genome.genes),
            Some(&genome.interactions),
        )?;
        let net = if config.remove_edges_frac > 0.0 {
            net.remove_edges(
                config.remove_edges_frac,
                derive_seed(seed, "edges", kind_index(kind)),
            )?
        } else {
            net
        };
        networks.push((kind, net));
    }

    let mut out = Vec::with_capacity(config.scenarios.len());
    for &kind in &config.scenarios {
        let letter = kind.letter();
        let scenario = Scenario::new(kind, base.scenario.n_causal);
        let mut rng = stream(seed, &format!("causal-{letter}"), 0);
        let causal = place_causal(
            scenario,
            &genome.map,
            &genome.genes,
            &genome.interactions,
            base.layout.window,
            &mut rng,
        )?;
        let sim = SimulationConfig {
            seed: derive_seed(seed, &format!("phenotype-{letter}"), 0),
            scenario,
            ..base.clone()
        };
        let y = simulate_phenotype(&genome.genotypes, &causal, &sim)?;
        let dataset = Dataset {
            genotypes: genome.genotypes.clone(),
            phenotype: y.values().to_vec(),
            covariates: None,
        };
        let mut metrics = Vec::with_capacity(cells.len());
        for &(method, network) in cells {
            let mut infeasible = false;
            let selected = match method {
                Method::Univariate { alpha } => {
                    univariate_baseline(&dataset.genotypes, &dataset.phenotype, None, alpha)?
                        .selected
                }
                Method::NetworkCut => {
                    let kind = network.expect("network-cut cells carry a network");
                    let net = &networks
                        .iter()
                        .find(|(k, _)| *k == kind)
                        .expect("built above")
                        .1;
                    let cv = CvConfig {
                        seed: derive_seed(seed, &format!("cv-{letter}"), 0),
                        ..config.cv.clone()
                    };
                    let scorer = SkatScorer {
                        options: config.score_options.clone(),
                    };
                    match cross_validate(&dataset, net, &cv, &scorer) {
                        Ok(report) => report.final_selection,
                        // no admissible grid cell: the protocol selects nothing
                        Err(e) if e.is_infeasible() => {
                            infeasible = true;
                            Vec::new()
                        }
                        Err(e) => return Err(e),
                    }
                }
                Method::Oracle => causal.clone(),
                Method::Random => {
                    let mut rng = stream(seed, &format!("random-{letter}"), 0);
                    random_subset(n, scenario.n_causal, &mut rng)
                }
            };
            metrics.push((score_selection(&selected, &causal, n), infeasible));
        }
        out.push(metrics);
    }
    Ok(out)
}

fn kind_index(kind: NetworkKind) -> u64 {
    match kind {
        NetworkKind::Gs => 0,
        NetworkKind::Gm { .. } => 1,
        NetworkKind::Gi { .. } => 2,
    }
}
