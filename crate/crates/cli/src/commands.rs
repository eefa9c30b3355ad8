use std::collections::HashMap;

use anyhow::{bail, ensure, Context};
use serde::Serialize;
use snpcut::assoc::{
    residualize, skat_linear_scores, univariate_baseline, AssociationScores, ScoreOptions,
};
use snpcut::datamodel::{align, load_genotypes, load_snp_list, write_snp_list, Phenotype};
use snpcut::modelsel::{
    assign_folds, cross_validate, parse_grid, ridge_predictivity, CvConfig, CvReport, Predictivity,
    SkatScorer,
};
use snpcut::netbuild::NetworkKind;
use snpcut::numfmt::fmt_num;
use snpcut::selection::{select_with, RegularizationParams, Solver};
use snpcut::sim::{
    effect_sd_for_heritability, run_study, GenomeLayout, Scenario, SimulationConfig, StudyConfig,
};

use crate::args::*;
use crate::inputs::{
    build_from_annotation, load_annotation, load_data, resolve_network, DataSummary, NetworkSource,
    NetworkSummary,
};
use crate::rundir::RunDir;

pub fn build_network(a: &BuildNetworkArgs) -> anyhow::Result<()> {
    let kind = a.network.kind(a.window);
    if !matches!(kind, NetworkKind::Gs) && a.genes.is_none() {
        bail!("--network {} needs --genes", kind.label().to_lowercase());
    }
    if matches!(kind, NetworkKind::Gi { .. }) && a.interactions.is_none() {
        bail!("--network gi needs --interactions");
    }
    let mut run = RunDir::create(&a.common.out_dir, "build-network")?;
    let ann = load_annotation(
        &mut run,
        &a.map,
        a.genes.as_deref(),
        a.interactions.as_deref(),
    )?;
    let net_args = NetworkArgs {
        network: a.network,
        map: Some(a.map.clone()),
        genes: a.genes.clone(),
        interactions: a.interactions.clone(),
        window: a.window,
        network_file: None,
    };
    let (net, build) = build_from_annotation(&net_args, &ann)?;
    run.write_with("network.tsv", |w| net.write_tsv(w))?;
    let summary = NetworkSummary {
        source: format!("{} network built from SNP map", kind.label()),
        interactions: ann.interactions.as_ref().map(|(_, r)| r.clone()),
        build: Some(build),
        nodes: net.n_nodes(),
        edges: net.n_edges(),
        ..NetworkSummary::default()
    };
    run.write_json("build_report.json", &summary)?;
    run.finish(a, a.common.seed, a.common.threads)
}

fn score_options(normalize_phenotype: bool) -> ScoreOptions {
    ScoreOptions {
        normalize_phenotype,
        ..ScoreOptions::default()
    }
}

#[derive(Serialize)]
struct SelectionReport<'a> {
    lambda: f64,
    eta: f64,
    objective: f64,
    cut_value: f64,
    constant: f64,
    n_selected: usize,
    n_snps: usize,
    n_edges: usize,
    solver: Solver,
    data: Option<&'a DataSummary>,
    network: &'a NetworkSummary,
}

pub fn select(a: &SelectArgs) -> anyhow::Result<()> {
    let params = RegularizationParams::new(a.lambda, a.eta)?;
    ensure!(
        a.scores.is_some() || a.genotypes.is_some(),
        "provide --scores, or --genotypes with --phenotype"
    );
    let mut run = RunDir::create(&a.common.out_dir, "select")?;
    let (mut scores, mut data) = match &a.scores {
        Some(path) => {
            run.input(path)?;
            let s = AssociationScores::load(path)
                .with_context(|| format!("loading {}", path.display()))?;
            (Some(s), None)
        }
        None => {
            let (g, y) = (a.genotypes.as_ref().unwrap(), a.phenotype.as_ref().unwrap());
            (
                None,
                Some(load_data(
                    &mut run,
                    g,
                    y,
                    a.covariates.as_deref(),
                    a.pcs,
                    a.maf,
                )?),
            )
        }
    };
    let (net, net_summary) = match (&mut scores, &mut data) {
        (Some(s), _) => resolve_network(&mut run, &a.net, NetworkSource::Scores(s))?,
        (None, Some(d)) => resolve_network(&mut run, &a.net, NetworkSource::Genotypes(d))?,
        (None, None) => unreachable!(),
    };
    let scores = match scores {
        Some(s) => s,
        None => {
            let d = &data.as_ref().unwrap().dataset;
            let y = residualize(&d.phenotype, d.covariates.as_ref())?;
            let s = skat_linear_scores(&d.genotypes, &y, &score_options(a.normalize_phenotype))?;
            run.write_with("scores.tsv", |w| s.write_tsv(w))?;
            s
        }
    };
    let solver = Solver::from(a.solver);
    let result = select_with(&scores.c, &net, params, solver)?;
    let ids: Vec<&str> = result
        .selected
        .iter()
        .map(|&p| scores.snp_ids[p].as_str())
        .collect();
    run.write_with("selected.tsv", |w| write_snp_list(&ids, w))?;
    run.write_json(
        "selection.json",
        &SelectionReport {
            lambda: a.lambda,
            eta: a.eta,
            objective: result.objective,
            cut_value: result.cut_value,
            constant: result.constant,
            n_selected: result.len(),
            n_snps: scores.len(),
            n_edges: net.n_edges(),
            solver,
            data: data.as_ref().map(|d| &d.summary),
            network: &net_summary,
        },
    )?;
    run.finish(a, a.common.seed, a.common.threads)
}

#[derive(Serialize)]
struct CvOutput<'a> {
    data: &'a DataSummary,
    network: &'a NetworkSummary,
    cv: &'a CvReport,
}

pub fn cv(a: &CvArgs) -> anyhow::Result<()> {
    let config = CvConfig {
        folds: a.folds,
        lambda_grid: parse_grid(&a.lambda_grid).context("--lambda-grid")?,
        eta_grid: parse_grid(&a.eta_grid).context("--eta-grid")?,
        max_selected_frac: a.max_selected_frac,
        filter: a.filter.into(),
        seed: a.common.seed,
        solver: a.solver.into(),
    };
    config.validate()?;
    let mut run = RunDir::create(&a.common.out_dir, "cv")?;
    let d = &a.data;
    let mut data = load_data(
        &mut run,
        &d.genotypes,
        &d.phenotype,
        d.covariates.as_deref(),
        d.pcs,
        d.maf,
    )?;
    let (net, net_summary) =
        resolve_network(&mut run, &a.net, NetworkSource::Genotypes(&mut data))?;
    let scorer = SkatScorer {
        options: score_options(a.normalize_phenotype),
    };
    let report = cross_validate(&data.dataset, &net, &config, &scorer)?;
    run.write_json(
        "cv_report.json",
        &CvOutput {
            data: &data.summary,
            network: &net_summary,
            cv: &report,
        },
    )?;
    run.write_with("selected.tsv", |w| write_snp_list(&report.final_snp_ids, w))?;
    run.finish(a, a.common.seed, a.common.threads)
}

pub fn simulate(a: &SimulateArgs) -> anyhow::Result<()> {
    ensure!(
        a.heritability > 0.0 && a.heritability < 1.0,
        "--heritability must lie strictly between 0 and 1"
    );
    ensure!(
        !a.scenario.is_empty(),
        "--scenario needs at least one of a..f"
    );
    ensure!(
        (0.0..=1.0).contains(&a.remove_edges_frac),
        "--remove-edges-frac must lie in [0, 1]"
    );
    let scenario = Scenario::new(a.scenario[0], a.n_causal);
    let simulation = SimulationConfig {
        m: a.m,
        n: a.n,
        maf_low: a.maf_low,
        scenario,
        effect_sd: effect_sd_for_heritability(a.heritability, a.noise_sd, a.n_causal, a.maf_low),
        noise_sd: a.noise_sd,
        seed: a.common.seed,
        layout: GenomeLayout {
            window: a.window,
            ..GenomeLayout::default()
        },
    };
    let mut methods: Vec<_> = a.methods.iter().map(|m| m.method(a.alpha)).collect();
    methods.dedup();
    let mut networks = Vec::new();
    for n in &a.networks {
        let kind = match n {
            SimNetworkChoice::Gs => NetworkKind::Gs,
            SimNetworkChoice::Gm => NetworkKind::Gm { window: a.window },
            SimNetworkChoice::Gi => NetworkKind::Gi { window: a.window },
        };
        if !networks.contains(&kind) {
            networks.push(kind);
        }
    }
    let mut scenarios = a.scenario.clone();
    scenarios.dedup();
    let config = StudyConfig {
        simulation,
        scenarios,
        methods,
        networks,
        repeats: a.repeats,
        cv: CvConfig {
            folds: a.folds,
            lambda_grid: parse_grid(&a.lambda_grid).context("--lambda-grid")?,
            eta_grid: parse_grid(&a.eta_grid).context("--eta-grid")?,
            max_selected_frac: a.max_selected_frac,
            seed: a.common.seed,
            ..CvConfig::default()
        },
        score_options: ScoreOptions::default(),
        remove_edges_frac: a.remove_edges_frac,
    };
    config.simulation.validate()?;
    config.cv.validate()?;
    let mut run = RunDir::create(&a.common.out_dir, "simulate")?;
    let report = run_study(&config)?;
    let mut tsv = format!(
        "# expected heritability {} (effect_sd {}, noise_sd {}); genotypes are simulated without linkage disequilibrium\n",
        fmt_num(report.expected_heritability),
        fmt_num(config.simulation.effect_sd),
        fmt_num(config.simulation.noise_sd)
    );
    tsv.push_str(&report.to_tsv());
    run.write("metrics.tsv", tsv.as_bytes())?;
    run.write_json("metrics.json", &report)?;
    run.finish(a, a.common.seed, a.common.threads)
}

#[derive(Serialize)]
struct EvaluateOutput<'a> {
    n_individuals: usize,
    n_selected: usize,
    folds: usize,
    predictivity: &'a Predictivity,
}

pub fn evaluate(a: &EvaluateArgs) -> anyhow::Result<()> {
    ensure!(a.folds >= 2, "--folds must be at least 2");
    ensure!(
        a.ridge_penalty.is_finite() && a.ridge_penalty >= 0.0,
        "--ridge-penalty must be finite and nonnegative"
    );
    let mut run = RunDir::create(&a.common.out_dir, "evaluate")?;
    for p in [&a.genotypes, &a.phenotype, &a.selection] {
        run.input(p)?;
    }
    let (g, _) = load_genotypes(&a.genotypes)
        .with_context(|| format!("loading {}", a.genotypes.display()))?;
    let (y, _) = Phenotype::load(&a.phenotype)
        .with_context(|| format!("loading {}", a.phenotype.display()))?;
    let ids = load_snp_list(&a.selection)
        .with_context(|| format!("loading {}", a.selection.display()))?;
    let (dataset, _) = align(&g, &y, None)?;
    let index: HashMap<&str, usize> = dataset
        .genotypes
        .snp_ids()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut selected = Vec::with_capacity(ids.len());
    for id in &ids {
        match index.get(id.as_str()) {
            Some(&p) => selected.push(p),
            None => bail!("selected SNP `{id}` is not in the genotype file"),
        }
    }
    let fold_of = assign_folds(dataset.individual_ids(), a.folds, a.common.seed)?;
    let result = ridge_predictivity(&dataset, &selected, &fold_of, a.ridge_penalty)?;
    run.write_json(
        "predictivity.json",
        &EvaluateOutput {
            n_individuals: dataset.n_individuals(),
            n_selected: selected.len(),
            folds: a.folds,
            predictivity: &result,
        },
    )?;
    run.finish(a, a.common.seed, a.common.threads)
}

#[derive(Serialize)]
struct BaselineOutput<'a> {
    alpha: f64,
    threshold: f64,
    n_snps: usize,
    n_selected: usize,
    data: &'a DataSummary,
}

pub fn baseline(a: &BaselineArgs) -> anyhow::Result<()> {
    ensure!((0.0..=1.0).contains(&a.alpha), "--alpha must lie in [0, 1]");
    let mut run = RunDir::create(&a.common.out_dir, "baseline")?;
    let d = &a.data;
    let data = load_data(
        &mut run,
        &d.genotypes,
        &d.phenotype,
        d.covariates.as_deref(),
        d.pcs,
        d.maf,
    )?;
    let ds = &data.dataset;
    let result = univariate_baseline(
        &ds.genotypes,
        &ds.phenotype,
        ds.covariates.as_ref(),
        a.alpha,
    )?;
    let ids = ds.genotypes.snp_ids();
    let mut table = String::from("snp_id\tt_statistic\tp_value\tselected\n");
    let mut chosen = vec![false; ids.len()];
    for &p in &result.selected {
        chosen[p] = true;
    }
    for (p, id) in ids.iter().enumerate() {
        table.push_str(&format!(
            "{id}\t{}\t{}\t{}\n",
            fmt_num(result.t_statistics[p]),
            fmt_num(result.p_values[p]),
            u8::from(chosen[p])
        ));
    }
    run.write("baseline.tsv", table.as_bytes())?;
    let selected: Vec<&str> = result.selected.iter().map(|&p| ids[p].as_str()).collect();
    run.write_with("selected.tsv", |w| write_snp_list(&selected, w))?;
    run.write_json(
        "baseline.json",
        &BaselineOutput {
            alpha: a.alpha,
            threshold: result.threshold,
            n_snps: ids.len(),
            n_selected: result.selected.len(),
            data: &data.summary,
        },
    )?;
    run.finish(a, a.common.seed, a.common.threads)
}
