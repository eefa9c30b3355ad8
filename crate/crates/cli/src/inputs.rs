use std::collections::HashMap;
use std::path::Path;

use anyhow::{bail, Context};
use serde::Serialize;
use snpcut::assoc::{top_principal_components, AssociationScores};
use snpcut::datamodel::{
    align, align_snps, load_genotypes, AlignReport, Covariates, Dataset, GeneAnnotation,
    GeneInteractionList, GenotypeLoadReport, InteractionLoadReport, Phenotype, PhenotypeLoadReport,
    SnpAlignReport, SnpMap,
};
use snpcut::netbuild::{build_network, BuildReport, SnpNetwork};

use crate::args::NetworkArgs;
use crate::rundir::RunDir;

#[derive(Debug, Default, Serialize)]
pub struct DataSummary {
    pub genotypes: Option<GenotypeLoadReport>,
    pub phenotype: Option<PhenotypeLoadReport>,
    pub alignment: Option<AlignReport>,
    pub maf_threshold: f64,
    pub snps_before_maf: usize,
    pub snps_after_maf: usize,
    pub principal_components: usize,
}

/// Genotypes, phenotype and covariates joined on individual id and MAF
/// filtered. Also returns the SNP ids before filtering and the kept columns.
pub struct LoadedData {
    pub dataset: Dataset,
    pub all_snp_ids: Vec<String>,
    pub kept: Vec<usize>,
    pub summary: DataSummary,
}

pub fn load_data(
    run: &mut RunDir,
    genotypes: &Path,
    phenotype: &Path,
    covariates: Option<&Path>,
    pcs: usize,
    maf: f64,
) -> anyhow::Result<LoadedData> {
    run.input(genotypes)?;
    run.input(phenotype)?;
    let (g, g_report) =
        load_genotypes(genotypes).with_context(|| format!("loading {}", genotypes.display()))?;
    let (y, y_report) =
        Phenotype::load(phenotype).with_context(|| format!("loading {}", phenotype.display()))?;
    let cov = match covariates {
        Some(p) => {
            run.input(p)?;
            Some(Covariates::load(p).with_context(|| format!("loading {}", p.display()))?)
        }
        None => None,
    };
    let (mut dataset, a_report) = align(&g, &y, cov.as_ref())?;
    let all_snp_ids = dataset.genotypes.snp_ids().to_vec();
    let (filtered, kept) = dataset
        .genotypes
        .maf_filter(maf)
        .with_context(|| format!("applying MAF threshold {maf}"))?;
    dataset.genotypes = filtered;
    if pcs > 0 {
        let pc = top_principal_components(&dataset.genotypes, pcs)?;
        dataset.covariates = Some(match dataset.covariates.take() {
            Some(c) => merge_covariates(&c, &pc)?,
            None => pc,
        });
    }
    let summary = DataSummary {
        genotypes: Some(g_report),
        phenotype: Some(y_report),
        alignment: Some(a_report),
        maf_threshold: maf,
        snps_before_maf: all_snp_ids.len(),
        snps_after_maf: kept.len(),
        principal_components: pcs,
    };
    Ok(LoadedData {
        dataset,
        all_snp_ids,
        kept,
        summary,
    })
}

fn merge_covariates(a: &Covariates, b: &Covariates) -> anyhow::Result<Covariates> {
    let mut labels = a.labels().to_vec();
    labels.extend(b.labels().iter().cloned());
    let mut values = Vec::new();
    for j in 0..a.n_covariates() {
        values.extend_from_slice(a.column(j));
    }
    for j in 0..b.n_covariates() {
        values.extend_from_slice(b.column(j));
    }
    Ok(Covariates::new(
        a.individual_ids().to_vec(),
        labels,
        values,
    )?)
}

#[derive(Debug, Default, Serialize)]
pub struct NetworkSummary {
    pub source: String,
    pub snp_alignment: Option<SnpAlignReport>,
    pub interactions: Option<InteractionLoadReport>,
    pub build: Option<BuildReport>,
    pub nodes: usize,
    pub edges: usize,
}

pub struct Annotation {
    pub map: SnpMap,
    pub genes: Option<GeneAnnotation>,
    pub interactions: Option<(GeneInteractionList, InteractionLoadReport)>,
}

pub fn load_annotation(
    run: &mut RunDir,
    map: &Path,
    genes: Option<&Path>,
    interactions: Option<&Path>,
) -> anyhow::Result<Annotation> {
    run.input(map)?;
    let snp_map = SnpMap::load(map).with_context(|| format!("loading {}", map.display()))?;
    let genes = match genes {
        Some(p) => {
            run.input(p)?;
            Some(GeneAnnotation::load(p).with_context(|| format!("loading {}", p.display()))?)
        }
        None => None,
    };
    let interactions = match (interactions, &genes) {
        (Some(p), Some(g)) => {
            run.input(p)?;
            Some(
                GeneInteractionList::load(p, g)
                    .with_context(|| format!("loading {}", p.display()))?,
            )
        }
        (Some(_), None) => bail!("--interactions needs --genes"),
        (None, _) => None,
    };
    Ok(Annotation {
        map: snp_map,
        genes,
        interactions,
    })
}

/// Builds a network over `map` from the annotation flags.
pub fn build_from_annotation(
    args: &NetworkArgs,
    ann: &Annotation,
) -> anyhow::Result<(SnpNetwork, BuildReport)> {
    let kind = args.network.kind(args.window);
    Ok(build_network(
        kind,
        &ann.map,
        ann.genes.as_ref(),
        ann.interactions.as_ref().map(|(l, _)| l),
    )?)
}

/// Network and aligned data for `select` and `cv`.
///
/// With `--network-file` the edge list is read over `universe` (SNP ids
/// before filtering) and restricted to `kept`. With `--map` the genotype
/// columns are reordered to map order and the network is built on the SNPs
/// present in both.
pub enum NetworkSource<'a> {
    Genotypes(&'a mut LoadedData),
    Scores(&'a mut AssociationScores),
}

pub fn resolve_network(
    run: &mut RunDir,
    args: &NetworkArgs,
    source: NetworkSource<'_>,
) -> anyhow::Result<(SnpNetwork, NetworkSummary)> {
    if let Some(path) = &args.network_file {
        run.input(path)?;
        let (universe, kept): (Vec<String>, Vec<usize>) = match &source {
            NetworkSource::Genotypes(d) => (d.all_snp_ids.clone(), d.kept.clone()),
            NetworkSource::Scores(s) => (s.snp_ids.clone(), (0..s.len()).collect()),
        };
        let full = SnpNetwork::load(path, &universe)
            .with_context(|| format!("loading {}", path.display()))?;
        let net = full.induced_subgraph(&kept);
        let summary = NetworkSummary {
            source: format!("edge list {}", path.display()),
            nodes: net.n_nodes(),
            edges: net.n_edges(),
            ..NetworkSummary::default()
        };
        return Ok((net, summary));
    }
    let Some(map_path) = &args.map else {
        bail!("provide either --network-file or --map (with --genes/--interactions as the network kind needs)");
    };
    let ann = load_annotation(
        run,
        map_path,
        args.genes.as_deref(),
        args.interactions.as_deref(),
    )?;
    let (ann, report) = match source {
        NetworkSource::Genotypes(d) => {
            let (g, map, report) = align_snps(&d.dataset.genotypes, &ann.map)?;
            d.dataset.genotypes = g;
            (Annotation { map, ..ann }, report)
        }
        NetworkSource::Scores(s) => {
            let pos: HashMap<&str, usize> = s
                .snp_ids
                .iter()
                .enumerate()
                .map(|(i, id)| (id.as_str(), i))
                .collect();
            let mut keep_map = Vec::new();
            let mut order = Vec::new();
            for (i, r) in ann.map.records().iter().enumerate() {
                if let Some(&p) = pos.get(r.snp_id.as_str()) {
                    keep_map.push(i);
                    order.push(p);
                }
            }
            if order.is_empty() {
                bail!("no scored SNP appears in the SNP map");
            }
            let report = SnpAlignReport {
                joined: order.len(),
                genotype_snps_without_position: s.len() - order.len(),
                map_snps_without_genotype: ann.map.len() - order.len(),
            };
            *s = s.subset(&order);
            let map = ann.map.subset(&keep_map)?;
            (Annotation { map, ..ann }, report)
        }
    };
    finish_build(args, &ann, Some(report))
}

fn finish_build(
    args: &NetworkArgs,
    ann: &Annotation,
    snp_alignment: Option<SnpAlignReport>,
) -> anyhow::Result<(SnpNetwork, NetworkSummary)> {
    let (net, build) = build_from_annotation(args, ann)?;
    let summary = NetworkSummary {
        source: format!(
            "{} network built from SNP map",
            args.network.kind(args.window).label()
        ),
        snp_alignment,
        interactions: ann.interactions.as_ref().map(|(_, r)| r.clone()),
        build: Some(build),
        nodes: net.n_nodes(),
        edges: net.n_edges(),
    };
    Ok((net, summary))
}
