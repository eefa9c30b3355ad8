use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::phenotype::effect_sd_for_heritability;
use super::{Scenario, ScenarioKind};
use crate::datamodel::{
    Chromosome, Gene, GeneAnnotation, GeneInteractionList, GenotypeMatrix, SnpMap, SnpRecord,
};
use crate::rng;
use crate::{Error, Result};

/// Placement of simulated SNPs and genes. SNPs are split evenly over the
/// chromosomes at a fixed spacing; genes of fixed length repeat every
/// `gene_stride` bp, centered in their stride.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenomeLayout {
    pub chromosomes: usize,
    pub snp_spacing: u64,
    pub gene_length: u64,
    pub gene_stride: u64,
    /// Proximity window used for causal placement and gene-based networks.
    pub window: u64,
    /// Random gene pairs added on top of the planted 5-, 3- and 2-gene cliques.
    pub extra_interactions: usize,
}

impl Default for GenomeLayout {
    fn default() -> Self {
        GenomeLayout {
            chromosomes: 5,
            snp_spacing: 1_000,
            gene_length: 5_000,
            gene_stride: 50_000,
            window: crate::netbuild::DEFAULT_WINDOW,
            extra_interactions: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    /// Individuals.
    pub m: usize,
    /// SNPs.
    pub n: usize,
    /// Allele frequencies are drawn uniformly from `[maf_low, 0.5]`.
    pub maf_low: f64,
    pub scenario: Scenario,
    pub effect_sd: f64,
    pub noise_sd: f64,
    pub seed: u64,
    pub layout: GenomeLayout,
}

pub const DEFAULT_HERITABILITY: f64 = 0.5;

impl Default for SimulationConfig {
    fn default() -> Self {
        let scenario = Scenario::new(ScenarioKind::Random, 20);
        let maf_low = 0.1;
        SimulationConfig {
            m: 200,
            n: 1000,
            maf_low,
            effect_sd: effect_sd_for_heritability(
                DEFAULT_HERITABILITY,
                1.0,
                scenario.n_causal,
                maf_low,
            ),
            noise_sd: 1.0,
            scenario,
            seed: 0,
            layout: GenomeLayout::default(),
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m < 3 || self.n < 1 {
            return Err(Error::invalid(format!(
                "need at least 3 individuals and 1 SNP, got m = {}, n = {}",
                self.m, self.n
            )));
        }
        if !(0.0..=0.5).contains(&self.maf_low) {
            return Err(Error::invalid(format!(
                "maf_low must lie in [0, 0.5], got {}",
                self.maf_low
            )));
        }
        for (name, v) in [("effect_sd", self.effect_sd), ("noise_sd", self.noise_sd)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.scenario.n_causal < 1 || self.scenario.n_causal > self.n {
            return Err(Error::invalid(format!(
                "n_causal must lie in 1..={}, got {}",
                self.n, self.scenario.n_causal
            )));
        }
        let l = &self.layout;
        if l.chromosomes == 0
            || l.snp_spacing == 0
            || l.gene_stride == 0
            || l.gene_length > l.gene_stride
        {
            return Err(Error::invalid(
                "layout needs chromosomes, spacing and stride > 0 and gene_length <= gene_stride",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SimulatedGenome {
    pub genotypes: GenotypeMatrix,
    pub map: SnpMap,
    pub genes: GeneAnnotation,
    pub interactions: GeneInteractionList,
    /// Allele frequency each column was drawn with.
    pub allele_freqs: Vec<f64>,
}

/// Draws a genome: per-SNP frequencies, binomial genotypes, positions, genes
/// and a gene interaction list. Genotype columns follow map order.
pub fn simulate_genotypes(config: &SimulationConfig) -> Result<SimulatedGenome> {
    config.validate()?;
    let (m, n) = (config.m, config.n);
    let layout = &config.layout;

    let mut records = Vec::with_capacity(n);
    let mut gene_list = Vec::new();
    let per = n / layout.chromosomes;
    let extra = n % layout.chromosomes;
    for c in 0..layout.chromosomes {
        let count = per + usize::from(c < extra);
        if count == 0 {
            continue;
        }
        let chrom = Chromosome::new((c + 1).to_string());
        for i in 0..count {
            records.push(SnpRecord {
                snp_id: format!("snp{:06}", records.len()),
                chrom: chrom.clone(),
                pos: i as u64 * layout.snp_spacing + layout.snp_spacing / 2,
            });
        }
        let length = count as u64 * layout.snp_spacing;
        let mut start = (layout.gene_stride - layout.gene_length) / 2;
        while start + layout.gene_length <= length {
            gene_list.push(Gene {
                gene_id: format!("gene{:04}", gene_list.len()),
                chrom: chrom.clone(),
                start,
                end: start + layout.gene_length,
            });
            start += layout.gene_stride;
        }
    }
    let map = SnpMap::new(records)?;
    let genes = GeneAnnotation::new(gene_list)?;

    let mut rng = rng::stream(config.seed, "genotypes", 0);
    let mut allele_freqs = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(m * n);
    for _ in 0..n {
        let q = if config.maf_low >= 0.5 {
            0.5
        } else {
            rng.random_range(config.maf_low..=0.5)
        };
        allele_freqs.push(q);
        for _ in 0..m {
            values.push(u8::from(rng.random_bool(q)) + u8::from(rng.random_bool(q)));
        }
    }
    let genotypes = GenotypeMatrix::new(
        (0..m).map(|i| format!("ind{i:05}")).collect(),
        map.snp_ids(),
        values,
    )?;

    let interactions = plant_interactions(&genes, layout.extra_interactions, config.seed);
    Ok(SimulatedGenome {
        genotypes,
        map,
        genes,
        interactions,
        allele_freqs,
    })
}

/// Cliques of 5, 3 and 2 genes on disjoint random genes (as far as the gene
/// count allows) plus random extra pairs.
fn plant_interactions(genes: &GeneAnnotation, extra: usize, seed: u64) -> GeneInteractionList {
    let mut rng = rng::stream(seed, "interactions", 0);
    let ids: Vec<&str> = genes.genes().iter().map(|g| g.gene_id.as_str()).collect();
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.shuffle(&mut rng);
    let mut pairs = Vec::new();
    let mut next = 0;
    for size in [5, 3, 2] {
        if next + size > order.len() {
            break;
        }
        let block = &order[next..next + size];
        for i in 0..size {
            for j in i + 1..size {
                pairs.push((ids[block[i]], ids[block[j]]));
            }
        }
        next += size;
    }
    if ids.len() >= 2 {
        for _ in 0..extra {
            let a = rng.random_range(0..ids.len());
            let mut b = rng.random_range(0..ids.len() - 1);
            if b >= a {
                b += 1;
            }
            pairs.push((ids[a], ids[b]));
        }
    }
    GeneInteractionList::from_pairs(pairs).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_layout_puts_genes_on_every_chromosome() {
        let g = simulate_genotypes(&SimulationConfig::default()).unwrap();
        assert_eq!(g.genotypes.n_snps(), 1000);
        assert_eq!(g.genes.len(), 20);
        let near = g.genes.nearby_snps(&g.genes.genes()[0], &g.map, 20_000);
        assert_eq!(near.len(), 46);
        // 10 + 3 + 1 clique edges plus at most 5 extras
        assert!(g.interactions.len() >= 14 && g.interactions.len() <= 19);
        assert_eq!(g.genotypes.snp_ids(), g.map.snp_ids().as_slice());
    }

    #[test]
    fn half_maf_floor_fixes_frequencies() {
        let cfg = SimulationConfig {
            maf_low: 0.5,
            n: 30,
            ..SimulationConfig::default()
        };
        let g = simulate_genotypes(&cfg).unwrap();
        assert!(g.allele_freqs.iter().all(|&q| q == 0.5));
    }

    #[test]
    fn same_seed_same_genome() {
        let cfg = SimulationConfig {
            n: 50,
            m: 20,
            ..SimulationConfig::default()
        };
        let a = simulate_genotypes(&cfg).unwrap();
        let b = simulate_genotypes(&cfg).unwrap();
        assert_eq!(a.genotypes, b.genotypes);
        assert_eq!(a.interactions, b.interactions);
        let c = simulate_genotypes(&SimulationConfig { seed: 1, ..cfg }).unwrap();
        assert_ne!(a.genotypes, c.genotypes);
    }
}
