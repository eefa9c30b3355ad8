use rand_distr::{Distribution, Normal};

use super::SimulationConfig;
use crate::datamodel::{GenotypeMatrix, Phenotype};
use crate::rng::{self, StreamRng};
use crate::{Error, Result};

/// E[2q(1-q)] for q uniform on [maf_low, 0.5].
fn mean_genotype_variance(maf_low: f64) -> f64 {
    let a = maf_low.clamp(0.0, 0.5);
    if a >= 0.5 {
        return 0.5;
    }
    let eq = (a + 0.5) / 2.0;
    let eq2 = (0.125 - a * a * a) / (3.0 * (0.5 - a));
    2.0 * (eq - eq2)
}

/// Expected share of phenotypic variance due to the causal SNPs.
pub fn expected_heritability(effect_sd: f64, noise_sd: f64, n_causal: usize, maf_low: f64) -> f64 {
    let genetic = n_causal as f64 * effect_sd * effect_sd * mean_genotype_variance(maf_low);
    genetic / (genetic + noise_sd * noise_sd)
}

/// Inverse of [`expected_heritability`] in `effect_sd`.
pub fn effect_sd_for_heritability(h2: f64, noise_sd: f64, n_causal: usize, maf_low: f64) -> f64 {
    let per_snp = n_causal as f64 * mean_genotype_variance(maf_low);
    (h2 / (1.0 - h2) * noise_sd * noise_sd / per_snp).sqrt()
}

/// Effect sizes of the causal SNPs, drawn from the config's `effects` stream.
pub fn draw_effects(config: &SimulationConfig, n_causal: usize) -> Vec<f64> {
    let normal = Normal::new(0.0, config.effect_sd).expect("validated effect_sd");
    let mut rng = rng::stream(config.seed, "effects", 0);
    (0..n_causal).map(|_| normal.sample(&mut rng)).collect()
}

/// `y_i = sum_j w_j g_{i, causal_j} + e_i` with `e_i ~ N(0, noise_sd^2)`.
pub fn phenotype_from_effects(
    g: &GenotypeMatrix,
    causal: &[usize],
    effects: &[f64],
    noise_sd: f64,
    rng: &mut StreamRng,
) -> Result<Vec<f64>> {
    if causal.len() != effects.len() {
        return Err(Error::LengthMismatch {
            expected: causal.len(),
            actual: effects.len(),
        });
    }
    if let Some(&p) = causal.iter().find(|&&p| p >= g.n_snps()) {
        return Err(Error::invalid(format!("causal SNP {p} out of range")));
    }
    if !(noise_sd.is_finite() && noise_sd >= 0.0) {
        return Err(Error::invalid(format!(
            "noise_sd must be finite and nonnegative, got {noise_sd}"
        )));
    }
    let mut y = vec![0.0; g.n_individuals()];
    for (&p, &w) in causal.iter().zip(effects) {
        for (yi, &v) in y.iter_mut().zip(g.column(p)) {
            *yi += w * f64::from(v);
        }
    }
    if noise_sd > 0.0 {
        let normal = Normal::new(0.0, noise_sd).expect("checked noise_sd");
        for yi in &mut y {
            *yi += normal.sample(rng);
        }
    }
    Ok(y)
}

/// Additive phenotype with normal effects on `causal` and normal noise.
/// Deterministic given `config.seed`.
pub fn simulate_phenotype(
    g: &GenotypeMatrix,
    causal: &[usize],
    config: &SimulationConfig,
) -> Result<Phenotype> {
    config.validate()?;
    let effects = draw_effects(config, causal.len());
    let mut rng = rng::stream(config.seed, "noise", 0);
    let y = phenotype_from_effects(g, causal, &effects, config.noise_sd, &mut rng)?;
    Phenotype::new(g.individual_ids().to_vec(), y)
}
