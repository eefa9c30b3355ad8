#![no_main]

use libfuzzer_sys::fuzz_target;
use snpcut::assoc::residualize;
use snpcut::datamodel::Covariates;

fuzz_target!(|data: &[u8]| {
    let Ok(cov) = Covariates::read_tsv(data) else { return };
    let y: Vec<f64> = (0..cov.n_individuals()).map(|i| i as f64).collect();
    let _ = residualize(&y, Some(&cov));
});
