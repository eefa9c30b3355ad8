#![no_main]

use libfuzzer_sys::fuzz_target;
use snpcut::datamodel::Phenotype;

fuzz_target!(|data: &[u8]| {
    if let Ok((y, _)) = Phenotype::read_tsv(data) {
        assert!(y.values().iter().all(|v| v.is_finite()));
        assert_eq!(y.values().len(), y.individual_ids().len());
    }
});
