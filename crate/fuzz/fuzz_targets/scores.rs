#![no_main]

use libfuzzer_sys::fuzz_target;
use snpcut::assoc::AssociationScores;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = AssociationScores::read_tsv(data) {
        assert!(s.c.iter().all(|c| c.is_finite() && *c >= 0.0));
    }
});
