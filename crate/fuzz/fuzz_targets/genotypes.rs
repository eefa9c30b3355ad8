#![no_main]

use libfuzzer_sys::fuzz_target;
use snpcut::datamodel::GenotypeMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok((g, _)) = GenotypeMatrix::read_tsv(data) else { return };
    // Whatever parses must survive a write/read cycle unchanged.
    let mut buf = Vec::new();
    g.write_tsv(&mut buf).unwrap();
    let (back, _) = GenotypeMatrix::read_tsv(buf.as_slice()).unwrap();
    assert_eq!(back, g);
    let _ = g.maf_filter(0.1);
});
