#![no_main]

use libfuzzer_sys::fuzz_target;
use snpcut::datamodel::{GeneAnnotation, SnpMap};
use snpcut::netbuild::build_gm;

fuzz_target!(|data: &[u8]| {
    let Ok(genes) = GeneAnnotation::read_tsv(data) else { return };
    let map = SnpMap::read_tsv(&b"s1\t1\t100\ns2\t1\t5000\ns3\t2\t20\ns4\tX\t7\n"[..]).unwrap();
    let _ = build_gm(&map, &genes, 1000);
});
