#![no_main]

use libfuzzer_sys::fuzz_target;
use snpcut::datamodel::{GeneAnnotation, GeneInteractionList, SnpMap};
use snpcut::netbuild::build_gi;

fuzz_target!(|data: &[u8]| {
    let Ok((ix, _)) = GeneInteractionList::read_tsv(data) else { return };
    let map = SnpMap::read_tsv(&b"s1\t1\t100\ns2\t1\t5000\ns3\t2\t20\n"[..]).unwrap();
    let genes = GeneAnnotation::read_tsv(&b"A\t1\t50\t200\nB\t2\t1\t30\nC\t1\t4000\t6000\n"[..]).unwrap();
    let _ = build_gi(&map, &genes, &ix, 0);
});
