#![no_main]

use libfuzzer_sys::fuzz_target;
use snpcut::datamodel::SnpMap;
use snpcut::netbuild::build_gs;

fuzz_target!(|data: &[u8]| {
    let Ok(map) = SnpMap::read_tsv(data) else { return };
    let mut buf = Vec::new();
    map.write_tsv(&mut buf).unwrap();
    assert_eq!(SnpMap::read_tsv(buf.as_slice()).unwrap(), map);
    let (net, _) = build_gs(&map);
    assert!(net.n_edges() < map.len());
});
