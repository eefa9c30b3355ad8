#![no_main]

use libfuzzer_sys::fuzz_target;
use snpcut::netbuild::SnpNetwork;
use snpcut::selection::{select, RegularizationParams};

fuzz_target!(|data: &[u8]| {
    let ids: Vec<String> = ["a", "b", "c", "d", "e"].iter().map(|s| s.to_string()).collect();
    let Ok(net) = SnpNetwork::read_tsv(data, &ids) else { return };
    // Weights are written with 10 significant digits.
    let mut buf = Vec::new();
    net.write_tsv(&mut buf).unwrap();
    let back = SnpNetwork::read_tsv(buf.as_slice(), &ids).unwrap();
    assert_eq!(back.n_edges(), net.n_edges());
    for (x, y) in back.edges().iter().zip(net.edges()) {
        assert_eq!((x.a, x.b), (y.a, y.b));
        assert!((x.weight - y.weight).abs() <= 1e-9 * y.weight);
    }
    let params = RegularizationParams::new(1.0, 1.5).unwrap();
    let _ = select(&[3.0, 0.0, 2.0, 1.0, 5.0], &net, params);
});
