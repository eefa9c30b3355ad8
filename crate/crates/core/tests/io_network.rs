use proptest::prelude::*;
use snpcut::datamodel::{GeneAnnotation, GeneInteractionList, GenotypeMatrix, Phenotype, SnpMap};
use snpcut::netbuild::{build_gi, build_gm, build_gs, SnpNetwork};

fn genotypes() -> impl Strategy<Value = GenotypeMatrix> {
    (2usize..12, 1usize..8).prop_flat_map(|(m, n)| {
        prop::collection::vec(0u8..=2, m * n).prop_map(move |v| {
            GenotypeMatrix::new(
                (0..m).map(|i| format!("ind{i}")).collect(),
                (0..n).map(|p| format!("rs{p}")).collect(),
                v,
            )
            .unwrap()
        })
    })
}

fn layout() -> impl Strategy<Value = (SnpMap, GeneAnnotation, GeneInteractionList)> {
    (
        prop::collection::vec((1u8..=3, 1u64..2000), 1..40),
        prop::collection::vec((1u8..=3, 1u64..2000, 0u64..300), 1..6),
        prop::collection::vec((0usize..6, 0usize..6), 0..8),
    )
        .prop_map(|(snps, genes, pairs)| {
            let map: String = snps
                .iter()
                .enumerate()
                .map(|(i, (c, p))| format!("snp{i}\t{c}\t{p}\n"))
                .collect();
            let ann: String = genes
                .iter()
                .enumerate()
                .map(|(i, (c, s, len))| format!("g{i}\t{c}\t{s}\t{}\n", s + len))
                .collect();
            let n_genes = genes.len();
            let ix: String = pairs
                .iter()
                .map(|(a, b)| format!("g{}\tg{}\n", a % n_genes, b % n_genes))
                .collect();
            (
                SnpMap::read_tsv(map.as_bytes()).unwrap(),
                GeneAnnotation::read_tsv(ann.as_bytes()).unwrap(),
                GeneInteractionList::read_tsv(ix.as_bytes()).map(|(l, _)| l).unwrap_or_else(|_| {
                    GeneInteractionList::from_pairs(Vec::<(String, String)>::new()).0
                }),
            )
        })
}

fn edge_set(net: &SnpNetwork) -> Vec<(usize, usize)> {
    net.edges().iter().map(|e| (e.a, e.b)).collect()
}

proptest! {
    #[test]
    fn genotype_tsv_round_trip(g in genotypes()) {
        let mut buf = Vec::new();
        g.write_tsv(&mut buf).unwrap();
        let (back, report) = GenotypeMatrix::read_tsv(buf.as_slice()).unwrap();
        prop_assert_eq!(back, g);
        prop_assert_eq!(report.imputed_cells, 0);
    }

    #[test]
    fn phenotype_tsv_round_trip(values in prop::collection::vec(-1e6f64..1e6, 1..20)) {
        let ids = (0..values.len()).map(|i| format!("p{i}")).collect();
        let y = Phenotype::new(ids, values).unwrap();
        let mut buf = Vec::new();
        y.write_tsv(&mut buf).unwrap();
        let (back, _) = Phenotype::read_tsv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.individual_ids(), y.individual_ids());
        for (a, b) in back.values().iter().zip(y.values()) {
            // Ten significant digits on output.
            prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
        }
    }

    #[test]
    fn networks_nest_and_round_trip((map, genes, ix) in layout(), window in 0u64..500) {
        let (gs, _) = build_gs(&map);
        let (gm, _) = build_gm(&map, &genes, window);
        let (gi, _) = build_gi(&map, &genes, &ix, window);
        let (s, m, i) = (edge_set(&gs), edge_set(&gm), edge_set(&gi));
        prop_assert!(s.iter().all(|e| m.contains(e)));
        prop_assert!(m.iter().all(|e| i.contains(e)));
        let chromosomes: std::collections::BTreeSet<&str> =
            map.records().iter().map(|r| r.chrom.as_str()).collect();
        prop_assert_eq!(gs.n_edges(), map.len() - chromosomes.len());
        for net in [&gs, &gm, &gi] {
            let mut buf = Vec::new();
            net.write_tsv(&mut buf).unwrap();
            let back = SnpNetwork::read_tsv(buf.as_slice(), net.snp_ids()).unwrap();
            prop_assert_eq!(&back, net);
        }
    }

    #[test]
    fn edge_removal_takes_the_floor((map, genes, _ix) in layout(), frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let (gm, _) = build_gm(&map, &genes, 100);
        let cut = gm.remove_edges(frac, seed).unwrap();
        let removed = (frac * gm.n_edges() as f64 + 1e-9).floor() as usize;
        prop_assert_eq!(cut.n_edges(), gm.n_edges() - removed.min(gm.n_edges()));
        let kept = edge_set(&cut);
        let all = edge_set(&gm);
        prop_assert!(kept.iter().all(|e| all.contains(e)));
        prop_assert_eq!(cut, gm.remove_edges(frac, seed).unwrap());
    }
}
