use proptest::prelude::*;
use snpcut::netbuild::{Edge, SnpNetwork};
use snpcut::selection::{select, select_with, RegularizationParams, Solver};

#[derive(Debug, Clone)]
struct Problem {
    c: Vec<f64>,
    edges: Vec<(usize, usize, f64)>,
    lambda: f64,
    eta: f64,
}

/// Small integer-valued instances, so optimal ties are exact.
fn problem() -> impl Strategy<Value = Problem> {
    (1usize..=10).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        (
            prop::collection::vec(0u8..=6, n),
            prop::collection::vec(prop::option::weighted(0.3, 1u8..=3), m),
            0u8..=4,
            0u8..=6,
        )
            .prop_map(move |(c, w, lambda, eta)| Problem {
                c: c.into_iter().map(f64::from).collect(),
                edges: pairs
                    .iter()
                    .zip(&w)
                    .filter_map(|(&(a, b), w)| w.map(|w| (a, b, f64::from(w))))
                    .collect(),
                lambda: f64::from(lambda) / 2.0,
                eta: f64::from(eta),
            })
    })
}

impl Problem {
    fn network(&self) -> SnpNetwork {
        SnpNetwork::new(
            (0..self.c.len()).map(|i| format!("n{i}")).collect(),
            self.edges.iter().map(|&(a, b, weight)| Edge { a, b, weight }),
        )
        .unwrap()
    }

    fn value(&self, mask: u32) -> f64 {
        let on = |i: usize| mask >> i & 1 == 1;
        let gain: f64 = (0..self.c.len()).filter(|&i| on(i)).map(|i| self.c[i] - self.eta).sum();
        let cut: f64 = self.edges.iter().filter(|e| on(e.0) != on(e.1)).map(|e| e.2).sum();
        gain - self.lambda * cut
    }

    /// Optimum and the intersection of all optimal sets.
    fn oracle(&self) -> (f64, Vec<usize>) {
        let n = self.c.len();
        let values: Vec<f64> = (0..1u32 << n).map(|m| self.value(m)).collect();
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let meet = (0..1u32 << n)
            .filter(|&m| values[m as usize] == best)
            .fold(u32::MAX, |a, m| a & m);
        (best, (0..n).filter(|&i| meet >> i & 1 == 1).collect())
    }

    fn params(&self) -> RegularizationParams {
        RegularizationParams::new(self.lambda, self.eta).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn returns_the_minimal_optimal_set(p in problem()) {
        let (best, minimal) = p.oracle();
        for solver in [Solver::BoykovKolmogorov, Solver::Dinic] {
            let r = select_with(&p.c, &p.network(), p.params(), solver).unwrap();
            prop_assert_eq!(r.objective, best);
            prop_assert_eq!(&r.selected, &minimal);
        }
    }

    #[test]
    fn common_rescaling_keeps_the_selection(p in problem(), j in -20i32..20) {
        // Powers of two scale exactly, so optimal ties survive.
        let k = 2f64.powi(j);
        let scaled = Problem {
            c: p.c.iter().map(|c| c * k).collect(),
            lambda: p.lambda * k,
            eta: p.eta * k,
            ..p.clone()
        };
        let a = select(&p.c, &p.network(), p.params()).unwrap();
        let b = select(&scaled.c, &scaled.network(), scaled.params()).unwrap();
        prop_assert_eq!(a.selected, b.selected);
        prop_assert!((b.objective - k * a.objective).abs() <= 1e-9 * (1.0 + b.objective.abs()));
    }

    #[test]
    fn raising_a_score_never_drops_that_node(p in problem(), node in 0usize..10, bump in 0.5f64..5.0) {
        let node = node % p.c.len();
        let a = select(&p.c, &p.network(), p.params()).unwrap();
        let mut c = p.c.clone();
        c[node] += bump;
        let b = select(&c, &p.network(), p.params()).unwrap();
        if a.selected.contains(&node) {
            prop_assert!(b.selected.contains(&node));
        }
        prop_assert!(b.objective >= a.objective);
    }

    #[test]
    fn laplacian_form_matches_boundary_weight(p in problem(), mask in any::<u32>()) {
        let net = p.network();
        let n = p.c.len();
        let f: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let x: Vec<f64> = f.iter().map(|&b| f64::from(u8::from(b))).collect();
        prop_assert_eq!(net.laplacian_quadratic(&x).unwrap(), net.boundary_weight(&f));
        let constant = vec![2.5; n];
        prop_assert_eq!(net.laplacian_quadratic(&constant).unwrap(), 0.0);
    }
}

#[test]
fn huge_and_tiny_magnitudes_stay_exact() {
    let net = SnpNetwork::new(
        vec!["a".into(), "b".into(), "c".into()],
        [Edge { a: 0, b: 1, weight: 1.0 }, Edge { a: 1, b: 2, weight: 1.0 }],
    )
    .unwrap();
    for scale in [1e-12, 1e-6, 1.0, 1e6, 1e12] {
        let c = [3.0 * scale, 0.0, 3.0 * scale];
        let params = RegularizationParams::new(scale, scale).unwrap();
        let r = select(&c, &net, params).unwrap();
        assert_eq!(r.selected, [0, 1, 2], "scale {scale}");
        assert!((r.objective - 3.0 * scale).abs() <= 1e-12 * scale);
    }
}
