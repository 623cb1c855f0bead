use proptest::prelude::*;

use wlnet::graph::{
    graph_to_tensor, parse_graph6, parse_graph_json, write_graph6, write_graph_json,
};
use wlnet::multiset::{multiset_equal_oracle, u_vector, Matrix};
use wlnet::net::{model_forward, Head, ModelSpec, Params, Pooling};
use wlnet::train::{grad_check, loss_cross_entropy, random_params, GradCheckConfig, Loss};
use wlnet::wl::{compare_graphs, Variant};
use wlnet::{DenseTensor3, Graph, Permutation, Rational};

fn graph(max_n: usize, colored: bool) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(move |n| {
        let pairs = n * n.saturating_sub(1) / 2;
        let colors = if colored {
            prop::collection::vec(prop::collection::vec(-4i8..4, 1), n).boxed()
        } else {
            Just(Vec::new()).boxed()
        };
        (prop::collection::vec(any::<bool>(), pairs), colors).prop_map(move |(bits, colors)| {
            let mut edges = Vec::new();
            let mut it = bits.into_iter();
            for a in 0..n {
                for b in a + 1..n {
                    if it.next().unwrap() {
                        edges.push((a, b));
                    }
                }
            }
            let colors: Vec<Vec<f64>> = colors
                .iter()
                .map(|r| r.iter().map(|&x| f64::from(x)).collect())
                .collect();
            Graph::new(n, &edges, &colors).unwrap()
        })
    })
}

fn graph_and_perm(max_n: usize, colored: bool) -> impl Strategy<Value = (Graph, Permutation)> {
    graph(max_n, colored).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|(g, m)| (g, Permutation::new(m).unwrap()))
    })
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|m| Permutation::new(m).unwrap())
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<(i64, i64)>>> {
    (1..=4usize, 1..=3usize).prop_flat_map(|(n, a)| {
        prop::collection::vec(prop::collection::vec((-3i64..=3, 1i64..=3), a), n)
    })
}

fn to_matrix(rows: &[Vec<(i64, i64)>]) -> Matrix<Rational> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&(p, q)| Rational::new(p.into(), q.into()))
                    .collect()
            })
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph6_round_trip(g in graph(20, false)) {
        let text = write_graph6(&g).unwrap();
        prop_assert_eq!(parse_graph6(&text).unwrap(), g);
    }

    #[test]
    fn json_round_trip(g in graph(12, true)) {
        prop_assert_eq!(parse_graph_json(&write_graph_json(&g)).unwrap(), g);
    }

    #[test]
    fn relabelled_graphs_are_never_distinguished((g, p) in graph_and_perm(7, true)) {
        let h = g.permute(&p).unwrap();
        for (k, variant) in [(1, Variant::Cr1), (2, Variant::Wl), (2, Variant::Fwl)] {
            let c = compare_graphs(&g, &h, k, variant).unwrap();
            prop_assert!(!c.verdict.is_distinguished(), "{variant} k={k}");
        }
    }

    #[test]
    fn power_sums_ignore_row_order(rows in small_matrix(), seed in any::<u64>()) {
        let x = to_matrix(&rows);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let p = Permutation::random(x.rows(), &mut rng);
        let y = x.permute_rows(&p).unwrap();
        prop_assert_eq!(u_vector(&x).unwrap(), u_vector(&y).unwrap());
    }

    #[test]
    fn power_sums_agree_with_sorting(x in small_matrix(), y in small_matrix()) {
        let (x, y) = (to_matrix(&x), to_matrix(&y));
        prop_assume!((x.rows(), x.cols()) == (y.rows(), y.cols()));
        prop_assert_eq!(
            u_vector(&x).unwrap() == u_vector(&y).unwrap(),
            multiset_equal_oracle(&x, &y).unwrap()
        );
    }

    #[test]
    fn tensor_permutations_compose(
        (n, data, p, q) in (1..=6usize).prop_flat_map(|n| {
            (Just(n), prop::collection::vec(-5i32..5, n * n * 2), perm(n), perm(n))
        })
    ) {
        let t = DenseTensor3::new(n, 2, data.into_iter().map(f64::from).collect()).unwrap();
        let both = t.permute(&q).unwrap().permute(&p).unwrap();
        prop_assert_eq!(&both, &t.permute(&p.compose(&q).unwrap()).unwrap());
        prop_assert_eq!(&t.permute(&p).unwrap().permute(&p.inverse()).unwrap(), &t);
    }

    #[test]
    fn network_output_is_invariant((g, p) in graph_and_perm(7, false), seed in any::<u64>(), suffix_ii in any::<bool>()) {
        let head = if suffix_ii { Head::SuffixII } else { Head::SuffixI { hidden_widths: vec![3] } };
        let spec = ModelSpec::matmul_network(1, 2, 3, 2, false, head, 2, Pooling::Sum);
        let params = Params::init(&spec, seed);
        let x = graph_to_tensor::<f64>(&g);
        let y = model_forward(&x, &spec, &params).unwrap();
        let yp = model_forward(&x.permute(&p).unwrap(), &spec, &params).unwrap();
        for (a, b) in y.iter().zip(&yp) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn cross_entropy_gradient_sums_to_zero(logits in prop::collection::vec(-30.0f64..30.0, 2..6), label in 0usize..6) {
        let label = label % logits.len();
        let (value, grad) = loss_cross_entropy(&logits, label).unwrap();
        prop_assert!(value >= 0.0);
        prop_assert!(grad.iter().sum::<f64>().abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn taped_gradient_matches_differences(g in graph(5, false), seed in any::<u64>(), blocks in 1..=2usize) {
        prop_assume!(g.n() >= 2);
        let spec = ModelSpec::matmul_network(1, blocks, 3, 2, false, Head::SuffixII, 2, Pooling::Sum);
        let params = random_params(&spec, seed, 0.5);
        let cfg = GradCheckConfig { samples: 40, seed, ..Default::default() };
        let report = grad_check(&spec, &params, &graph_to_tensor(&g), &Loss::CrossEntropy { label: 1 }, &cfg).unwrap();
        prop_assert!(report.max_relative_error < 1e-4, "{:?}", report.worst);
    }
}
