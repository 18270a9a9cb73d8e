mod common;

use approx::assert_abs_diff_eq;
use common::{connected_unweighted, connected_weighted, matrix_tree_resistance, reference_pinv};
use erlab::graph::flow::{nash_williams_bound, UnitFlow};
use erlab::graph::generate;
use erlab::graph::{
    all_pairs_er, classical_cut_analysis, electrical_flow, laplacian_bundle, schur_complement,
};
use nalgebra::DMatrix;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

#[test]
fn complete_graph_values_match_matrix_tree_counts() {
    for (n, expected) in [(4, 0.5), (5, 0.4), (8, 0.25)] {
        let g = generate::clique(n).unwrap();
        let r = all_pairs_er(&g);
        for u in 0..n {
            for v in u + 1..n {
                assert_abs_diff_eq!(r.get(u, v).as_f64(), expected, epsilon = 1e-12);
                assert_abs_diff_eq!(matrix_tree_resistance(&g, u, v), expected, epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn pseudoinverse_conditions_on_random_graphs() {
    for seed in 0..10 {
        let g = connected_weighted(seed, 8, 8);
        let b = laplacian_bundle(&g);
        let (l, p) = (&b.laplacian, &b.pseudoinverse);
        assert!((l * p * l - l).amax() < 1e-8);
        assert!((p * l * p - p).amax() < 1e-8);
        assert!((l * p - (l * p).transpose()).amax() < 1e-8);
        assert!((p * l - (p * l).transpose()).amax() < 1e-8);
        assert!((p - reference_pinv(&g)).amax() < 1e-8);
    }
}

#[test]
fn schur_complement_of_triangle() {
    let g = generate::cycle(3).unwrap();
    let reduced = schur_complement(&g, &[0, 1]);
    assert_abs_diff_eq!(reduced.graph.weight(0, 1).unwrap(), 1.5, epsilon = 1e-12);
}

#[test]
fn tree_path_flows_cost_at_least_the_resistance() {
    let g = connected_weighted(3, 10, 10);
    let r = all_pairs_er(&g);
    for t in 1..g.n() {
        let f = UnitFlow::new(&g, 0, t, common::tree_path_flow(&g, 0, t)).unwrap();
        assert!(f.energy >= r.get(0, t).as_f64() - 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn metric_axioms(seed in any::<u64>()) {
        let g = connected_weighted(seed, 2, 20);
        let r = all_pairs_er(&g);
        prop_assert!(r.check_metric(1e-8).is_ok());
        for u in 0..g.n() {
            prop_assert_eq!(r.get(u, u).as_f64(), 0.0);
            for v in 0..g.n() {
                prop_assert_eq!(r.get(u, v), r.get(v, u));
            }
        }
    }

    #[test]
    fn matches_matrix_tree_oracle(seed in any::<u64>()) {
        let g = connected_weighted(seed, 2, 10);
        let r = all_pairs_er(&g);
        let (u, v) = (0, g.n() - 1);
        let reference = matrix_tree_resistance(&g, u, v);
        prop_assert!((r.get(u, v).as_f64() - reference).abs() <= 1e-8 * reference.max(1.0));
    }

    #[test]
    fn rayleigh_monotonicity(seed in any::<u64>(), factor in 1.0f64..4.0, a in 0usize..20, b in 0usize..20) {
        let g = connected_weighted(seed, 3, 14);
        let (a, b) = (a % g.n(), b % g.n());
        prop_assume!(a != b);
        let w = g.weight(a, b).unwrap_or(0.0);
        let heavier = g.with_weight(a, b, w * factor + 0.25).unwrap();
        let (before, after) = (all_pairs_er(&g), all_pairs_er(&heavier));
        for u in 0..g.n() {
            for v in 0..g.n() {
                prop_assert!(after.get(u, v).as_f64() <= before.get(u, v).as_f64() + 1e-10);
            }
        }
    }

    #[test]
    fn thompson_principle(seed in any::<u64>()) {
        let g = connected_weighted(seed, 2, 12);
        let (s, t) = (0, g.n() - 1);
        let r = all_pairs_er(&g).get(s, t).as_f64();
        let electrical = electrical_flow(&g, s, t).unwrap();
        prop_assert!((electrical.energy - r).abs() <= 1e-8 * r.max(1.0));
        for k in 0..100u64 {
            let c = common::random_circulation(&g, seed.wrapping_add(k));
            let values = electrical.values.iter().zip(&c).map(|(x, y)| x + y).collect();
            let f = UnitFlow::new(&g, s, t, values).unwrap();
            prop_assert!(f.energy >= r - 1e-10);
        }
    }

    #[test]
    fn unit_edges_and_bridges(seed in any::<u64>()) {
        let g = connected_unweighted(seed, 2, 16);
        let r = all_pairs_er(&g);
        let cuts = classical_cut_analysis(&g);
        for e in g.edges() {
            let x = r.get(e.u, e.v).as_f64();
            prop_assert!(x <= 1.0 + 1e-10);
            prop_assert_eq!((x - 1.0).abs() <= 1e-8, cuts.is_bridge(e.u, e.v));
        }
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                if !cuts.same_edge_component(u, v) {
                    prop_assert!(r.get(u, v).as_f64() >= 1.0 - 1e-10);
                }
            }
        }
    }

    #[test]
    fn centered_resistances_give_the_pseudoinverse(seed in any::<u64>()) {
        let g = connected_weighted(seed, 2, 16);
        let n = g.n();
        let r = all_pairs_er(&g).to_dense().unwrap();
        let c = DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
        let p = (&c * r * &c) * -0.5;
        prop_assert!((p - reference_pinv(&g)).amax() < 1e-7);
    }

    #[test]
    fn nash_williams_lower_bound(seed in any::<u64>(), pick in any::<u64>()) {
        let g = connected_unweighted(seed, 2, 16);
        let (s, t) = (0, g.n() - 1);
        let cuts = common::nested_layer_cuts(&g, s, t, pick);
        let bound = nash_williams_bound(&g, s, t, &cuts).unwrap();
        prop_assert!(all_pairs_er(&g).get(s, t).as_f64() >= bound - 1e-10);
    }

    #[test]
    fn schur_complement_preserves_resistance(seed in any::<u64>(), mask in 1u32..u32::MAX) {
        let g = connected_weighted(seed, 2, 12);
        let keep: Vec<usize> = (0..g.n()).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(keep.len() >= 2);
        let reduced = schur_complement(&g, &keep);
        let (full, small) = (all_pairs_er(&g), all_pairs_er(&reduced.graph));
        for (a, &u) in keep.iter().enumerate() {
            for (b, &v) in keep.iter().enumerate() {
                let (x, y) = (full.get(u, v).as_f64(), small.get(a, b).as_f64());
                prop_assert!((x - y).abs() <= 1e-8 * x.max(1.0));
            }
        }
    }
}
