mod common;

use common::connected_unweighted;
use erlab::graph::generate;
use erlab::graph::{all_pairs_er, classical_cut_analysis, Tolerance, WeightedGraph};
use erlab::oracle::{ErOracle, HiddenGraphOracle, Mode, TableOracle, Transcript};
use erlab::verify::{
    equal_monotone, is_cut_edge, is_cut_vertex, is_tree, same_biconnected_component, VerifyError,
    VerifyOptions, Witness,
};

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

fn without_vertex(g: &WeightedGraph, b: usize) -> WeightedGraph {
    let edges = g
        .edges()
        .iter()
        .filter(|e| e.u != b && e.v != b)
        .map(|e| (e.u, e.v, e.w));
    WeightedGraph::new(g.n(), edges).unwrap()
}

#[test]
fn decisions_agree_with_depth_first_search() {
    for seed in 0..200 {
        let g = connected_unweighted(seed, 3, 14);
        let n = g.n();
        let cuts = classical_cut_analysis(&g);
        for v in 0..n {
            let mut o = HiddenGraphOracle::new(g.clone());
            let verdict = is_cut_vertex(&mut o, v, &opts()).unwrap();
            assert_eq!(
                verdict.answer,
                cuts.is_articulation(v),
                "seed {seed} vertex {v}"
            );
            assert_eq!(verdict.queries.distinct, 2 * n - 3);
        }
        for a in 0..n {
            for b in a + 1..n {
                let mut o = HiddenGraphOracle::new(g.clone());
                let edge = is_cut_edge(&mut o, a, b, &opts()).unwrap();
                assert_eq!(
                    edge.answer,
                    cuts.is_bridge(a, b),
                    "seed {seed} pair ({a}, {b})"
                );
                assert_eq!(edge.queries.distinct, 2 * n - 3);
                let mut o = HiddenGraphOracle::new(g.clone());
                let block = same_biconnected_component(&mut o, a, b, &opts()).unwrap();
                assert_eq!(
                    block.answer,
                    cuts.same_block(a, b),
                    "seed {seed} pair ({a}, {b})"
                );
                assert_eq!(block.queries.distinct, 2 * n - 3);
            }
        }
    }
}

#[test]
fn tightness_means_separation() {
    let tol = Tolerance::default();
    for seed in 0..200 {
        let g = connected_unweighted(seed, 3, 14);
        let r = all_pairs_er(&g);
        for b in 0..g.n() {
            let labels = without_vertex(&g, b).components();
            for a in (0..g.n()).filter(|&a| a != b) {
                for c in (0..g.n()).filter(|&c| c != a && c != b) {
                    let sum = r.get(a, b).as_f64() + r.get(b, c).as_f64();
                    let tight = tol.tight_eq(sum, r.get(a, c).as_f64());
                    assert_eq!(tight, labels[a] != labels[c], "seed {seed} ({a}, {b}, {c})");
                }
            }
        }
    }
}

#[test]
fn tree_test_matches_edge_count() {
    for seed in 0..200 {
        let g = connected_unweighted(seed, 2, 14);
        for mode in [Mode::Float, Mode::Exact] {
            let mut o = HiddenGraphOracle::with_mode(g.clone(), mode).unwrap();
            let v = is_tree(&mut o, &opts()).unwrap();
            assert_eq!(v.answer, g.m() == g.n() - 1);
            assert_eq!(v.queries.distinct, g.n() - 1);
        }
    }
}

#[test]
fn monotone_equality_budget_and_decisions() {
    for seed in 0..50 {
        let g = connected_unweighted(seed, 3, 14);
        let mut o = HiddenGraphOracle::new(g.clone());
        let same = equal_monotone(&mut o, &g, &opts()).unwrap();
        assert!(same.answer);
        assert_eq!(same.queries.distinct, g.n() - 1);
        if let Some((a, b)) = (0..g.n())
            .flat_map(|a| (a + 1..g.n()).map(move |b| (a, b)))
            .find(|&(a, b)| !g.has_edge(a, b))
        {
            let denser = g.with_weight(a, b, 1.0).unwrap();
            let mut o = HiddenGraphOracle::new(denser);
            let differ = equal_monotone(&mut o, &g, &opts()).unwrap();
            assert!(!differ.answer, "seed {seed}");
            assert_eq!(differ.queries.distinct, g.n() - 1);
        }
    }
}

#[test]
fn examples_with_witnesses() {
    let mut o = HiddenGraphOracle::new(generate::cycle(4).unwrap());
    let v = is_tree(&mut o, &opts()).unwrap();
    assert_eq!(v.witness, Some(Witness::Vertex(1)));

    // Two triangles sharing vertex 2.
    let bowtie =
        WeightedGraph::unweighted(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
    let mut o = HiddenGraphOracle::new(bowtie.clone());
    assert!(is_cut_vertex(&mut o, 2, &opts()).unwrap().answer);
    let mut o = HiddenGraphOracle::new(bowtie);
    let v = same_biconnected_component(&mut o, 0, 4, &opts()).unwrap();
    assert!(!v.answer);
    assert_eq!(v.witness, Some(Witness::Tight { a: 0, b: 2, c: 4 }));

    // Two triangles joined by the edge (2, 3).
    let barbell =
        WeightedGraph::unweighted(6, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)])
            .unwrap();
    let mut o = HiddenGraphOracle::new(barbell);
    assert!(is_cut_edge(&mut o, 2, 3, &opts()).unwrap().answer);

    let mut o = HiddenGraphOracle::new(generate::cycle(6).unwrap());
    let v = is_cut_edge(&mut o, 0, 1, &opts()).unwrap();
    assert_eq!(
        v.witness,
        Some(Witness::UnitDifferenceFails {
            a: 0,
            b: 1,
            x: None
        })
    );
}

#[test]
fn disconnected_hidden_graph_is_reported() {
    let forest = WeightedGraph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
    let mut o = HiddenGraphOracle::new(forest.clone());
    assert!(!is_tree(&mut o, &opts()).unwrap().answer);
    let mut o = HiddenGraphOracle::new(forest);
    assert!(matches!(
        is_cut_vertex(&mut o, 1, &opts()),
        Err(VerifyError::Disconnected { .. })
    ));
}

#[test]
fn table_oracle_substitutes_for_the_hidden_graph() {
    for seed in 0..20 {
        let g = connected_unweighted(seed, 3, 12);
        let table = all_pairs_er(&g);
        let mut hidden = HiddenGraphOracle::new(g.clone());
        let mut plain = TableOracle::new(table);
        for v in 0..g.n() {
            let a = is_cut_vertex(&mut hidden, v, &opts()).unwrap();
            let b = is_cut_vertex(&mut plain, v, &opts()).unwrap();
            assert_eq!(a.answer, b.answer);
            assert_eq!(a.witness, b.witness);
        }
        assert_eq!(hidden.ledger(), plain.ledger());
    }
}

#[test]
fn transcripts_replay_exactly() {
    let g = connected_unweighted(11, 8, 12);
    let mut first = HiddenGraphOracle::new(g.clone()).with_sorted_ball();
    is_cut_vertex(&mut first, 3, &opts()).unwrap();
    first.sp_query(0, 2).unwrap();
    first.sorted_ball(1, 3).unwrap();
    let dump = first.transcript().to_string();
    let parsed = Transcript::parse(&dump).unwrap();
    assert_eq!(&parsed, first.transcript());

    let mut second = HiddenGraphOracle::new(g.clone()).with_sorted_ball();
    parsed.replay(&mut second).unwrap();
    assert_eq!(second.transcript().to_string(), dump);
    assert_eq!(second.ledger(), first.ledger());

    let other = g.with_weight(0, g.n() - 1, 3.0).unwrap();
    let mut third = HiddenGraphOracle::new(other).with_sorted_ball();
    assert!(parsed.replay(&mut third).is_err());
}

#[test]
fn exact_mode_agrees_with_float_mode() {
    for seed in 0..30 {
        let g = connected_unweighted(seed, 3, 12);
        for v in 0..g.n() {
            let mut float = HiddenGraphOracle::new(g.clone());
            let mut exact = HiddenGraphOracle::with_mode(g.clone(), Mode::Exact).unwrap();
            assert_eq!(
                is_cut_vertex(&mut float, v, &opts()).unwrap().answer,
                is_cut_vertex(&mut exact, v, &opts()).unwrap().answer
            );
        }
    }
}
