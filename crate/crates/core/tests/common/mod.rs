//! Corpora and reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use erlab::graph::generate::{self, Family};
use erlab::graph::{laplacian_bundle, WeightedGraph};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random connected unweighted graph with `n` in `lo..=hi`.
pub fn connected_unweighted(seed: u64, lo: usize, hi: usize) -> WeightedGraph {
    let mut r = rng(seed ^ 0x5eed);
    let n = r.gen_range(lo..=hi);
    let p = r.gen_range(0.0..0.5);
    generate::generate(&Family::RandomConnected { n, p }, seed)
        .unwrap()
        .graph
}

/// Random connected graph with weights in `[0.5, 2]`.
pub fn connected_weighted(seed: u64, lo: usize, hi: usize) -> WeightedGraph {
    let mut r = rng(seed ^ 0xface);
    let n = r.gen_range(lo..=hi);
    let p = r.gen_range(0.0..0.5);
    let family = Family::RandomWeighted {
        n,
        p,
        lo: 0.5,
        hi: 2.0,
    };
    generate::generate(&family, seed).unwrap().graph
}

pub fn laplacian(g: &WeightedGraph) -> DMatrix<f64> {
    let n = g.n();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            g.weighted_degree(i)
        } else {
            -g.weight(i, j).unwrap_or(0.0)
        }
    })
}

fn minor(m: &DMatrix<f64>, drop: &[usize]) -> DMatrix<f64> {
    let keep: Vec<usize> = (0..m.nrows()).filter(|i| !drop.contains(i)).collect();
    DMatrix::from_fn(keep.len(), keep.len(), |i, j| m[(keep[i], keep[j])])
}

/// Kirchhoff: `R(u, v)` is the weighted count of spanning 2-forests
/// separating `u` from `v` over the weighted count of spanning trees, both
/// read off Laplacian minors.
pub fn matrix_tree_resistance(g: &WeightedGraph, u: usize, v: usize) -> f64 {
    let l = laplacian(g);
    minor(&l, &[u, v]).determinant() / minor(&l, &[u]).determinant()
}

/// `L⁺` from the regularized inverse, computed here without the library.
pub fn reference_pinv(g: &WeightedGraph) -> DMatrix<f64> {
    let n = g.n();
    let j = DMatrix::from_element(n, n, 1.0 / n as f64);
    (laplacian(g) + &j).try_inverse().unwrap() - j
}

/// Unit flow along a breadth-first tree path from `s` to `t`.
pub fn tree_path_flow(g: &WeightedGraph, s: usize, t: usize) -> Vec<f64> {
    let mut parent = vec![usize::MAX; g.n()];
    parent[s] = s;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        for &(y, _) in g.neighbors(x) {
            if parent[y] == usize::MAX {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut values = vec![0.0; g.m()];
    let mut x = t;
    while x != s {
        let p = parent[x];
        let k = g.edge_index(p, x).unwrap();
        values[k] += if p < x { 1.0 } else { -1.0 };
        x = p;
    }
    values
}

/// A random circulation: a random edge vector with its divergence removed.
pub fn random_circulation(g: &WeightedGraph, seed: u64) -> Vec<f64> {
    let mut rng = rng(seed);
    let b = laplacian_bundle(g).incidence;
    let x = DVector::from_fn(g.m(), |_, _| rng.gen_range(-1.0..1.0));
    let n = g.n();
    let j = DMatrix::from_element(n, n, 1.0 / n as f64);
    let pinv = (&b * b.transpose() + &j).try_inverse().unwrap() - j;
    let c = &x - b.transpose() * (pinv * (&b * &x));
    c.iter().copied().collect()
}

pub fn nested_layer_cuts(g: &WeightedGraph, s: usize, t: usize, pick: u64) -> Vec<BTreeSet<usize>> {
    let hops = g.hop_distances(s);
    let d = hops[t].unwrap();
    (0..d)
        .filter(|i| pick >> (i % 64) & 1 == 1)
        .map(|i| {
            (0..g.n())
                .filter(|&x| hops[x].is_some_and(|h| h <= i))
                .collect()
        })
        .collect()
}
