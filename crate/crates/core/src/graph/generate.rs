//! Seeded graph families used by tests, experiments and the `gen` command.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::decomposition::TreeDecomposition;
use super::{ordered, WeightedGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("bad parameters: {0}")]
    BadParams(String),
}

fn bad(msg: impl Into<String>) -> GenError {
    GenError::BadParams(msg.into())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    /// Center is vertex 0.
    Star {
        n: usize,
    },
    Clique {
        n: usize,
    },
    RandomTree {
        n: usize,
    },
    /// Random spanning tree plus every other pair independently with probability `p`.
    RandomConnected {
        n: usize,
        p: f64,
    },
    /// As `RandomConnected`, with weights uniform in `[lo, hi]`.
    RandomWeighted {
        n: usize,
        p: f64,
        lo: f64,
        hi: f64,
    },
    /// Spine path with `n − spine` legs attached at random; comes with a
    /// width-1 path decomposition.
    Caterpillar {
        n: usize,
        spine: usize,
    },
    /// Random subgraph of a `k`-tree, with its width-`k` decomposition.
    PartialKTree {
        n: usize,
        k: usize,
        keep: f64,
    },
    /// Random connected graph of maximum degree `d`.
    BoundedDegree {
        n: usize,
        d: usize,
        extra: usize,
    },
    /// Hamiltonian cycle on a random order plus `chords` random chords.
    RandomBiconnected {
        n: usize,
        chords: usize,
    },
    /// `count` triangles sharing vertex 0.
    Windmill {
        count: usize,
    },
    /// `count` triangles, consecutive ones joined by a bridge.
    TriangleChain {
        count: usize,
    },
    /// The pair `G`, `H_{i,j}`; `i`, `j` are 1-indexed labels in `3..=n`.
    SpErPair {
        n: usize,
        i: usize,
        j: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub graph: WeightedGraph,
    pub decomposition: Option<TreeDecomposition>,
    /// Second graph of a paired family (`H_{i,j}` for `SpErPair`).
    pub partner: Option<WeightedGraph>,
}

impl Generated {
    fn plain(graph: WeightedGraph) -> Self {
        Generated {
            graph,
            decomposition: None,
            partner: None,
        }
    }
}

pub fn generate(family: &Family, seed: u64) -> Result<Generated, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match *family {
        Family::Path { n } => Generated::plain(path(n)?),
        Family::Cycle { n } => Generated::plain(cycle(n)?),
        Family::Star { n } => Generated::plain(star(n)?),
        Family::Clique { n } => Generated::plain(clique(n)?),
        Family::RandomTree { n } => Generated::plain(random_tree(n, &mut rng)?),
        Family::RandomConnected { n, p } => {
            Generated::plain(random_connected(n, p, None, &mut rng)?)
        }
        Family::RandomWeighted { n, p, lo, hi } => {
            Generated::plain(random_connected(n, p, Some((lo, hi)), &mut rng)?)
        }
        Family::Caterpillar { n, spine } => {
            let (graph, td) = caterpillar(n, spine, &mut rng)?;
            Generated {
                graph,
                decomposition: Some(td),
                partner: None,
            }
        }
        Family::PartialKTree { n, k, keep } => {
            let (graph, td) = partial_k_tree(n, k, keep, None, &mut rng)?;
            Generated {
                graph,
                decomposition: Some(td),
                partner: None,
            }
        }
        Family::BoundedDegree { n, d, extra } => {
            Generated::plain(bounded_degree(n, d, extra, &mut rng)?)
        }
        Family::RandomBiconnected { n, chords } => {
            Generated::plain(random_biconnected(n, chords, &mut rng)?)
        }
        Family::Windmill { count } => Generated::plain(windmill(count)?),
        Family::TriangleChain { count } => Generated::plain(triangle_chain(count)?),
        Family::SpErPair { n, i, j } => {
            let (g, h) = sp_er_pair(n, i, j)?;
            Generated {
                graph: g,
                decomposition: None,
                partner: Some(h),
            }
        }
    })
}

fn build(
    n: usize,
    edges: impl IntoIterator<Item = (usize, usize)>,
) -> Result<WeightedGraph, GenError> {
    WeightedGraph::unweighted(n, edges).map_err(|e| bad(e.to_string()))
}

fn need(cond: bool, msg: &str) -> Result<(), GenError> {
    if cond {
        Ok(())
    } else {
        Err(bad(msg))
    }
}

pub fn path(n: usize) -> Result<WeightedGraph, GenError> {
    need(n >= 1, "path needs n >= 1")?;
    build(n, (1..n).map(|i| (i - 1, i)))
}

pub fn cycle(n: usize) -> Result<WeightedGraph, GenError> {
    need(n >= 3, "cycle needs n >= 3")?;
    build(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn star(n: usize) -> Result<WeightedGraph, GenError> {
    need(n >= 2, "star needs n >= 2")?;
    build(n, (1..n).map(|i| (0, i)))
}

pub fn clique(n: usize) -> Result<WeightedGraph, GenError> {
    need(n >= 1, "clique needs n >= 1")?;
    build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Vertex `i` attaches to a uniformly random earlier vertex.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Result<WeightedGraph, GenError> {
    need(n >= 1, "tree needs n >= 1")?;
    build(
        n,
        (1..n).map(|i| (rng.gen_range(0..i), i)).collect::<Vec<_>>(),
    )
}

pub fn random_connected<R: Rng>(
    n: usize,
    p: f64,
    weights: Option<(f64, f64)>,
    rng: &mut R,
) -> Result<WeightedGraph, GenError> {
    need(n >= 1, "graph needs n >= 1")?;
    need((0.0..=1.0).contains(&p), "p must lie in [0, 1]")?;
    if let Some((lo, hi)) = weights {
        need(
            lo > 0.0 && lo <= hi && hi.is_finite(),
            "weights need 0 < lo <= hi",
        )?;
    }
    let mut pairs: BTreeSet<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                pairs.insert((u, v));
            }
        }
    }
    let edges: Vec<(usize, usize, f64)> = pairs
        .into_iter()
        .map(|(u, v)| {
            let w = match weights {
                Some((lo, hi)) if hi > lo => rng.gen_range(lo..=hi),
                Some((lo, _)) => lo,
                None => 1.0,
            };
            (u, v, w)
        })
        .collect();
    WeightedGraph::new(n, edges).map_err(|e| bad(e.to_string()))
}

pub fn caterpillar<R: Rng>(
    n: usize,
    spine: usize,
    rng: &mut R,
) -> Result<(WeightedGraph, TreeDecomposition), GenError> {
    need(
        spine >= 1 && spine <= n,
        "caterpillar needs 1 <= spine <= n",
    )?;
    need(n >= 2, "caterpillar needs n >= 2")?;
    let mut legs = vec![Vec::new(); spine];
    for leaf in spine..n {
        legs[rng.gen_range(0..spine)].push(leaf);
    }
    let mut edges = Vec::new();
    let mut bags = Vec::new();
    for (s, leaves) in legs.iter().enumerate() {
        for &leaf in leaves {
            edges.push((s, leaf));
            bags.push(vec![s, leaf]);
        }
        if s + 1 < spine {
            edges.push((s, s + 1));
            bags.push(vec![s, s + 1]);
        }
    }
    if bags.is_empty() {
        bags.push(vec![0]);
    }
    let td = TreeDecomposition::path(bags).map_err(|e| bad(e.to_string()))?;
    Ok((build(n, edges)?, td))
}

/// Builds a random `k`-tree and keeps each edge with probability `keep`,
/// always keeping a spanning tree so the result is connected. Bag 0 holds
/// vertices `0..=k`; every later bag is a `k`-clique of an earlier bag plus
/// one new vertex.
pub fn partial_k_tree<R: Rng>(
    n: usize,
    k: usize,
    keep: f64,
    weights: Option<(f64, f64)>,
    rng: &mut R,
) -> Result<(WeightedGraph, TreeDecomposition), GenError> {
    need(k >= 1 && n > k, "partial k-tree needs 1 <= k < n")?;
    need((0.0..=1.0).contains(&keep), "keep must lie in [0, 1]")?;
    let mut pairs = BTreeSet::new();
    for u in 0..=k {
        for v in u + 1..=k {
            if v == u + 1 || rng.gen_bool(keep) {
                pairs.insert((u, v));
            }
        }
    }
    let mut bags: Vec<Vec<usize>> = vec![(0..=k).collect()];
    let mut tree_edges = Vec::new();
    for v in k + 1..n {
        let parent = rng.gen_range(0..bags.len());
        let mut clique = bags[parent].clone();
        clique.remove(rng.gen_range(0..clique.len()));
        let anchor = *clique.choose(rng).expect("k >= 1");
        for &u in &clique {
            if u == anchor || rng.gen_bool(keep) {
                pairs.insert(ordered(u, v));
            }
        }
        clique.push(v);
        bags.push(clique);
        tree_edges.push((parent, bags.len() - 1));
    }
    let edges: Vec<(usize, usize, f64)> = pairs
        .into_iter()
        .map(|(u, v)| {
            let w = match weights {
                Some((lo, hi)) if hi > lo => rng.gen_range(lo..=hi),
                Some((lo, _)) => lo,
                None => 1.0,
            };
            (u, v, w)
        })
        .collect();
    let graph = WeightedGraph::new(n, edges).map_err(|e| bad(e.to_string()))?;
    let td = TreeDecomposition::new(bags, tree_edges).map_err(|e| bad(e.to_string()))?;
    Ok((graph, td))
}

pub fn bounded_degree<R: Rng>(
    n: usize,
    d: usize,
    extra: usize,
    rng: &mut R,
) -> Result<WeightedGraph, GenError> {
    need(n >= 1, "graph needs n >= 1")?;
    need(
        d >= 2 || n <= 2,
        "connected bounded-degree graphs need d >= 2",
    )?;
    let mut degree = vec![0usize; n];
    let mut pairs = BTreeSet::new();
    for v in 1..n {
        let open: Vec<usize> = (0..v).filter(|&u| degree[u] < d).collect();
        let u = *open
            .choose(rng)
            .ok_or_else(|| bad("degree bound too small"))?;
        pairs.insert((u, v));
        degree[u] += 1;
        degree[v] += 1;
    }
    let mut attempts = 0;
    let mut added = 0;
    while added < extra && attempts < 50 * (extra + 1) && n >= 2 {
        attempts += 1;
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        let pair = ordered(u, v);
        if u == v || degree[u] >= d || degree[v] >= d || pairs.contains(&pair) {
            continue;
        }
        pairs.insert(pair);
        degree[u] += 1;
        degree[v] += 1;
        added += 1;
    }
    build(n, pairs)
}

pub fn random_biconnected<R: Rng>(
    n: usize,
    chords: usize,
    rng: &mut R,
) -> Result<WeightedGraph, GenError> {
    need(n >= 3, "biconnected graphs need n >= 3")?;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs: BTreeSet<(usize, usize)> = (0..n)
        .map(|i| ordered(order[i], order[(i + 1) % n]))
        .collect();
    let max_pairs = n * (n - 1) / 2;
    let target = (pairs.len() + chords).min(max_pairs);
    while pairs.len() < target {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            pairs.insert(ordered(u, v));
        }
    }
    build(n, pairs)
}

pub fn windmill(count: usize) -> Result<WeightedGraph, GenError> {
    need(count >= 1, "windmill needs at least one triangle")?;
    let mut edges = Vec::new();
    for t in 0..count {
        let (a, b) = (2 * t + 1, 2 * t + 2);
        edges.extend([(0, a), (0, b), (a, b)]);
    }
    build(2 * count + 1, edges)
}

pub fn triangle_chain(count: usize) -> Result<WeightedGraph, GenError> {
    need(count >= 1, "chain needs at least one triangle")?;
    let mut edges = Vec::new();
    for t in 0..count {
        let b = 3 * t;
        edges.extend([(b, b + 1), (b + 1, b + 2), (b, b + 2)]);
        if t + 1 < count {
            edges.push((b + 2, b + 3));
        }
    }
    build(3 * count, edges)
}

/// `G`: two stars on `n/2` vertices with adjacent centers `v1 = 0`, `v2 = 1`.
/// Leaves `2..=n/2` hang off `v1`, the rest off `v2`. `H_{i,j}` drops the
/// center edge and the star edges of `v_i`, `v_j`, then joins both of them to
/// both centers, closing a square. Labels `i`, `j` are 1-indexed.
pub fn sp_er_pair(
    n: usize,
    i: usize,
    j: usize,
) -> Result<(WeightedGraph, WeightedGraph), GenError> {
    need(
        n >= 8 && n.is_multiple_of(2),
        "n must be even and at least 8",
    )?;
    need(
        (3..=n).contains(&i) && (3..=n).contains(&j) && i != j,
        "i and j must be distinct labels in 3..=n",
    )?;
    let center = |leaf: usize| if leaf <= n / 2 { 0 } else { 1 };
    let mut g_edges = vec![(0, 1)];
    g_edges.extend((2..n).map(|leaf| (center(leaf), leaf)));
    let (vi, vj) = (i - 1, j - 1);
    let mut h_edges: Vec<(usize, usize)> = (2..n)
        .filter(|&leaf| leaf != vi && leaf != vj)
        .map(|leaf| (center(leaf), leaf))
        .collect();
    h_edges.extend([(0, vi), (1, vi), (0, vj), (1, vj)]);
    Ok((build(n, g_edges)?, build(n, h_edges)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::decomposition::validate_tree_decomposition;

    #[test]
    fn clique_has_all_pairs() {
        let g = generate(&Family::Clique { n: 6 }, 0).unwrap().graph;
        assert_eq!(g.m(), 15);
    }

    #[test]
    fn random_tree_is_a_tree() {
        let g = generate(&Family::RandomTree { n: 20 }, 1).unwrap().graph;
        assert_eq!(g.m(), 19);
        assert!(g.is_connected());
    }

    #[test]
    fn generation_is_deterministic() {
        let f = Family::RandomWeighted {
            n: 12,
            p: 0.3,
            lo: 0.5,
            hi: 2.0,
        };
        assert_eq!(generate(&f, 7).unwrap(), generate(&f, 7).unwrap());
        assert_ne!(generate(&f, 7).unwrap(), generate(&f, 8).unwrap());
    }

    #[test]
    fn sp_er_pair_center_adjacency() {
        let out = generate(&Family::SpErPair { n: 8, i: 5, j: 7 }, 0).unwrap();
        let h = out.partner.unwrap();
        assert!(out.graph.has_edge(0, 1));
        assert!(!h.has_edge(0, 1));
        assert_eq!(out.graph.m(), 7);
        assert_eq!(h.m(), 8);
        assert!(h.has_edge(0, 4) && h.has_edge(1, 4) && h.has_edge(0, 6) && h.has_edge(1, 6));
        assert!(sp_er_pair(7, 3, 4).is_err());
        assert!(sp_er_pair(8, 2, 4).is_err());
    }

    #[test]
    fn decompositions_are_valid() {
        for seed in 0..10 {
            let out = generate(&Family::Caterpillar { n: 30, spine: 10 }, seed).unwrap();
            let td = out.decomposition.unwrap();
            assert_eq!(validate_tree_decomposition(&out.graph, &td), Ok(()));
            assert_eq!(td.width(), 1);
            let out = generate(
                &Family::PartialKTree {
                    n: 15,
                    k: 3,
                    keep: 0.6,
                },
                seed,
            )
            .unwrap();
            let td = out.decomposition.unwrap();
            assert_eq!(validate_tree_decomposition(&out.graph, &td), Ok(()));
            assert!(out.graph.is_connected());
            assert_eq!(td.width(), 3);
        }
    }

    #[test]
    fn bounded_degree_respects_bound() {
        for seed in 0..10 {
            let g = generate(
                &Family::BoundedDegree {
                    n: 16,
                    d: 3,
                    extra: 10,
                },
                seed,
            )
            .unwrap()
            .graph;
            assert!(g.max_degree() <= 3);
            assert!(g.is_connected());
        }
    }

    #[test]
    fn small_families() {
        assert_eq!(windmill(2).unwrap().m(), 6);
        assert_eq!(triangle_chain(8).unwrap().m(), 31);
        assert!(random_biconnected(9, 3, &mut ChaCha8Rng::seed_from_u64(0))
            .unwrap()
            .is_connected());
    }
}
