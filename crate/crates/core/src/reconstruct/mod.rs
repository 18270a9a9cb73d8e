//! Recovering hidden graphs from resistance queries.
//!
//! Every routine works from the fact that resistances among a vertex set `U`
//! determine the Schur complement `G_U`: its resistance matrix is the
//! queried one, and a connected graph's Laplacian is a function of its
//! resistance matrix.

mod completion;
mod logdet;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::graph::decomposition::{validate_tree_decomposition, TreeDecomposition};
use crate::graph::laplacian::{
    graph_from_laplacian, laplacian_from_resistances, svd_pseudoinverse, weight_floor,
};
use crate::graph::schur::{split, submatrix};
use crate::graph::{all_pairs_er, ReducedGraph, Resistance, WeightedGraph};
use crate::oracle::{ErOracle, OracleError, QueryLedger};
use crate::property::ball::{unit_ball, BallStrategy};

pub use completion::{
    complete_exhaustive, complete_quadratic, uniqueness_brute_force, CompletionInstance,
    UniquenessReport,
};
pub use logdet::{log_det_regularized, log_det_shifted, logdet_directional_derivative};

/// Recovered weights below `RECOVERY_FLOOR · max degree` are treated as zero.
pub const RECOVERY_FLOOR: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReconstructError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("hidden graph is disconnected: R({u}, {v}) is infinite")]
    Disconnected { u: usize, v: usize },
    #[error("resistances on the queried set do not come from a connected graph")]
    NotAResistanceMatrix,
    #[error("recovered edge ({u}, {v}) has weight {w}; neighbor discovery needs unit weights")]
    NonUnitWeight { u: usize, v: usize, w: f64 },
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("known entry ({u}, {v}) is {known} but the queries imply {recovered}")]
    InconsistentKnownPart {
        u: usize,
        v: usize,
        known: f64,
        recovered: f64,
    },
    #[error("no candidate completion reproduces the queried resistances")]
    NoConsistentCompletion,
    #[error("{matches} candidate completions reproduce the queried resistances")]
    AmbiguousCompletion { matches: usize },
    #[error("bad completion instance: {0}")]
    BadInstance(String),
    #[error("need at least {need} vertices, got {got}")]
    TooFewVertices { need: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub graph: WeightedGraph,
    /// Queries issued by this call.
    pub queries: QueryLedger,
    /// Candidate graphs evaluated by exhaustive completion; zero elsewhere.
    pub candidates_evaluated: usize,
}

impl ReconstructionResult {
    /// Largest absolute weight difference over all pairs, absent edges
    /// counting as weight zero.
    pub fn max_weight_error(&self, truth: &WeightedGraph) -> f64 {
        max_weight_error(&self.graph, truth)
    }
}

pub fn max_weight_error(a: &WeightedGraph, b: &WeightedGraph) -> f64 {
    assert_eq!(a.n(), b.n(), "graphs must have the same vertex count");
    let mut worst: f64 = 0.0;
    for u in 0..a.n() {
        for v in u + 1..a.n() {
            let wa = a.weight(u, v).unwrap_or(0.0);
            let wb = b.weight(u, v).unwrap_or(0.0);
            worst = worst.max((wa - wb).abs());
        }
    }
    worst
}

/// Queries every pair of `vertices` (sorted) in lexicographic order and
/// returns the dense resistance matrix in that order.
fn query_block<O: ErOracle + ?Sized>(
    o: &mut O,
    vertices: &[usize],
) -> Result<DMatrix<f64>, ReconstructError> {
    let k = vertices.len();
    let mut r = DMatrix::zeros(k, k);
    for a in 0..k {
        for b in a + 1..k {
            let (u, v) = (vertices[a], vertices[b]);
            let x = o
                .er_query(u, v)?
                .finite()
                .ok_or(ReconstructError::Disconnected { u, v })?;
            r[(a, b)] = x;
            r[(b, a)] = x;
        }
    }
    Ok(r)
}

/// Laplacian of the Schur complement onto `vertices` (sorted), from
/// `C(|vertices|, 2)` queries.
fn schur_laplacian_by_queries<O: ErOracle + ?Sized>(
    o: &mut O,
    vertices: &[usize],
) -> Result<DMatrix<f64>, ReconstructError> {
    let r = query_block(o, vertices)?;
    laplacian_from_resistances(&r).ok_or(ReconstructError::NotAResistanceMatrix)
}

fn to_graph(l: &DMatrix<f64>) -> Result<WeightedGraph, ReconstructError> {
    graph_from_laplacian(l, weight_floor(l, RECOVERY_FLOOR))
        .map_err(|_| ReconstructError::NotAResistanceMatrix)
}

/// Recovers the whole hidden graph from all `C(n, 2)` resistances.
pub fn reconstruct_full<O: ErOracle + ?Sized>(
    o: &mut O,
) -> Result<ReconstructionResult, ReconstructError> {
    let before = *o.ledger();
    let all: Vec<usize> = (0..o.n()).collect();
    let l = schur_laplacian_by_queries(o, &all)?;
    Ok(ReconstructionResult {
        graph: to_graph(&l)?,
        queries: o.ledger().since(&before),
        candidates_evaluated: 0,
    })
}

/// The Schur complement `G_U` from the `C(|U|, 2)` resistances inside `U`.
pub fn reconstruct_schur<O: ErOracle + ?Sized>(
    o: &mut O,
    keep: &[usize],
) -> Result<ReducedGraph, ReconstructError> {
    let (vertices, _) = split(o.n(), keep);
    if vertices.len() < 2 {
        return Err(ReconstructError::TooFewVertices {
            need: 2,
            got: vertices.len(),
        });
    }
    if let Some(&vertex) = vertices.iter().find(|&&v| v >= o.n()) {
        return Err(OracleError::VertexOutOfRange { vertex, n: o.n() }.into());
    }
    let l = schur_laplacian_by_queries(o, &vertices)?;
    Ok(ReducedGraph {
        graph: to_graph(&l)?,
        vertices,
    })
}

/// Neighbors of `v` in an unweighted hidden graph: the Schur complement onto
/// the unit ball around `v` keeps `v`'s row intact, because every neighbor
/// of `v` lies in the ball.
pub fn discover_neighbors<O: ErOracle + ?Sized>(
    o: &mut O,
    v: usize,
    strategy: BallStrategy,
) -> Result<Vec<usize>, ReconstructError> {
    let ball = unit_ball(o, v, strategy)?;
    neighbors_in_ball(o, v, &ball)
}

/// [`discover_neighbors`] for a unit ball around `v` that is already known.
pub fn neighbors_in_ball<O: ErOracle + ?Sized>(
    o: &mut O,
    v: usize,
    ball: &[(usize, Resistance)],
) -> Result<Vec<usize>, ReconstructError> {
    if ball.is_empty() {
        if o.n() > 1 {
            let u = if v == 0 { 1 } else { 0 };
            return Err(ReconstructError::Disconnected { u: v, v: u });
        }
        return Ok(Vec::new());
    }
    let mut vertices: Vec<usize> = ball.iter().map(|&(u, _)| u).collect();
    vertices.push(v);
    vertices.sort_unstable();
    let l = schur_laplacian_by_queries(o, &vertices)?;
    let me = vertices.binary_search(&v).expect("v is in the ball");
    let floor = weight_floor(&l, RECOVERY_FLOOR);
    let mut out = Vec::new();
    for (k, &u) in vertices.iter().enumerate() {
        if k == me {
            continue;
        }
        let w = -l[(me, k)];
        if w > floor {
            if (w - 1.0).abs() > 1e-6 {
                return Err(ReconstructError::NonUnitWeight { u: v, v: u, w });
            }
            out.push(u);
        }
    }
    Ok(out)
}

fn pinv_spd(m: &DMatrix<f64>) -> DMatrix<f64> {
    match m.clone().cholesky() {
        Some(c) => c.inverse(),
        None => svd_pseudoinverse(m),
    }
}

/// `a(rows, cols) = b` for index lists into `a`.
fn scatter(a: &mut DMatrix<f64>, rows: &[usize], cols: &[usize], b: &DMatrix<f64>) {
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            a[(r, c)] = b[(i, j)];
        }
    }
}

/// One elimination step: the private vertices `u` of a leaf bag `bag` and
/// their Laplacian rows over `bag`.
struct Peeled {
    private: Vec<usize>,
    bag: Vec<usize>,
    rows: DMatrix<f64>,
}

/// Recovers the hidden graph from a tree decomposition of it. Leaf bags are
/// peeled one at a time (lowest index first); the private vertices of a leaf
/// only touch its own bag, so their Laplacian rows are read off the Schur
/// complement onto that bag. The peeled rows are folded back in reverse
/// order through `L(Ū,Ū) = L_Ū + L(Ū,U) L(U,U)⁺ L(U,Ū)`.
///
/// A decomposition that does not fit the hidden graph is reported when it
/// breaks contiguity or when the result disagrees with a queried value; a
/// misfit that some other weighted graph explains exactly cannot be seen.
pub fn reconstruct_from_td<O: ErOracle + ?Sized>(
    o: &mut O,
    td: &TreeDecomposition,
) -> Result<ReconstructionResult, ReconstructError> {
    let n = o.n();
    let before = *o.ledger();
    let mut covered = vec![false; n];
    for bag in td.bags() {
        for &v in bag {
            if v >= n {
                return Err(ReconstructError::InvalidDecomposition(format!(
                    "vertex {v} out of range"
                )));
            }
            covered[v] = true;
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Err(ReconstructError::InvalidDecomposition(format!(
            "vertex {v} is in no bag"
        )));
    }

    let k = td.bag_count();
    let mut queried: Vec<(Vec<usize>, DMatrix<f64>)> = Vec::new();
    let mut alive = vec![true; k];
    let mut degree: Vec<usize> = (0..k).map(|b| td.tree_neighbors(b).len()).collect();
    let mut remaining = k;
    let mut stack: Vec<Peeled> = Vec::new();
    while remaining > 1 {
        let leaf = (0..k)
            .find(|&b| alive[b] && degree[b] == 1)
            .expect("a tree with two or more nodes has a leaf");
        let parent = *td
            .tree_neighbors(leaf)
            .iter()
            .find(|&&p| alive[p])
            .expect("leaf has a live neighbor");
        alive[leaf] = false;
        degree[parent] -= 1;
        remaining -= 1;
        let bag = td.bag(leaf).to_vec();
        let private: Vec<usize> = bag
            .iter()
            .copied()
            .filter(|v| td.bag(parent).binary_search(v).is_err())
            .collect();
        if private.is_empty() {
            continue;
        }
        if let Some(&v) = private
            .iter()
            .find(|&&v| td.bags_containing(v).iter().any(|&b| alive[b]))
        {
            return Err(ReconstructError::InvalidDecomposition(format!(
                "bags containing vertex {v} are not connected"
            )));
        }
        let r_bag = query_block(o, &bag)?;
        let l_bag =
            laplacian_from_resistances(&r_bag).ok_or(ReconstructError::NotAResistanceMatrix)?;
        queried.push((bag.clone(), r_bag));
        let local: Vec<usize> = private
            .iter()
            .map(|v| bag.binary_search(v).expect("private vertex is in the bag"))
            .collect();
        let all_local: Vec<usize> = (0..bag.len()).collect();
        stack.push(Peeled {
            rows: submatrix(&l_bag, &local, &all_local),
            private,
            bag,
        });
    }

    let root = (0..k).find(|&b| alive[b]).expect("one bag remains");
    let root_bag = td.bag(root).to_vec();
    let mut l = DMatrix::zeros(n, n);
    if root_bag.len() >= 2 {
        let r_root = query_block(o, &root_bag)?;
        let l_root =
            laplacian_from_resistances(&r_root).ok_or(ReconstructError::NotAResistanceMatrix)?;
        queried.push((root_bag.clone(), r_root));
        scatter(&mut l, &root_bag, &root_bag, &l_root);
    }
    let mut present: Vec<usize> = root_bag;
    while let Some(step) = stack.pop() {
        let u = &step.private;
        let rest = &present;
        let mut l_ur = DMatrix::zeros(u.len(), rest.len());
        let mut l_uu = DMatrix::zeros(u.len(), u.len());
        for (bi, &b) in step.bag.iter().enumerate() {
            if let Ok(j) = u.binary_search(&b) {
                for i in 0..u.len() {
                    l_uu[(i, j)] = step.rows[(i, bi)];
                }
            } else if let Ok(j) = rest.binary_search(&b) {
                for i in 0..u.len() {
                    l_ur[(i, j)] = step.rows[(i, bi)];
                }
            }
        }
        let l_uu = (&l_uu + l_uu.transpose()) * 0.5;
        let correction = l_ur.transpose() * pinv_spd(&l_uu) * &l_ur;
        let l_rr = submatrix(&l, rest, rest) + correction;
        scatter(&mut l, rest, rest, &l_rr);
        scatter(&mut l, u, u, &l_uu);
        scatter(&mut l, u, rest, &l_ur);
        scatter(&mut l, rest, u, &l_ur.transpose());
        present.extend_from_slice(u);
        present.sort_unstable();
    }

    let graph = to_graph(&l)?;
    validate_tree_decomposition(&graph, td)
        .map_err(|e| ReconstructError::InvalidDecomposition(e.to_string()))?;
    // A decomposition that does not fit the hidden graph yields a graph that
    // disagrees with some queried resistance.
    let check = all_pairs_er(&graph);
    for (bag, r) in &queried {
        for a in 0..bag.len() {
            for b in a + 1..bag.len() {
                let got = check.get(bag[a], bag[b]).as_f64();
                if (got - r[(a, b)]).abs() > 1e-6 * r[(a, b)].max(1.0) {
                    return Err(ReconstructError::InvalidDecomposition(format!(
                        "recovered graph has R({}, {}) = {got}, queried {}",
                        bag[a],
                        bag[b],
                        r[(a, b)]
                    )));
                }
            }
        }
    }
    Ok(ReconstructionResult {
        graph,
        queries: o.ledger().since(&before),
        candidates_evaluated: 0,
    })
}
