//! Schur complements of graph Laplacians onto a vertex subset.

use nalgebra::DMatrix;

use super::laplacian::{graph_from_laplacian, laplacian_matrix, svd_pseudoinverse, weight_floor};
use super::WeightedGraph;

/// A graph on a subset of another graph's vertices, relabeled densely.
/// `vertices[i]` is the original id of local vertex `i`; it is sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedGraph {
    pub graph: WeightedGraph,
    pub vertices: Vec<usize>,
}

impl ReducedGraph {
    /// Local id of an original vertex.
    pub fn local(&self, original: usize) -> Option<usize> {
        self.vertices.binary_search(&original).ok()
    }
}

/// Sub-matrix `m(rows, cols)`.
pub fn submatrix(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Sorted, deduplicated copy of `keep` and its complement in `0..n`.
pub fn split(n: usize, keep: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let rest = (0..n).filter(|v| kept.binary_search(v).is_err()).collect();
    (kept, rest)
}

/// `L(U,U) − L(U,Ū) L(Ū,Ū)⁺ L(Ū,U)`, indexed by the sorted `keep`.
pub fn schur_laplacian(l: &DMatrix<f64>, keep: &[usize]) -> DMatrix<f64> {
    let (kept, rest) = split(l.nrows(), keep);
    let luu = submatrix(l, &kept, &kept);
    if rest.is_empty() {
        return luu;
    }
    let lur = submatrix(l, &kept, &rest);
    let lrr = submatrix(l, &rest, &rest);
    let pinv = match lrr.clone().cholesky() {
        Some(c) => c.inverse(),
        None => svd_pseudoinverse(&lrr),
    };
    let s = luu - &lur * pinv * lur.transpose();
    (&s + s.transpose()) * 0.5
}

/// Schur complement `G_U` of `g` onto `keep`. Pairs whose eliminated weight
/// falls below `1e-12 · max degree` are treated as non-edges.
///
/// # Panics
/// If `keep` is empty or contains an out-of-range vertex.
pub fn schur_complement(g: &WeightedGraph, keep: &[usize]) -> ReducedGraph {
    assert!(
        !keep.is_empty(),
        "Schur complement needs a nonempty vertex set"
    );
    assert!(keep.iter().all(|&v| v < g.n()), "vertex out of range");
    let (vertices, _) = split(g.n(), keep);
    let s = schur_laplacian(&laplacian_matrix(g), &vertices);
    let graph = graph_from_laplacian(&s, weight_floor(&s, 1e-12))
        .expect("a Schur complement of a Laplacian is a Laplacian");
    ReducedGraph { graph, vertices }
}
