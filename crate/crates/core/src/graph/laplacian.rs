//! Laplacian matrices and effective resistance.
//!
//! For a connected graph the pseudoinverse is obtained from the regularized
//! Laplacian `L + J/n`, which is positive definite, through the identity
//! `L⁺ = (L + J/n)⁻¹ − J/n`. Disconnected graphs fall back to an SVD
//! pseudoinverse.

use nalgebra::{DMatrix, DVector};

use super::{GraphError, Resistance, WeightedGraph};
use crate::graph::resistance::ErMatrix;

/// The matrices associated with a weighted graph.
#[derive(Debug, Clone)]
pub struct LaplacianBundle {
    /// `D − A`.
    pub laplacian: DMatrix<f64>,
    /// `L + J/n`.
    pub regularized: DMatrix<f64>,
    /// Moore–Penrose pseudoinverse of `L`.
    pub pseudoinverse: DMatrix<f64>,
    /// Signed `n × m` incidence matrix; edge `(u, v)` with `u < v` has `+1`
    /// at `u` and `−1` at `v`.
    pub incidence: DMatrix<f64>,
    /// Edge weights in [`WeightedGraph::edges`] order.
    pub weights: DVector<f64>,
    pub connected: bool,
}

pub fn laplacian_matrix(g: &WeightedGraph) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    for e in g.edges() {
        l[(e.u, e.v)] -= e.w;
        l[(e.v, e.u)] -= e.w;
        l[(e.u, e.u)] += e.w;
        l[(e.v, e.v)] += e.w;
    }
    l
}

/// `L + J/n`.
pub fn regularize(l: &DMatrix<f64>) -> DMatrix<f64> {
    let n = l.nrows();
    l.add_scalar(1.0 / n as f64)
}

/// Inverse of a symmetric positive definite matrix, `None` if the Cholesky
/// factorization fails.
pub fn spd_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    m.clone().cholesky().map(|c| c.inverse())
}

/// `log det` of a symmetric positive definite matrix via Cholesky.
pub fn log_det_spd(m: &DMatrix<f64>) -> Option<f64> {
    let chol = m.clone().cholesky()?;
    let l = chol.l_dirty();
    Some(2.0 * (0..m.nrows()).map(|i| l[(i, i)].ln()).sum::<f64>())
}

/// General pseudoinverse through the SVD with a relative singular-value cutoff.
pub fn svd_pseudoinverse(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.is_empty() {
        return m.clone();
    }
    let scale = m.amax().max(1.0);
    let eps = 1e-10 * scale * m.nrows() as f64;
    m.clone()
        .svd(true, true)
        .pseudo_inverse(eps)
        .expect("both singular vector sets were requested")
}

/// Pseudoinverse of a Laplacian: regularized inverse when that succeeds,
/// SVD otherwise.
pub fn laplacian_pseudoinverse(l: &DMatrix<f64>) -> DMatrix<f64> {
    let n = l.nrows();
    let jn = 1.0 / n as f64;
    match spd_inverse(&regularize(l)) {
        Some(inv) => inv.add_scalar(-jn),
        None => svd_pseudoinverse(l),
    }
}

pub fn laplacian_bundle(g: &WeightedGraph) -> LaplacianBundle {
    let laplacian = laplacian_matrix(g);
    let regularized = regularize(&laplacian);
    let connected = g.is_connected();
    let pseudoinverse = if connected {
        match spd_inverse(&regularized) {
            Some(inv) => inv.add_scalar(-1.0 / g.n() as f64),
            None => svd_pseudoinverse(&laplacian),
        }
    } else {
        svd_pseudoinverse(&laplacian)
    };
    let mut incidence = DMatrix::zeros(g.n(), g.m());
    for (k, e) in g.edges().iter().enumerate() {
        incidence[(e.u, k)] = 1.0;
        incidence[(e.v, k)] = -1.0;
    }
    let weights = DVector::from_iterator(g.m(), g.edges().iter().map(|e| e.w));
    LaplacianBundle {
        laplacian,
        regularized,
        pseudoinverse,
        incidence,
        weights,
        connected,
    }
}

/// `(1_u − 1_v)ᵀ P (1_u − 1_v)` for a symmetric matrix `P`; exactly
/// symmetric in `u` and `v`.
pub fn quadratic_form(p: &DMatrix<f64>, u: usize, v: usize) -> f64 {
    p[(u, u)] + p[(v, v)] - (p[(u, v)] + p[(v, u)])
}

fn resistances_from_pinv(pinv: &DMatrix<f64>, labels: &[usize]) -> ErMatrix {
    let n = pinv.nrows();
    let mut entries = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            entries.push(if u == v {
                Resistance::Finite(0.0)
            } else if labels[u] != labels[v] {
                Resistance::Infinite
            } else {
                Resistance::Finite(quadratic_form(pinv, u, v))
            });
        }
    }
    ErMatrix::from_entries(n, entries)
}

pub fn effective_resistance(g: &WeightedGraph, u: usize, v: usize) -> Resistance {
    if u == v {
        return Resistance::Finite(0.0);
    }
    let labels = g.components();
    if labels[u] != labels[v] {
        return Resistance::Infinite;
    }
    let bundle = laplacian_bundle(g);
    Resistance::Finite(quadratic_form(&bundle.pseudoinverse, u, v))
}

pub fn all_pairs_er(g: &WeightedGraph) -> ErMatrix {
    let bundle = laplacian_bundle(g);
    resistances_from_pinv(&bundle.pseudoinverse, &g.components())
}

/// `−½ (I − J/n) R (I − J/n)`, which equals `L⁺` for a connected graph.
pub fn pinv_from_resistances(r: &DMatrix<f64>) -> DMatrix<f64> {
    let n = r.nrows();
    let centering = DMatrix::identity(n, n).add_scalar(-1.0 / n as f64);
    (&centering * r * &centering) * -0.5
}

/// Recovers the Laplacian of a connected graph from its full resistance
/// matrix, `None` if the recovered regularized pseudoinverse is not positive
/// definite.
pub fn laplacian_from_resistances(r: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = r.nrows();
    if n == 1 {
        return Some(DMatrix::zeros(1, 1));
    }
    let jn = 1.0 / n as f64;
    let reg_inv = pinv_from_resistances(r).add_scalar(jn);
    let l = spd_inverse(&reg_inv)?.add_scalar(-jn);
    Some(symmetrize(l))
}

pub(crate) fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// Edge-existence floor for recovered Laplacians: `rel · max diagonal`.
pub fn weight_floor(l: &DMatrix<f64>, rel: f64) -> f64 {
    let max_diag = (0..l.nrows()).map(|i| l[(i, i)]).fold(0.0, f64::max);
    rel * max_diag
}

/// Reads a graph off a Laplacian-like matrix: pair `{i, j}` becomes an edge of
/// weight `−l[i][j]` when that exceeds `floor`.
pub fn graph_from_laplacian(l: &DMatrix<f64>, floor: f64) -> Result<WeightedGraph, GraphError> {
    let n = l.nrows();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let w = -0.5 * (l[(i, j)] + l[(j, i)]);
            if w > floor {
                edges.push((i, j, w));
            }
        }
    }
    WeightedGraph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit_path(n: usize) -> WeightedGraph {
        WeightedGraph::unweighted(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn single_edge_laplacian() {
        let g = unit_path(2);
        let l = laplacian_matrix(&g);
        assert_eq!(l, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn bundle_invariants_hold() {
        let g =
            WeightedGraph::new(4, [(0, 1, 2.0), (1, 2, 0.5), (2, 3, 1.0), (0, 3, 3.0)]).unwrap();
        let b = laplacian_bundle(&g);
        for i in 0..4 {
            assert_abs_diff_eq!(b.laplacian.row(i).sum(), 0.0, epsilon = 1e-12);
            for j in 0..4 {
                assert_abs_diff_eq!(
                    b.regularized[(i, j)] - b.laplacian[(i, j)],
                    0.25,
                    epsilon = 1e-15
                );
            }
        }
        let w = DMatrix::from_diagonal(&b.weights);
        let from_incidence = &b.incidence * w * b.incidence.transpose();
        assert_abs_diff_eq!(from_incidence, b.laplacian, epsilon = 1e-12);
        let lpl = &b.laplacian * &b.pseudoinverse * &b.laplacian;
        assert_abs_diff_eq!(lpl, b.laplacian, epsilon = 1e-10);
    }

    #[test]
    fn disconnected_pseudoinverse_is_block_diagonal() {
        let g = WeightedGraph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        let b = laplacian_bundle(&g);
        assert!(!b.connected);
        assert_abs_diff_eq!(b.pseudoinverse[(0, 0)], 0.25, epsilon = 1e-10);
        assert_abs_diff_eq!(b.pseudoinverse[(0, 2)], 0.0, epsilon = 1e-10);
        let lpl = &b.laplacian * &b.pseudoinverse * &b.laplacian;
        assert_abs_diff_eq!(lpl, b.laplacian, epsilon = 1e-10);
    }

    #[test]
    fn path_and_triangle_resistances() {
        assert_eq!(
            effective_resistance(&unit_path(4), 0, 3)
                .finite()
                .map(|r| (r * 1e9).round()),
            Some(3e9)
        );
        let tri = WeightedGraph::unweighted(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        for (u, v) in [(0, 1), (1, 2), (0, 2)] {
            assert_abs_diff_eq!(
                effective_resistance(&tri, u, v).as_f64(),
                2.0 / 3.0,
                epsilon = 1e-12
            );
        }
        assert_eq!(effective_resistance(&tri, 1, 1), Resistance::Finite(0.0));
    }

    #[test]
    fn star_and_cycle_all_pairs() {
        let star = WeightedGraph::unweighted(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let r = all_pairs_er(&star);
        assert_abs_diff_eq!(r.get(0, 2).as_f64(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.get(1, 3).as_f64(), 2.0, epsilon = 1e-12);
        let c4 = WeightedGraph::unweighted(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let r = all_pairs_er(&c4);
        assert_abs_diff_eq!(r.get(0, 1).as_f64(), 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(r.get(0, 2).as_f64(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cross_component_is_infinite() {
        let g = WeightedGraph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        let r = all_pairs_er(&g);
        assert_eq!(r.get(0, 3), Resistance::Infinite);
        assert_abs_diff_eq!(r.get(2, 3).as_f64(), 1.0, epsilon = 1e-10);
        assert_eq!(effective_resistance(&g, 1, 2), Resistance::Infinite);
    }

    #[test]
    fn resistances_round_trip_to_laplacian() {
        let g =
            WeightedGraph::new(4, [(0, 1, 2.0), (1, 2, 0.5), (2, 3, 1.0), (0, 2, 1.5)]).unwrap();
        let r = all_pairs_er(&g).to_dense().unwrap();
        let l = laplacian_from_resistances(&r).unwrap();
        assert_abs_diff_eq!(l, laplacian_matrix(&g), epsilon = 1e-10);
        let back = graph_from_laplacian(&l, weight_floor(&l, 1e-7)).unwrap();
        assert_eq!(back.m(), 4);
    }

    #[test]
    fn log_det_of_diagonal() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 3.0]));
        assert_abs_diff_eq!(log_det_spd(&m).unwrap(), 6f64.ln(), epsilon = 1e-14);
        assert!(log_det_spd(&DMatrix::zeros(2, 2)).is_none());
    }
}
