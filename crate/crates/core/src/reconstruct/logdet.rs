use nalgebra::DMatrix;

use crate::graph::laplacian::{
    laplacian_matrix, log_det_spd, quadratic_form, regularize, spd_inverse,
};
use crate::graph::{GraphError, WeightedGraph};

fn regularized(g: &WeightedGraph) -> Result<DMatrix<f64>, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    Ok(regularize(&laplacian_matrix(g)))
}

/// `log det(L + J/n)`.
pub fn log_det_regularized(g: &WeightedGraph) -> Result<f64, GraphError> {
    log_det_spd(&regularized(g)?).ok_or(GraphError::Disconnected)
}

/// `log det(L + J/n + Σ t·c·L_ij)` over `direction = [(i, j, c)]`, where
/// `L_ij = (1_i − 1_j)(1_i − 1_j)ᵀ`. `None` if the matrix is not positive
/// definite.
pub fn log_det_shifted(
    g: &WeightedGraph,
    direction: &[(usize, usize, f64)],
    t: f64,
) -> Result<Option<f64>, GraphError> {
    let mut m = regularized(g)?;
    for &(i, j, c) in direction {
        let s = t * c;
        m[(i, i)] += s;
        m[(j, j)] += s;
        m[(i, j)] -= s;
        m[(j, i)] -= s;
    }
    Ok(log_det_spd(&m))
}

/// `trace((L + J/n)⁻¹ L_ij)`, the derivative of `log det(L + J/n)` along the
/// weight of pair `(i, j)`; it equals `R(i, j)`.
pub fn logdet_directional_derivative(
    g: &WeightedGraph,
    i: usize,
    j: usize,
) -> Result<f64, GraphError> {
    let n = g.n();
    for vertex in [i, j] {
        if vertex >= n {
            return Err(GraphError::VertexOutOfRange { vertex, n });
        }
    }
    let inv = spd_inverse(&regularized(g)?).ok_or(GraphError::Disconnected)?;
    Ok(quadratic_form(&inv, i, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    #[test]
    fn derivative_is_the_resistance() {
        let tri = generate::cycle(3).unwrap();
        assert!((logdet_directional_derivative(&tri, 0, 2).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let p4 = generate::path(4).unwrap();
        assert!((logdet_directional_derivative(&p4, 0, 3).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn finite_difference_agrees() {
        let g = generate::cycle(7).unwrap();
        let h = 1e-5;
        let up = log_det_shifted(&g, &[(1, 4, 1.0)], h).unwrap().unwrap();
        let down = log_det_shifted(&g, &[(1, 4, 1.0)], -h).unwrap().unwrap();
        let fd = (up - down) / (2.0 * h);
        assert!((fd - logdet_directional_derivative(&g, 1, 4).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn disconnected_is_an_error() {
        let g = WeightedGraph::unweighted(3, [(0, 1)]).unwrap();
        assert_eq!(
            logdet_directional_derivative(&g, 0, 1),
            Err(GraphError::Disconnected)
        );
    }
}
