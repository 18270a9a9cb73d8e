//! Exact rational effective resistances.
//!
//! Each connected component is handled separately: its regularized Laplacian
//! `L_C + J/|C|` is inverted by Gauss–Jordan elimination over arbitrary
//! precision fractions, so integrality and tightness tests can be decided
//! without rounding. Intended for graphs with at most [`EXACT_MAX_N`] vertices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::WeightedGraph;

pub const EXACT_MAX_N: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("exact mode supports at most {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("weight {0} has no exact rational representation")]
    BadWeight(f64),
    #[error("regularized Laplacian of a component is singular")]
    Singular,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExactResistance {
    Finite(BigRational),
    Infinite,
}

impl ExactResistance {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExactResistance::Finite(r) => Some(r),
            ExactResistance::Infinite => None,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.finite().is_some_and(|r| r.is_integer())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactResistance::Finite(r) => ratio_to_f64(r),
            ExactResistance::Infinite => f64::INFINITY,
        }
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// All pairwise resistances of a graph in exact arithmetic.
#[derive(Debug, Clone)]
pub struct ExactResistances {
    n: usize,
    entries: Vec<ExactResistance>,
}

impl ExactResistances {
    pub fn compute(g: &WeightedGraph) -> Result<Self, ExactError> {
        let n = g.n();
        if n > EXACT_MAX_N {
            return Err(ExactError::TooLarge {
                n,
                max: EXACT_MAX_N,
            });
        }
        let labels = g.components();
        let count = labels.iter().max().map_or(0, |c| c + 1);
        let mut entries = vec![ExactResistance::Infinite; n * n];
        for v in 0..n {
            entries[v * n + v] = ExactResistance::Finite(BigRational::zero());
        }
        for c in 0..count {
            let members: Vec<usize> = (0..n).filter(|&v| labels[v] == c).collect();
            if members.len() < 2 {
                continue;
            }
            let inv = component_regularized_inverse(g, &members)?;
            let k = members.len();
            for a in 0..k {
                for b in a + 1..k {
                    let r = &inv[a][a] + &inv[b][b] - &inv[a][b] - &inv[b][a];
                    let (u, v) = (members[a], members[b]);
                    entries[u * n + v] = ExactResistance::Finite(r.clone());
                    entries[v * n + u] = ExactResistance::Finite(r);
                }
            }
        }
        Ok(ExactResistances { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> &ExactResistance {
        &self.entries[u * self.n + v]
    }
}

fn to_rational(w: f64) -> Result<BigRational, ExactError> {
    BigRational::from_float(w).ok_or(ExactError::BadWeight(w))
}

/// `(L_C + J/|C|)⁻¹` for the component spanned by `members`.
fn component_regularized_inverse(
    g: &WeightedGraph,
    members: &[usize],
) -> Result<Vec<Vec<BigRational>>, ExactError> {
    let k = members.len();
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in members.iter().enumerate() {
        local[v] = i;
    }
    let shift = BigRational::new(BigInt::one(), BigInt::from(k));
    let mut m = vec![vec![shift.clone(); k]; k];
    for e in g.edges() {
        let (a, b) = (local[e.u], local[e.v]);
        if a == usize::MAX {
            continue;
        }
        let w = to_rational(e.w)?;
        m[a][a] += &w;
        m[b][b] += &w;
        m[a][b] -= &w;
        m[b][a] -= &w;
    }
    rational_inverse(m).ok_or(ExactError::Singular)
}

/// Gauss–Jordan inverse over the rationals; `None` for singular input.
pub fn rational_inverse(mut m: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let k = m.len();
    let mut inv: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..k {
            m[col][j] = &m[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..k {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for j in 0..k {
                let dm = &factor * &m[col][j];
                m[r][j] -= dm;
                let di = &factor * &inv[col][j];
                inv[r][j] -= di;
            }
        }
    }
    Some(inv)
}

/// `|a − b| == c` exactly.
pub fn abs_diff_equals(a: &BigRational, b: &BigRational, c: &BigRational) -> bool {
    (a - b).abs() == *c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cycle_resistances_are_exact() {
        let c4 = WeightedGraph::unweighted(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let r = ExactResistances::compute(&c4).unwrap();
        assert_eq!(r.get(0, 1), &ExactResistance::Finite(q(3, 4)));
        assert_eq!(r.get(0, 2), &ExactResistance::Finite(q(1, 1)));
        assert!(r.get(0, 2).is_integer());
        assert!(!r.get(0, 1).is_integer());
    }

    #[test]
    fn tree_resistances_are_integers() {
        let g = WeightedGraph::unweighted(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let r = ExactResistances::compute(&g).unwrap();
        assert_eq!(r.get(0, 4), &ExactResistance::Finite(q(3, 1)));
        assert_eq!(r.get(2, 4), &ExactResistance::Finite(q(3, 1)));
    }

    #[test]
    fn components_and_weights() {
        let g = WeightedGraph::new(4, [(0, 1, 2.0), (2, 3, 0.5)]).unwrap();
        let r = ExactResistances::compute(&g).unwrap();
        assert_eq!(r.get(0, 1), &ExactResistance::Finite(q(1, 2)));
        assert_eq!(r.get(2, 3), &ExactResistance::Finite(q(2, 1)));
        assert_eq!(r.get(1, 2), &ExactResistance::Infinite);
    }

    #[test]
    fn too_large_is_rejected() {
        let g = WeightedGraph::empty(EXACT_MAX_N + 1).unwrap();
        assert!(matches!(
            ExactResistances::compute(&g),
            Err(ExactError::TooLarge { .. })
        ));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        assert!(rational_inverse(vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]]).is_none());
    }
}
