use std::fmt;

/// Effective resistance between two vertices. Pairs in different connected
/// components have `Infinite` resistance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resistance {
    Finite(f64),
    Infinite,
}

impl Resistance {
    pub fn finite(self) -> Option<f64> {
        match self {
            Resistance::Finite(r) => Some(r),
            Resistance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Resistance::Finite(_))
    }

    /// `f64::INFINITY` for the infinite case; for display and sorting only.
    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    /// Equality under `tol`; two infinite values are equal.
    pub fn approx_eq(self, other: Resistance, tol: &Tolerance) -> bool {
        match (self, other) {
            (Resistance::Finite(a), Resistance::Finite(b)) => tol.eq(a, b),
            (Resistance::Infinite, Resistance::Infinite) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Resistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resistance::Finite(r) => write!(f, "{r}"),
            Resistance::Infinite => f.write_str("inf"),
        }
    }
}

/// Numeric comparison settings shared by every float-mode decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative tolerance for generic equality.
    pub rel: f64,
    /// Absolute floor used near zero.
    pub abs: f64,
    /// Absolute tolerance for triangle tightness and unit-difference tests.
    pub tight: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-8,
            abs: 1e-10,
            tight: 1e-8,
        }
    }
}

impl Tolerance {
    /// Default tolerance with `rel` and `tight` both set to `tol`.
    pub fn with_tol(tol: f64) -> Self {
        Tolerance {
            rel: tol,
            tight: tol,
            ..Tolerance::default()
        }
    }

    pub fn eq(&self, a: f64, b: f64) -> bool {
        let scale = a.abs().max(b.abs());
        (a - b).abs() <= self.abs.max(self.rel * scale)
    }

    pub fn tight_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.tight
    }
}

/// Symmetric matrix of pairwise effective resistances with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct ErMatrix {
    n: usize,
    entries: Vec<Resistance>,
}

impl ErMatrix {
    /// Builds from a row-major vector. Entries are assumed symmetric.
    pub fn from_entries(n: usize, entries: Vec<Resistance>) -> Self {
        assert_eq!(entries.len(), n * n, "ErMatrix needs n*n entries");
        ErMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Resistance {
        self.entries[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[Resistance] {
        &self.entries[u * self.n..(u + 1) * self.n]
    }

    pub fn is_all_finite(&self) -> bool {
        self.entries.iter().all(|r| r.is_finite())
    }

    /// Dense finite matrix, or `None` if some pair is disconnected.
    pub fn to_dense(&self) -> Option<nalgebra::DMatrix<f64>> {
        if !self.is_all_finite() {
            return None;
        }
        Some(nalgebra::DMatrix::from_fn(self.n, self.n, |i, j| {
            self.get(i, j).as_f64()
        }))
    }

    /// Largest absolute difference between finite entries, `None` if the
    /// matrices differ in size or disagree on which pairs are infinite.
    pub fn max_abs_diff(&self, other: &ErMatrix) -> Option<f64> {
        if self.n != other.n {
            return None;
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            match (a, b) {
                (Resistance::Finite(x), Resistance::Finite(y)) => worst = worst.max((x - y).abs()),
                (Resistance::Infinite, Resistance::Infinite) => {}
                _ => return None,
            }
        }
        Some(worst)
    }

    /// Checks symmetry, zero diagonal, positive off-diagonal entries and the
    /// triangle inequality on finite triples, with absolute slack `slack`.
    /// Returns a description of the first violation.
    pub fn check_metric(&self, slack: f64) -> Result<(), String> {
        let n = self.n;
        for u in 0..n {
            if self.get(u, u) != Resistance::Finite(0.0) {
                return Err(format!("diagonal entry {u} is {}", self.get(u, u)));
            }
            for v in 0..n {
                let (a, b) = (self.get(u, v), self.get(v, u));
                if !a.approx_eq(b, &Tolerance::default()) {
                    return Err(format!("asymmetric at ({u}, {v}): {a} vs {b}"));
                }
                if u != v && a.as_f64() <= 0.0 {
                    return Err(format!("non-positive entry at ({u}, {v})"));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (Some(ab), Some(bc), Some(ac)) = (
                        self.get(a, b).finite(),
                        self.get(b, c).finite(),
                        self.get(a, c).finite(),
                    ) else {
                        continue;
                    };
                    if ac > ab + bc + slack {
                        return Err(format!("triangle inequality fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_is_relative_with_absolute_floor() {
        let t = Tolerance::default();
        assert!(t.eq(1e6, 1e6 + 1e-3));
        assert!(!t.eq(1.0, 1.0 + 1e-6));
        assert!(t.eq(0.0, 5e-11));
        assert!(!t.eq(0.0, 1e-9));
    }

    #[test]
    fn infinite_only_equals_infinite() {
        let t = Tolerance::default();
        assert!(Resistance::Infinite.approx_eq(Resistance::Infinite, &t));
        assert!(!Resistance::Infinite.approx_eq(Resistance::Finite(1e300), &t));
        assert_eq!(Resistance::Infinite.to_string(), "inf");
    }
}
