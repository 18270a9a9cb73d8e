//! Shortest-path versus resistance queries: a clique test that needs only
//! `n − 1` resistance queries, and a graph pair that resistance queries tell
//! apart only at two vertices while one shortest-path query separates them.

use thiserror::Error;

use crate::graph::generate::{clique, sp_er_pair, GenError};
use crate::graph::{all_pairs_er, ErMatrix};
use crate::oracle::{ErOracle, HiddenGraphOracle, Hops, OracleError};
use crate::verify::{equal_monotone, Verdict, VerifyError, VerifyOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeparationError {
    #[error(transparent)]
    BadParams(#[from] GenError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Whether the hidden graph is `K_n`: every graph on `n` vertices is a
/// subgraph of `K_n`, so the monotone equality test applies.
pub fn clique_check<O: ErOracle + ?Sized>(o: &mut O) -> Result<Verdict, VerifyError> {
    let n = o.n();
    let known = clique(n).map_err(|_| VerifyError::KnownDisconnected)?;
    let verdict = equal_monotone(o, &known, &VerifyOptions::default())?;
    if !verdict.answer {
        // Repeats of answered pairs; no new distinct queries.
        for u in 1..n {
            if !o.er_query(0, u)?.is_finite() {
                return Err(VerifyError::Disconnected { u: 0, v: u });
            }
        }
    }
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyFamilyReport {
    pub n: usize,
    pub i: usize,
    pub j: usize,
    /// `R(v1, v2)` in `G` and in `H`.
    pub r_g_centers: f64,
    pub r_h_centers: f64,
    /// Largest `|R_G − R_H|` over pairs avoiding `v_i` and `v_j`.
    pub max_diff_avoiding: f64,
    /// Pairs with `|R_G − R_H| > 1e-9`.
    pub distinguishing_pairs: usize,
    /// Whether every distinguishing pair touches `v_i` or `v_j`.
    pub distinguishing_touch_ij: bool,
    /// `SP(v1, v2)` in `G` and in `H`, one query each.
    pub sp_g: Hops,
    pub sp_h: Hops,
    pub matrices: Option<(ErMatrix, ErMatrix)>,
}

impl AdjacencyFamilyReport {
    /// All claims of the construction hold.
    pub fn holds(&self) -> bool {
        (self.r_g_centers - 1.0).abs() <= 1e-9
            && (self.r_h_centers - 1.0).abs() <= 1e-9
            && self.max_diff_avoiding <= 1e-9
            && self.distinguishing_touch_ij
            && self.sp_g == Some(1)
            && self.sp_h == Some(2)
    }
}

/// Builds `G` and `H_{i,j}` (labels 1-indexed) and compares them pair by pair.
pub fn adjacency_family_report(
    n: usize,
    i: usize,
    j: usize,
    with_matrices: bool,
) -> Result<AdjacencyFamilyReport, SeparationError> {
    let (g, h) = sp_er_pair(n, i, j)?;
    let (rg, rh) = (all_pairs_er(&g), all_pairs_er(&h));
    let (vi, vj) = (i - 1, j - 1);
    let mut max_diff_avoiding = 0.0f64;
    let mut distinguishing_pairs = 0;
    let mut distinguishing_touch_ij = true;
    for x in 0..n {
        for y in x + 1..n {
            let d = (rg.get(x, y).as_f64() - rh.get(x, y).as_f64()).abs();
            let touches = [x, y].iter().any(|&z| z == vi || z == vj);
            if !touches {
                max_diff_avoiding = max_diff_avoiding.max(d);
            }
            if d > 1e-9 {
                distinguishing_pairs += 1;
                distinguishing_touch_ij &= touches;
            }
        }
    }
    let sp_g = HiddenGraphOracle::new(g).sp_query(0, 1)?;
    let sp_h = HiddenGraphOracle::new(h).sp_query(0, 1)?;
    Ok(AdjacencyFamilyReport {
        n,
        i,
        j,
        r_g_centers: rg.get(0, 1).as_f64(),
        r_h_centers: rh.get(0, 1).as_f64(),
        max_diff_avoiding,
        distinguishing_pairs,
        distinguishing_touch_ij,
        sp_g,
        sp_h,
        matrices: with_matrices.then_some((rg, rh)),
    })
}
