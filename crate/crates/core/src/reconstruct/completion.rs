//! Completing a partially known graph.

use std::collections::BTreeSet;

use super::{
    pinv_spd, schur_laplacian_by_queries, to_graph, ReconstructError, ReconstructionResult,
};
use crate::graph::io::PartialGraph;
use crate::graph::laplacian::{laplacian_bundle, laplacian_matrix, quadratic_form};
use crate::graph::schur::{split, submatrix};
use crate::graph::{ordered, WeightedGraph};
use crate::oracle::ErOracle;

/// A graph whose weights are known except on the pairs in `unknown`. Pairs
/// that are neither edges of `known` nor unknown have weight zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletionInstance {
    known: WeightedGraph,
    unknown: Vec<(usize, usize)>,
    weight_set: Vec<f64>,
}

impl CompletionInstance {
    pub fn new(
        known: WeightedGraph,
        unknown: Vec<(usize, usize)>,
        weight_set: Vec<f64>,
    ) -> Result<Self, ReconstructError> {
        let bad = |m: String| Err(ReconstructError::BadInstance(m));
        if weight_set.is_empty() {
            return bad("weight set is empty".into());
        }
        if let Some(w) = weight_set.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return bad(format!("candidate weight {w} is not a nonnegative number"));
        }
        let mut seen = BTreeSet::new();
        let mut pairs = Vec::with_capacity(unknown.len());
        for (u, v) in unknown {
            if u == v || u >= known.n() || v >= known.n() {
                return bad(format!("unknown pair ({u}, {v}) is not a vertex pair"));
            }
            let p = ordered(u, v);
            if !seen.insert(p) {
                return bad(format!("unknown pair ({u}, {v}) listed twice"));
            }
            if known.has_edge(u, v) {
                return bad(format!("pair ({u}, {v}) is both known and unknown"));
            }
            pairs.push(p);
        }
        Ok(CompletionInstance {
            known,
            unknown: pairs,
            weight_set,
        })
    }

    /// The instance obtained by hiding `unknown` pairs of `hidden`.
    pub fn hide(
        hidden: &WeightedGraph,
        unknown: Vec<(usize, usize)>,
        weight_set: Vec<f64>,
    ) -> Result<Self, ReconstructError> {
        let hidden_pairs: BTreeSet<(usize, usize)> =
            unknown.iter().map(|&(u, v)| ordered(u, v)).collect();
        let known = WeightedGraph::new(
            hidden.n(),
            hidden
                .edges()
                .iter()
                .filter(|e| !hidden_pairs.contains(&(e.u, e.v)))
                .map(|e| (e.u, e.v, e.w)),
        )
        .map_err(|e| ReconstructError::BadInstance(e.to_string()))?;
        Self::new(known, unknown, weight_set)
    }

    pub fn from_partial(p: PartialGraph) -> Result<Self, ReconstructError> {
        Self::new(p.known, p.unknown, p.weight_set)
    }

    pub fn to_partial(&self) -> PartialGraph {
        PartialGraph {
            known: self.known.clone(),
            unknown: self.unknown.clone(),
            weight_set: self.weight_set.clone(),
        }
    }

    pub fn known(&self) -> &WeightedGraph {
        &self.known
    }

    pub fn unknown(&self) -> &[(usize, usize)] {
        &self.unknown
    }

    pub fn weight_set(&self) -> &[f64] {
        &self.weight_set
    }

    pub fn n(&self) -> usize {
        self.known.n()
    }

    /// The known graph with `weights[t]` placed on the `t`-th unknown pair.
    pub fn fill(&self, weights: &[f64]) -> WeightedGraph {
        let extra = self
            .unknown
            .iter()
            .zip(weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&(u, v), &w)| (u, v, w));
        let edges = self
            .known
            .edges()
            .iter()
            .map(|e| (e.u, e.v, e.w))
            .chain(extra);
        WeightedGraph::new(self.n(), edges).expect("unknown pairs are disjoint from known edges")
    }
}

/// Fills the unknown entries from the Schur complement onto their endpoints
/// `U`, using `L(U,U) = L_U + L(U,Ū) L(Ū,Ū)⁺ L(Ū,U)`; everything on the right
/// except `L_U` involves only known entries.
pub fn complete_quadratic<O: ErOracle + ?Sized>(
    o: &mut O,
    inst: &CompletionInstance,
) -> Result<ReconstructionResult, ReconstructError> {
    let before = *o.ledger();
    if inst.unknown.is_empty() {
        return Ok(ReconstructionResult {
            graph: inst.known.clone(),
            queries: o.ledger().since(&before),
            candidates_evaluated: 0,
        });
    }
    let ends: Vec<usize> = inst.unknown.iter().flat_map(|&(u, v)| [u, v]).collect();
    let (u_set, rest) = split(inst.n(), &ends);
    let l_u = schur_laplacian_by_queries(o, &u_set)?;
    // Known part of the Laplacian; unknown pairs contribute nothing to rows
    // outside U, so L(U,Ū) and L(Ū,Ū) are exact here.
    let l_known = laplacian_matrix(&inst.known);
    let l_uu = if rest.is_empty() {
        l_u
    } else {
        let l_ur = submatrix(&l_known, &u_set, &rest);
        let l_rr = submatrix(&l_known, &rest, &rest);
        l_u + &l_ur * pinv_spd(&l_rr) * l_ur.transpose()
    };
    let unknown: BTreeSet<(usize, usize)> = inst.unknown.iter().copied().collect();
    let mut full = l_known.clone();
    for a in 0..u_set.len() {
        for b in a + 1..u_set.len() {
            let (u, v) = (u_set[a], u_set[b]);
            let recovered = -0.5 * (l_uu[(a, b)] + l_uu[(b, a)]);
            if unknown.contains(&(u, v)) {
                full[(u, v)] = -recovered;
                full[(v, u)] = -recovered;
            } else {
                let known = inst.known.weight(u, v).unwrap_or(0.0);
                if (recovered - known).abs() > 1e-6 * known.abs().max(1.0) {
                    return Err(ReconstructError::InconsistentKnownPart {
                        u,
                        v,
                        known,
                        recovered,
                    });
                }
            }
        }
    }
    for i in 0..inst.n() {
        let off: f64 = (0..inst.n())
            .filter(|&j| j != i)
            .map(|j| full[(i, j)])
            .sum();
        full[(i, i)] = -off;
    }
    Ok(ReconstructionResult {
        graph: to_graph(&full)?,
        queries: o.ledger().since(&before),
        candidates_evaluated: 0,
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-6 * a.abs().max(b.abs())
}

/// Steps `digits` as a base-`base` odometer, least significant first;
/// `false` after the last assignment.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Queries exactly the `k` unknown pairs, then tries all `s^k` weight
/// assignments and accepts the one whose resistances on those pairs match.
/// Disconnected candidates are skipped. All matches are collected before
/// deciding; more than one is reported as ambiguous.
pub fn complete_exhaustive<O: ErOracle + ?Sized>(
    o: &mut O,
    inst: &CompletionInstance,
) -> Result<ReconstructionResult, ReconstructError> {
    let before = *o.ledger();
    let mut target = Vec::with_capacity(inst.unknown.len());
    for &(u, v) in &inst.unknown {
        let r = o
            .er_query(u, v)?
            .finite()
            .ok_or(ReconstructError::Disconnected { u, v })?;
        target.push(r);
    }
    let s = inst.weight_set.len();
    let mut digits = vec![0usize; inst.unknown.len()];
    let mut evaluated = 0;
    let mut matches = Vec::new();
    loop {
        let weights: Vec<f64> = digits.iter().map(|&d| inst.weight_set[d]).collect();
        let candidate = inst.fill(&weights);
        if candidate.is_connected() {
            evaluated += 1;
            let pinv = laplacian_bundle(&candidate).pseudoinverse;
            let consistent = inst
                .unknown
                .iter()
                .zip(&target)
                .all(|(&(u, v), &r)| close(quadratic_form(&pinv, u, v), r));
            if consistent {
                matches.push(candidate);
            }
        }
        if !advance(&mut digits, s) {
            break;
        }
    }
    match matches.len() {
        0 => Err(ReconstructError::NoConsistentCompletion),
        1 => Ok(ReconstructionResult {
            graph: matches.pop().expect("one match"),
            queries: o.ledger().since(&before),
            candidates_evaluated: evaluated,
        }),
        count => Err(ReconstructError::AmbiguousCompletion { matches: count }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniquenessReport {
    /// Connected completions enumerated.
    pub connected: usize,
    /// Largest number of connected completions sharing one resistance
    /// vector on the unknown pairs.
    pub max_group: usize,
}

/// Enumerates every 0/1 completion of `unknown` over `known` (n ≤ 6) and
/// groups the connected ones by their resistances on `unknown`, comparing
/// vectors entrywise within `1e-9`.
pub fn uniqueness_brute_force(
    known: &WeightedGraph,
    unknown: &[(usize, usize)],
) -> Result<UniquenessReport, ReconstructError> {
    if known.n() > 6 {
        return Err(ReconstructError::BadInstance(format!(
            "brute force is limited to 6 vertices, got {}",
            known.n()
        )));
    }
    let inst = CompletionInstance::new(known.clone(), unknown.to_vec(), vec![0.0, 1.0])?;
    let mut vectors: Vec<Vec<f64>> = Vec::new();
    let mut digits = vec![0usize; unknown.len()];
    loop {
        let weights: Vec<f64> = digits.iter().map(|&d| d as f64).collect();
        let candidate = inst.fill(&weights);
        if candidate.is_connected() {
            let pinv = laplacian_bundle(&candidate).pseudoinverse;
            vectors.push(
                inst.unknown
                    .iter()
                    .map(|&(u, v)| quadratic_form(&pinv, u, v))
                    .collect(),
            );
        }
        if !advance(&mut digits, 2) {
            break;
        }
    }
    let same = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9);
    let max_group = vectors
        .iter()
        .map(|a| vectors.iter().filter(|b| same(a, b)).count())
        .max()
        .unwrap_or(0);
    Ok(UniquenessReport {
        connected: vectors.len(),
        max_group,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;
    use crate::oracle::HiddenGraphOracle;
    use crate::reconstruct::max_weight_error;

    #[test]
    fn quadratic_single_unknown_edge() {
        let c4 = generate::cycle(4).unwrap();
        let inst = CompletionInstance::hide(&c4, vec![(0, 1)], vec![0.0, 1.0]).unwrap();
        let mut o = HiddenGraphOracle::new(c4.clone());
        let res = complete_quadratic(&mut o, &inst).unwrap();
        assert!(max_weight_error(&res.graph, &c4) < 1e-9);
        assert_eq!(res.queries.distinct, 1);
    }

    #[test]
    fn quadratic_recovers_missing_edges_as_zero() {
        let g = generate::clique(5)
            .unwrap()
            .with_weight(0, 1, 0.0)
            .unwrap()
            .with_weight(2, 3, 0.0)
            .unwrap();
        let inst = CompletionInstance::hide(&g, vec![(0, 1), (2, 3)], vec![0.0, 1.0]).unwrap();
        let res = complete_quadratic(&mut HiddenGraphOracle::new(g.clone()), &inst).unwrap();
        assert_eq!(res.graph, g.clone().with_weight(0, 1, 0.0).unwrap());
        assert!(max_weight_error(&res.graph, &g) < 1e-9);
    }

    #[test]
    fn quadratic_detects_inconsistent_known_part() {
        let c4 = generate::cycle(4).unwrap();
        // (2, 3) is claimed to weigh 2 instead of 1.
        let known = WeightedGraph::new(4, [(2, 3, 2.0), (0, 3, 1.0)]).unwrap();
        let inst = CompletionInstance::new(known, vec![(0, 1), (1, 2)], vec![1.0]).unwrap();
        assert!(matches!(
            complete_quadratic(&mut HiddenGraphOracle::new(c4), &inst),
            Err(ReconstructError::InconsistentKnownPart { .. })
        ));
    }

    #[test]
    fn exhaustive_on_c4() {
        let c4 = generate::cycle(4).unwrap();
        let inst = CompletionInstance::hide(&c4, vec![(0, 2)], vec![0.0, 1.0]).unwrap();
        let mut o = HiddenGraphOracle::new(c4.clone());
        let res = complete_exhaustive(&mut o, &inst).unwrap();
        assert_eq!(res.graph, c4);
        assert_eq!(res.queries.distinct, 1);
        assert_eq!(res.candidates_evaluated, 2);
    }

    #[test]
    fn exhaustive_reports_missing_match() {
        let c4 = generate::cycle(4).unwrap();
        let inst = CompletionInstance::hide(&c4, vec![(0, 1)], vec![0.5, 2.0]).unwrap();
        assert_eq!(
            complete_exhaustive(&mut HiddenGraphOracle::new(c4), &inst),
            Err(ReconstructError::NoConsistentCompletion)
        );
    }

    #[test]
    fn brute_force_uniqueness() {
        let known = generate::path(4).unwrap();
        let report = uniqueness_brute_force(&known, &[(0, 2), (1, 3), (0, 3)]).unwrap();
        assert_eq!(report.connected, 8);
        assert_eq!(report.max_group, 1);
        let empty = uniqueness_brute_force(&known, &[]).unwrap();
        assert_eq!(
            empty,
            UniquenessReport {
                connected: 1,
                max_group: 1
            }
        );
    }

    #[test]
    fn instance_validation() {
        let p = generate::path(3).unwrap();
        assert!(CompletionInstance::new(p.clone(), vec![(0, 1)], vec![1.0]).is_err());
        assert!(CompletionInstance::new(p.clone(), vec![(0, 2), (2, 0)], vec![1.0]).is_err());
        assert!(CompletionInstance::new(p, vec![(0, 2)], vec![]).is_err());
    }
}
