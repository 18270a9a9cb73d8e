use std::collections::{BTreeSet, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ball::{unit_ball, BallStrategy};
use super::{ceil_over, check_eps, sample_vertex, Decision, PropertyError, Reason, TestOutcome};
use crate::graph::Tolerance;
use crate::oracle::{ErOracle, QueryLedger};
use crate::reconstruct::{neighbors_in_ball, ReconstructError};
use crate::verify::{is_cut_vertex, same_biconnected_component, VerifyOptions};

fn outcome(
    decision: Decision,
    reason: Reason,
    samples_used: usize,
    queries: QueryLedger,
) -> TestOutcome {
    TestOutcome {
        decision,
        reason,
        samples_used,
        queries,
        budget_constant: None,
    }
}

/// Accepts every vertex-biconnected graph; rejects a graph that needs `εm`
/// added edges with probability at least 2/3.
///
/// After checking connectivity from vertex 0, rejects if 0 is a cut vertex
/// or one of `⌈4/ε⌉` vertices drawn uniformly from the rest lies outside
/// 0's biconnected component.
pub fn test_vertex_biconnectivity<O: ErOracle + ?Sized>(
    o: &mut O,
    eps: f64,
    seed: u64,
) -> Result<TestOutcome, PropertyError> {
    let eps = check_eps(eps)?;
    let n = o.n();
    let before = *o.ledger();
    let opts = VerifyOptions::default();
    for u in 1..n {
        if !o.er_query(0, u)?.is_finite() {
            let q = o.ledger().since(&before);
            return Ok(outcome(
                Decision::Reject,
                Reason::Disconnected { u: 0, v: u },
                0,
                q,
            ));
        }
    }
    if n < 3 {
        return Ok(outcome(
            Decision::Accept,
            Reason::NoEvidence,
            0,
            o.ledger().since(&before),
        ));
    }
    let cut = is_cut_vertex(o, 0, &opts)?;
    if cut.answer {
        let reason = Reason::CutVertexFound {
            vertex: 0,
            witness: cut.witness,
        };
        return Ok(outcome(
            Decision::Reject,
            reason,
            0,
            o.ledger().since(&before),
        ));
    }
    let s = ceil_over(4.0, eps);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for used in 1..=s {
        let x = sample_vertex(&mut rng, 1, n);
        let same = same_biconnected_component(o, 0, x, &opts)?;
        if !same.answer {
            let reason = Reason::DifferentBiconnectedComponent {
                a: 0,
                b: x,
                witness: same.witness,
            };
            return Ok(outcome(
                Decision::Reject,
                reason,
                used,
                o.ledger().since(&before),
            ));
        }
    }
    Ok(outcome(
        Decision::Accept,
        Reason::NoEvidence,
        s,
        o.ledger().since(&before),
    ))
}

enum Exploration {
    Abandoned,
    Covered,
    Reject(Reason),
}

/// Breadth-first search from `root` that learns each vertex's neighbors from
/// the Schur complement onto its unit ball.
fn explore<O: ErOracle + ?Sized>(
    o: &mut O,
    root: usize,
    max_ball: usize,
    max_visits: usize,
    strategy: BallStrategy,
    tol: &Tolerance,
) -> Result<Exploration, PropertyError> {
    let n = o.n();
    let mut visited = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let ball = unit_ball(o, u, strategy)?;
        if ball.len() + 1 > max_ball {
            return Ok(Exploration::Abandoned);
        }
        let neighbors = match neighbors_in_ball(o, u, &ball) {
            Ok(nb) => nb,
            Err(ReconstructError::Disconnected { u, v }) => {
                return Ok(Exploration::Reject(Reason::Disconnected { u, v }))
            }
            Err(e) => return Err(e.into()),
        };
        for w in neighbors {
            let r = ball
                .iter()
                .find(|&&(x, _)| x == w)
                .map(|&(_, r)| r.as_f64())
                .expect("neighbors lie in the ball");
            if tol.tight_eq(r, 1.0) {
                return Ok(Exploration::Reject(Reason::CutEdgeFound {
                    u: u.min(w),
                    v: u.max(w),
                }));
            }
            if visited.insert(w) {
                if visited.len() > max_visits {
                    return Ok(Exploration::Abandoned);
                }
                queue.push_back(w);
            }
        }
    }
    if visited.len() < n {
        return Ok(Exploration::Reject(Reason::SmallLowDegreeComponent {
            root,
            size: visited.len(),
        }));
    }
    Ok(Exploration::Covered)
}

/// Accepts every edge-biconnected graph; rejects a graph that needs more
/// than `εm` added edges with probability at least 2/3.
///
/// From each of `⌈16/ε⌉` uniform roots, explores breadth-first and rejects
/// on an edge of resistance one. A root is abandoned once a unit ball holds
/// more than `⌈4/ε⌉ + 2` vertices or more than `⌈4/ε⌉` vertices are visited,
/// since its component is then too large or has too many cut edges to be
/// one the proof counts on. Unit balls come from sorted-ball requests when
/// the oracle offers them.
pub fn test_edge_biconnectivity<O: ErOracle + ?Sized>(
    o: &mut O,
    eps: f64,
    seed: u64,
) -> Result<TestOutcome, PropertyError> {
    let eps = check_eps(eps)?;
    let n = o.n();
    let before = *o.ledger();
    let budget = n as f64 / (eps * eps) + 1.0 / eps.powi(4);
    let finish = |o: &O, decision, reason, used| {
        let queries = o.ledger().since(&before);
        TestOutcome {
            decision,
            reason,
            samples_used: used,
            queries,
            budget_constant: Some(queries.distinct as f64 / budget),
        }
    };
    if n < 2 {
        return Ok(finish(o, Decision::Accept, Reason::NoEvidence, 0));
    }
    let roots = ceil_over(16.0, eps);
    let small = ceil_over(4.0, eps);
    let strategy = BallStrategy::preferred(o);
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for used in 1..=roots {
        let root = sample_vertex(&mut rng, 0, n);
        match explore(o, root, small + 2, small, strategy, &tol)? {
            Exploration::Abandoned => {}
            Exploration::Covered => {
                return Ok(finish(o, Decision::Accept, Reason::NoEvidence, used));
            }
            Exploration::Reject(reason) => return Ok(finish(o, Decision::Reject, reason, used)),
        }
    }
    Ok(finish(o, Decision::Accept, Reason::NoEvidence, roots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, WeightedGraph};
    use crate::oracle::HiddenGraphOracle;

    fn vbc(g: WeightedGraph, eps: f64, seed: u64) -> TestOutcome {
        test_vertex_biconnectivity(&mut HiddenGraphOracle::new(g), eps, seed).unwrap()
    }

    fn ebc(g: WeightedGraph, eps: f64, seed: u64) -> TestOutcome {
        test_edge_biconnectivity(&mut HiddenGraphOracle::new(g), eps, seed).unwrap()
    }

    #[test]
    fn cycle_is_accepted_by_both() {
        for seed in 0..5 {
            assert!(vbc(generate::cycle(8).unwrap(), 0.25, seed).accepted());
            assert!(ebc(generate::cycle(8).unwrap(), 0.25, seed).accepted());
        }
    }

    #[test]
    fn star_center_is_a_cut_vertex() {
        let out = vbc(generate::star(20).unwrap(), 0.5, 0);
        assert_eq!(out.decision, Decision::Reject);
        assert!(matches!(
            out.reason,
            Reason::CutVertexFound { vertex: 0, .. }
        ));
        assert_eq!(out.queries.distinct, 19 + 18);
    }

    #[test]
    fn pendant_vertex_is_caught() {
        let g = WeightedGraph::unweighted(3, [(0, 1), (1, 2)]).unwrap();
        let out = vbc(g, 0.5, 3);
        assert_eq!(out.decision, Decision::Reject);
        assert!(matches!(
            out.reason,
            Reason::DifferentBiconnectedComponent { a: 0, b: 2, .. }
        ));
    }

    #[test]
    fn vertex_tester_reports_disconnection() {
        let g = WeightedGraph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        let out = vbc(g.clone(), 1.0, 0);
        assert_eq!(out.reason, Reason::Disconnected { u: 0, v: 2 });
        assert!(!ebc(g, 1.0, 0).accepted());
    }

    #[test]
    fn star_edges_are_bridges() {
        let out = ebc(generate::star(20).unwrap(), 0.5, 0);
        assert_eq!(out.decision, Decision::Reject);
        assert!(matches!(out.reason, Reason::CutEdgeFound { .. }));
        assert!(out.budget_constant.unwrap() > 0.0);
    }

    #[test]
    fn bad_epsilon() {
        let mut o = HiddenGraphOracle::new(generate::cycle(4).unwrap());
        assert_eq!(
            test_vertex_biconnectivity(&mut o, 0.0, 0),
            Err(PropertyError::BadEpsilon(0.0))
        );
        assert!(test_edge_biconnectivity(&mut o, 1.5, 0).is_err());
    }

    #[test]
    fn rounding_of_sample_counts() {
        assert_eq!(ceil_over(4.0, 0.5), 8);
        assert_eq!(ceil_over(4.0, 0.3), 14);
        assert_eq!(ceil_over(16.0, 0.1), 160);
    }
}
