//! Running bounded-degree-model testers against a resistance oracle.
//!
//! A tester sees the graph only through `degree(v)` and `neighbor(v, i)`.
//! Over an oracle each first touch of a vertex costs one neighbor discovery,
//! at most `n + ρ²` queries where `ρ` is the largest unit ball.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ball::{unit_ball, BallStrategy};
use super::{ceil_over, check_eps, sample_vertex, Decision, PropertyError, Reason, TestOutcome};
use crate::graph::WeightedGraph;
use crate::oracle::ErOracle;
use crate::reconstruct::neighbors_in_ball;

/// Adjacency-list access in the bounded-degree model. Neighbors are listed
/// by ascending id.
pub trait NeighborAccess {
    fn n(&self) -> usize;

    fn degree(&mut self, v: usize) -> Result<usize, PropertyError>;

    fn neighbor(&mut self, v: usize, i: usize) -> Result<Option<usize>, PropertyError>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum TesterVerdict {
    Accept,
    Reject {
        property: &'static str,
        evidence: Vec<usize>,
    },
}

pub trait BoundedDegreeTester {
    fn degree_bound(&self) -> usize;

    fn epsilon(&self) -> f64;

    fn run(
        &self,
        g: &mut dyn NeighborAccess,
        rng: &mut ChaCha8Rng,
    ) -> Result<TesterVerdict, PropertyError>;
}

/// Reads the graph directly.
pub struct AdjacencyAccess {
    lists: Vec<Vec<usize>>,
}

impl AdjacencyAccess {
    pub fn new(g: &WeightedGraph) -> Self {
        let lists = (0..g.n())
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&(u, _)| u).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        AdjacencyAccess { lists }
    }
}

impl NeighborAccess for AdjacencyAccess {
    fn n(&self) -> usize {
        self.lists.len()
    }

    fn degree(&mut self, v: usize) -> Result<usize, PropertyError> {
        Ok(self.lists[v].len())
    }

    fn neighbor(&mut self, v: usize, i: usize) -> Result<Option<usize>, PropertyError> {
        Ok(self.lists[v].get(i).copied())
    }
}

/// Serves callbacks from memoized neighbor discovery over an oracle.
pub struct ErNeighborAccess<'a, O: ErOracle + ?Sized> {
    oracle: &'a mut O,
    bound: usize,
    strategy: BallStrategy,
    memo: HashMap<usize, Vec<usize>>,
    largest_ball: usize,
}

impl<'a, O: ErOracle + ?Sized> ErNeighborAccess<'a, O> {
    pub fn new(oracle: &'a mut O, bound: usize) -> Self {
        let strategy = BallStrategy::preferred(oracle);
        ErNeighborAccess {
            oracle,
            bound,
            strategy,
            memo: HashMap::new(),
            largest_ball: 0,
        }
    }

    /// Vertices whose neighbors have been discovered.
    pub fn discovered(&self) -> usize {
        self.memo.len()
    }

    /// The largest unit ball seen, counting its center.
    pub fn largest_ball(&self) -> usize {
        self.largest_ball
    }

    fn list(&mut self, v: usize) -> Result<&[usize], PropertyError> {
        if !self.memo.contains_key(&v) {
            let ball = unit_ball(self.oracle, v, self.strategy)?;
            self.largest_ball = self.largest_ball.max(ball.len() + 1);
            let nb = neighbors_in_ball(self.oracle, v, &ball)?;
            if nb.len() > self.bound {
                return Err(PropertyError::DegreeBoundExceeded {
                    vertex: v,
                    degree: nb.len(),
                    bound: self.bound,
                });
            }
            self.memo.insert(v, nb);
        }
        Ok(&self.memo[&v])
    }
}

impl<O: ErOracle + ?Sized> NeighborAccess for ErNeighborAccess<'_, O> {
    fn n(&self) -> usize {
        self.oracle.n()
    }

    fn degree(&mut self, v: usize) -> Result<usize, PropertyError> {
        Ok(self.list(v)?.len())
    }

    fn neighbor(&mut self, v: usize, i: usize) -> Result<Option<usize>, PropertyError> {
        Ok(self.list(v)?.get(i).copied())
    }
}

/// Counts callbacks passing through to an inner access.
struct Counting<'a> {
    inner: &'a mut dyn NeighborAccess,
    calls: usize,
}

impl NeighborAccess for Counting<'_> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn degree(&mut self, v: usize) -> Result<usize, PropertyError> {
        self.calls += 1;
        self.inner.degree(v)
    }

    fn neighbor(&mut self, v: usize, i: usize) -> Result<Option<usize>, PropertyError> {
        self.calls += 1;
        self.inner.neighbor(v, i)
    }
}

fn run_counted<T: BoundedDegreeTester + ?Sized>(
    t: &T,
    access: &mut dyn NeighborAccess,
    seed: u64,
) -> Result<(TesterVerdict, usize), PropertyError> {
    check_eps(t.epsilon())?;
    let mut counting = Counting {
        inner: access,
        calls: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let verdict = t.run(&mut counting, &mut rng)?;
    Ok((verdict, counting.calls))
}

fn to_outcome(verdict: TesterVerdict) -> (Decision, Reason) {
    match verdict {
        TesterVerdict::Accept => (Decision::Accept, Reason::NoEvidence),
        TesterVerdict::Reject { property, evidence } => (
            Decision::Reject,
            Reason::TesterRejected { property, evidence },
        ),
    }
}

/// What an adapted run cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdapterCost {
    pub callbacks: usize,
    /// Vertices whose neighbors were discovered.
    pub discoveries: usize,
    /// Largest unit ball met, counting its center.
    pub rho: usize,
    pub er_queries: usize,
    /// `callbacks · (n + ρ²)`.
    pub bound: f64,
}

/// Runs `t` directly on `g`. Returns the outcome and the callback count.
pub fn run_direct<T: BoundedDegreeTester + ?Sized>(
    g: &WeightedGraph,
    t: &T,
    seed: u64,
) -> Result<(TestOutcome, usize), PropertyError> {
    let mut access = AdjacencyAccess::new(g);
    let (verdict, calls) = run_counted(t, &mut access, seed)?;
    let (decision, reason) = to_outcome(verdict);
    let outcome = TestOutcome {
        decision,
        reason,
        samples_used: 0,
        queries: Default::default(),
        budget_constant: None,
    };
    Ok((outcome, calls))
}

/// Runs `t` on the unweighted hidden graph behind `o`, serving each
/// callback from neighbor discovery. The decision is the one `t` reaches on
/// the graph itself with the same seed.
pub fn adapt_bounded_degree_tester<O: ErOracle + ?Sized, T: BoundedDegreeTester + ?Sized>(
    o: &mut O,
    t: &T,
    seed: u64,
) -> Result<(TestOutcome, AdapterCost), PropertyError> {
    let n = o.n();
    let before = *o.ledger();
    let mut access = ErNeighborAccess::new(o, t.degree_bound());
    let (verdict, callbacks) = run_counted(t, &mut access, seed)?;
    let discoveries = access.discovered();
    let rho = access.largest_ball();
    let queries = o.ledger().since(&before);
    let (decision, reason) = to_outcome(verdict);
    let cost = AdapterCost {
        callbacks,
        discoveries,
        rho,
        er_queries: queries.distinct,
        bound: callbacks as f64 * (n + rho * rho) as f64,
    };
    let outcome = TestOutcome {
        decision,
        reason,
        samples_used: discoveries,
        queries,
        budget_constant: None,
    };
    Ok((outcome, cost))
}

/// Triangle-freeness in the bounded-degree model: samples `⌈2/ε⌉` vertices
/// and looks for a triangle through each within radius two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleFreeness {
    pub degree_bound: usize,
    pub epsilon: f64,
}

impl TriangleFreeness {
    fn neighbors(g: &mut dyn NeighborAccess, v: usize) -> Result<Vec<usize>, PropertyError> {
        let d = g.degree(v)?;
        let mut out = Vec::with_capacity(d);
        for i in 0..d {
            if let Some(u) = g.neighbor(v, i)? {
                out.push(u);
            }
        }
        Ok(out)
    }
}

impl BoundedDegreeTester for TriangleFreeness {
    fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn run(
        &self,
        g: &mut dyn NeighborAccess,
        rng: &mut ChaCha8Rng,
    ) -> Result<TesterVerdict, PropertyError> {
        let n = g.n();
        if n == 0 {
            return Ok(TesterVerdict::Accept);
        }
        for _ in 0..ceil_over(2.0, self.epsilon) {
            let v = sample_vertex(rng, 0, n);
            let around = Self::neighbors(g, v)?;
            for &a in &around {
                for b in Self::neighbors(g, a)? {
                    if b != v && around.binary_search(&b).is_ok() {
                        let mut evidence = vec![v, a, b];
                        evidence.sort_unstable();
                        return Ok(TesterVerdict::Reject {
                            property: "triangle-free",
                            evidence,
                        });
                    }
                }
            }
        }
        Ok(TesterVerdict::Accept)
    }
}
