//! Randomized testers that read the hidden graph through resistance queries.

pub mod adapter;
pub mod ball;
mod biconnectivity;
mod td_bound;

use rand::Rng;
use thiserror::Error;

use crate::graph::TdViolation;
use crate::oracle::{OracleError, QueryLedger};
use crate::reconstruct::ReconstructError;
use crate::verify::{VerifyError, Witness};

pub use adapter::{
    adapt_bounded_degree_tester, run_direct, AdapterCost, AdjacencyAccess, BoundedDegreeTester,
    ErNeighborAccess, NeighborAccess, TesterVerdict, TriangleFreeness,
};
pub use biconnectivity::{test_edge_biconnectivity, test_vertex_biconnectivity};
pub use td_bound::{td_distance_bound_check, TdBoundReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropertyError {
    #[error("epsilon must lie in (0, 1], got {0}")]
    BadEpsilon(f64),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
    #[error("vertex {vertex} has degree {degree}, above the bound {bound}")]
    DegreeBoundExceeded {
        vertex: usize,
        degree: usize,
        bound: usize,
    },
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(#[from] TdViolation),
    #[error("a vertex lies in {found} bags, more than the stated {bound}")]
    MultiplicityExceeded { found: usize, bound: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

/// Why a tester decided as it did. Every rejection names its evidence.
#[derive(Debug, Clone, PartialEq)]
pub enum Reason {
    CutVertexFound {
        vertex: usize,
        witness: Option<Witness>,
    },
    /// An explored edge with resistance one.
    CutEdgeFound {
        u: usize,
        v: usize,
    },
    /// The exploration from `root` closed off after `size` vertices without
    /// leaving through any edge.
    SmallLowDegreeComponent {
        root: usize,
        size: usize,
    },
    DifferentBiconnectedComponent {
        a: usize,
        b: usize,
        witness: Option<Witness>,
    },
    Disconnected {
        u: usize,
        v: usize,
    },
    /// A bounded-degree tester rejected with the given vertices as evidence.
    TesterRejected {
        property: &'static str,
        evidence: Vec<usize>,
    },
    NoEvidence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestOutcome {
    pub decision: Decision,
    pub reason: Reason,
    pub samples_used: usize,
    /// Queries issued by this run.
    pub queries: QueryLedger,
    /// `distinct / (n/ε² + 1/ε⁴)`, for the edge tester.
    pub budget_constant: Option<f64>,
}

impl TestOutcome {
    pub fn accepted(&self) -> bool {
        self.decision == Decision::Accept
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<f64, PropertyError> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(eps)
    } else {
        Err(PropertyError::BadEpsilon(eps))
    }
}

/// `⌈c/ε⌉`, guarding against `c/ε` landing a hair above an integer.
pub(crate) fn ceil_over(c: f64, eps: f64) -> usize {
    let x = c / eps;
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r as usize
    } else {
        x.ceil() as usize
    }
}

pub(crate) fn sample_vertex<R: Rng>(rng: &mut R, lo: usize, n: usize) -> usize {
    rng.gen_range(lo..n)
}
