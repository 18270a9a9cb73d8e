//! The query interface between inference algorithms and the hidden graph.
//!
//! Algorithms are generic over [`ErOracle`] and never see a
//! [`WeightedGraph`](crate::graph::WeightedGraph). [`HiddenGraphOracle`]
//! simulates the oracle over a graph; [`TableOracle`] answers from a stored
//! resistance matrix and has no graph at all.

mod book;
mod hidden;
mod table;
pub mod transcript;

use thiserror::Error;

use crate::graph::exact::{ExactError, ExactResistance};
use crate::graph::Resistance;

pub use book::QueryBook;
pub use hidden::{HiddenGraphOracle, Mode};
pub use table::TableOracle;
pub use transcript::{Transcript, TranscriptEntry};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("query endpoints coincide (vertex {0})")]
    SameVertex(usize),
    #[error("vertex {vertex} out of range for an oracle on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("oracle does not support {0} queries")]
    Unsupported(&'static str),
    #[error("sorted-ball request for {k} vertices, at most {max} available")]
    BallTooLarge { k: usize, max: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Query counts. `distinct` counts unordered pairs, `total` counts calls.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryLedger {
    pub distinct: usize,
    pub total: usize,
    pub sp_distinct: usize,
    pub sp_total: usize,
    /// Items returned by sorted-ball requests.
    pub ball_requests: usize,
}

impl QueryLedger {
    /// Counts accumulated since `earlier` was taken from the same oracle.
    pub fn since(&self, earlier: &QueryLedger) -> QueryLedger {
        QueryLedger {
            distinct: self.distinct - earlier.distinct,
            total: self.total - earlier.total,
            sp_distinct: self.sp_distinct - earlier.sp_distinct,
            sp_total: self.sp_total - earlier.sp_total,
            ball_requests: self.ball_requests - earlier.ball_requests,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Capabilities {
    pub sorted_ball: bool,
    pub shortest_path: bool,
    pub exact: bool,
}

/// Hop count of a shortest path; `None` when no path exists.
pub type Hops = Option<usize>;

pub trait ErOracle {
    fn n(&self) -> usize;

    fn capabilities(&self) -> Capabilities;

    fn ledger(&self) -> &QueryLedger;

    fn er_query(&mut self, u: usize, v: usize) -> Result<Resistance, OracleError>;

    /// Same accounting as [`er_query`](Self::er_query); `None` when the oracle
    /// has no exact mode.
    fn er_query_exact(
        &mut self,
        u: usize,
        v: usize,
    ) -> Result<Option<ExactResistance>, OracleError> {
        self.er_query(u, v)?;
        Ok(None)
    }

    /// The `k` vertices nearest to `v` in resistance, ties by ascending id.
    fn sorted_ball(
        &mut self,
        _v: usize,
        _k: usize,
    ) -> Result<Vec<(usize, Resistance)>, OracleError> {
        Err(OracleError::Unsupported("sorted-ball"))
    }

    fn sp_query(&mut self, _u: usize, _v: usize) -> Result<Hops, OracleError> {
        Err(OracleError::Unsupported("shortest-path"))
    }
}

pub(crate) fn check_pair(n: usize, u: usize, v: usize) -> Result<(), OracleError> {
    for vertex in [u, v] {
        if vertex >= n {
            return Err(OracleError::VertexOutOfRange { vertex, n });
        }
    }
    if u == v {
        return Err(OracleError::SameVertex(u));
    }
    Ok(())
}

/// Orders `(vertex, resistance)` pairs by resistance, treating values within
/// `1e-9` (relative) as tied and breaking ties by vertex id.
pub fn sort_ball(mut items: Vec<(usize, Resistance)>) -> Vec<(usize, Resistance)> {
    items.sort_by(|a, b| a.1.as_f64().total_cmp(&b.1.as_f64()).then(a.0.cmp(&b.0)));
    let mut start = 0;
    while start < items.len() {
        let base = items[start].1.as_f64();
        let mut end = start + 1;
        while end < items.len() {
            let r = items[end].1.as_f64();
            let close = if base.is_finite() {
                (r - base).abs() <= 1e-9 * base.abs().max(1.0)
            } else {
                !r.is_finite()
            };
            if !close {
                break;
            }
            end += 1;
        }
        items[start..end].sort_by_key(|&(id, _)| id);
        start = end;
    }
    items
}
