//! Ground-truth graph representation and the linear algebra built on it.
//!
//! A [`WeightedGraph`] is immutable once constructed: edges are stored once per
//! unordered pair, oriented from the lower to the higher vertex id, and sorted.
//! Everything that needs the hidden graph (Laplacians, resistances, flows,
//! Schur complements) lives in the submodules and takes `&WeightedGraph`.

pub mod cuts;
pub mod decomposition;
pub mod exact;
pub mod flow;
pub mod generate;
pub mod io;
pub mod laplacian;
pub mod resistance;
pub mod schur;

use std::collections::BTreeMap;
use std::collections::VecDeque;

use thiserror::Error;

pub use cuts::{classical_cut_analysis, CutAnalysis};
pub use decomposition::{validate_tree_decomposition, TdViolation, TreeDecomposition};
pub use flow::{electrical_flow, UnitFlow};
pub use laplacian::{all_pairs_er, effective_resistance, laplacian_bundle, LaplacianBundle};
pub use resistance::{ErMatrix, Resistance, Tolerance};
pub use schur::{schur_complement, ReducedGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({u}, {v}) has invalid weight {w}; weights must be finite and positive")]
    BadWeight { u: usize, v: usize, w: f64 },
    #[error("vertices {u} and {v} are in different connected components")]
    DisconnectedPair { u: usize, v: usize },
    #[error("graph is not connected")]
    Disconnected,
}

/// An undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }
}

/// Orders a vertex pair so the smaller id comes first.
pub fn ordered(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Immutable undirected simple graph with strictly positive edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl WeightedGraph {
    /// Builds a graph from `(u, v, w)` triples. Parallel edges are merged by
    /// summing their weights; self-loops and non-positive weights are rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(GraphError::BadWeight { u, v, w });
            }
            *merged.entry(ordered(u, v)).or_insert(0.0) += w;
        }
        let edges: Vec<Edge> = merged
            .into_iter()
            .map(|((u, v), w)| Edge { u, v, w })
            .collect();
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.u].push((e.v, e.w));
            adjacency[e.v].push((e.u, e.w));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(x, _)| x);
        }
        Ok(WeightedGraph {
            n,
            edges,
            adjacency,
        })
    }

    /// Unit-weight graph from an edge list.
    pub fn unweighted<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::new(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Self::new(n, std::iter::empty())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by `(u, v)` with `u < v`; this is the fixed edge order used
    /// by incidence matrices and flows.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `v` with edge weights, ascending by id.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn weighted_degree(&self, v: usize) -> f64 {
        self.adjacency[v].iter().map(|&(_, w)| w).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.edge_index(u, v).map(|i| self.edges[i].w)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Position of edge `{u, v}` in [`edges`](Self::edges).
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = ordered(u, v);
        self.edges.binary_search_by(|e| (e.u, e.v).cmp(&key)).ok()
    }

    /// True when every edge has weight exactly 1.
    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1.0)
    }

    /// Connected-component label per vertex; labels are dense and assigned in
    /// order of the lowest vertex id in each component.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &self.adjacency[x] {
                    if label[y] == usize::MAX {
                        label[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |c| c + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Unweighted hop distances from `source`; `None` for unreachable vertices.
    pub fn hop_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap_or(0);
            for &(y, _) in &self.adjacency[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Copy of this graph with the weight of `{u, v}` set to `w`; `w == 0`
    /// removes the edge.
    pub fn with_weight(&self, u: usize, v: usize, w: f64) -> Result<Self, GraphError> {
        let key = ordered(u, v);
        let rest = self
            .edges
            .iter()
            .filter(|e| (e.u, e.v) != key)
            .map(|e| (e.u, e.v, e.w));
        if w == 0.0 {
            Self::new(self.n, rest)
        } else {
            Self::new(self.n, rest.chain(std::iter::once((key.0, key.1, w))))
        }
    }

    /// Weighted adjacency matrix as a dense row-major vector.
    pub fn adjacency_dense(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for e in &self.edges {
            a[e.u * self.n + e.v] = e.w;
            a[e.v * self.n + e.u] = e.w;
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_edges_merge_by_summing() {
        let g = WeightedGraph::new(3, [(0, 1, 1.0), (1, 0, 2.5), (1, 2, 1.0)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.weight(0, 1), Some(3.5));
        assert_eq!(g.weight(1, 0), Some(3.5));
    }

    #[test]
    fn rejects_self_loops_and_bad_weights() {
        assert_eq!(
            WeightedGraph::new(2, [(1, 1, 1.0)]),
            Err(GraphError::SelfLoop(1))
        );
        assert!(matches!(
            WeightedGraph::new(2, [(0, 1, 0.0)]),
            Err(GraphError::BadWeight { .. })
        ));
        assert!(matches!(
            WeightedGraph::new(2, [(0, 1, f64::NAN)]),
            Err(GraphError::BadWeight { .. })
        ));
        assert!(matches!(
            WeightedGraph::new(2, [(0, 2, 1.0)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        assert_eq!(WeightedGraph::empty(0), Err(GraphError::Empty));
    }

    #[test]
    fn components_and_distances() {
        let g = WeightedGraph::unweighted(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![0, 0, 0, 1, 1]);
        assert!(!g.is_connected());
        assert_eq!(
            g.hop_distances(0),
            vec![Some(0), Some(1), Some(2), None, None]
        );
    }

    #[test]
    fn with_weight_adds_and_removes() {
        let g = WeightedGraph::unweighted(3, [(0, 1)]).unwrap();
        let h = g.with_weight(2, 1, 4.0).unwrap();
        assert_eq!(h.weight(1, 2), Some(4.0));
        let k = h.with_weight(0, 1, 0.0).unwrap();
        assert!(!k.has_edge(0, 1));
        assert_eq!(k.m(), 1);
    }
}
