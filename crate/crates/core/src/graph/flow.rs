//! Unit flows and electrical flows.

use std::collections::BTreeSet;

use nalgebra::DVector;
use thiserror::Error;

use super::laplacian::laplacian_bundle;
use super::{GraphError, WeightedGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("expected {expected} edge values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("flow is not a unit {from}-{to} flow: net flow {net} at vertex {vertex}")]
    NotConserved {
        from: usize,
        to: usize,
        vertex: usize,
        net: f64,
    },
    #[error("source and sink coincide")]
    SameEndpoints,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A unit flow from `source` to `sink`. `values[k]` is the flow on the k-th
/// edge of the graph, positive in the direction lower id → higher id.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitFlow {
    pub source: usize,
    pub sink: usize,
    pub values: Vec<f64>,
    pub energy: f64,
}

impl UnitFlow {
    /// Validates conservation (to absolute `1e-9`) and computes the energy.
    pub fn new(
        g: &WeightedGraph,
        source: usize,
        sink: usize,
        values: Vec<f64>,
    ) -> Result<Self, FlowError> {
        if source == sink {
            return Err(FlowError::SameEndpoints);
        }
        if values.len() != g.m() {
            return Err(FlowError::WrongLength {
                expected: g.m(),
                got: values.len(),
            });
        }
        let out = net_outflow(g, &values);
        for (vertex, &net) in out.iter().enumerate() {
            let want = if vertex == source {
                1.0
            } else if vertex == sink {
                -1.0
            } else {
                0.0
            };
            if (net - want).abs() > 1e-9 {
                return Err(FlowError::NotConserved {
                    from: source,
                    to: sink,
                    vertex,
                    net,
                });
            }
        }
        let energy = energy(g, &values);
        Ok(UnitFlow {
            source,
            sink,
            values,
            energy,
        })
    }
}

/// Net flow leaving each vertex.
pub fn net_outflow(g: &WeightedGraph, values: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; g.n()];
    for (e, &f) in g.edges().iter().zip(values) {
        out[e.u] += f;
        out[e.v] -= f;
    }
    out
}

/// `Σ f(e)² / w(e)`.
pub fn energy(g: &WeightedGraph, values: &[f64]) -> f64 {
    g.edges().iter().zip(values).map(|(e, f)| f * f / e.w).sum()
}

/// The minimum-energy unit flow from `u` to `v`, driven by the potentials
/// `L⁺(1_u − 1_v)`.
pub fn electrical_flow(g: &WeightedGraph, u: usize, v: usize) -> Result<UnitFlow, FlowError> {
    if u == v {
        return Err(FlowError::SameEndpoints);
    }
    let labels = g.components();
    if labels[u] != labels[v] {
        return Err(GraphError::DisconnectedPair { u, v }.into());
    }
    let bundle = laplacian_bundle(g);
    let mut demand = DVector::zeros(g.n());
    demand[u] = 1.0;
    demand[v] = -1.0;
    let potentials = &bundle.pseudoinverse * demand;
    let values: Vec<f64> = g
        .edges()
        .iter()
        .map(|e| e.w * (potentials[e.u] - potentials[e.v]))
        .collect();
    let energy = energy(g, &values);
    Ok(UnitFlow {
        source: u,
        sink: v,
        values,
        energy,
    })
}

/// Edges with exactly one endpoint in `set`, as edge indices.
pub fn boundary_edges(g: &WeightedGraph, set: &BTreeSet<usize>) -> BTreeSet<usize> {
    g.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| set.contains(&e.u) != set.contains(&e.v))
        .map(|(k, _)| k)
        .collect()
}

/// Lower bound `Σᵢ 1/|E(Sᵢ, V∖Sᵢ)|` on the resistance between `s` and `t`
/// for unit-weight graphs. Every cut must contain `s`, exclude `t`, and the
/// boundaries must be pairwise disjoint; `None` if that fails.
pub fn nash_williams_bound(
    g: &WeightedGraph,
    s: usize,
    t: usize,
    cuts: &[BTreeSet<usize>],
) -> Option<f64> {
    let mut seen = BTreeSet::new();
    let mut bound = 0.0;
    for cut in cuts {
        if !cut.contains(&s) || cut.contains(&t) {
            return None;
        }
        let boundary = boundary_edges(g, cut);
        if boundary.is_empty() || boundary.iter().any(|k| seen.contains(k)) {
            return None;
        }
        bound += 1.0 / boundary.len() as f64;
        seen.extend(boundary);
    }
    Some(bound)
}
