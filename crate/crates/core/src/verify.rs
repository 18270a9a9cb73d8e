//! Deterministic decisions with fixed query budgets: tree test, equality
//! against a monotonically related known graph, cut vertices, biconnected
//! component membership and cut edges.
//!
//! Every procedure issues its whole budget before deciding, so the number of
//! distinct queries depends only on `n`. When the oracle runs in exact mode,
//! tightness and integrality are decided on rationals.

use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::graph::exact::ExactResistance;
use crate::graph::{all_pairs_er, Resistance, Tolerance, WeightedGraph};
use crate::oracle::{ErOracle, OracleError, QueryLedger};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("this test is only valid for unweighted graphs")]
    WeightedInput,
    #[error("hidden graph is disconnected: R({u}, {v}) is infinite")]
    Disconnected { u: usize, v: usize },
    #[error("known graph is disconnected")]
    KnownDisconnected,
    #[error("known graph has {known} vertices, oracle has {hidden}")]
    SizeMismatch { known: usize, hidden: usize },
    #[error("the two query vertices coincide")]
    SameVertex,
}

/// What certifies an answer.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// A vertex whose queried value decided the answer.
    Vertex(usize),
    /// `R(a, b) + R(b, c) = R(a, c)` holds.
    Tight { a: usize, b: usize, c: usize },
    /// `|R(a, x) − R(b, x)| ≠ 1`, or `R(a, b) ≠ 1` when `x` is `None`.
    UnitDifferenceFails {
        a: usize,
        b: usize,
        x: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub answer: bool,
    pub witness: Option<Witness>,
    /// Queries issued by this call.
    pub queries: QueryLedger,
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VerifyOptions {
    pub tol: Tolerance,
    /// The caller knows the hidden graph carries non-unit weights.
    pub weighted: bool,
}

pub const WEIGHTED_NOTE: &str = "lemma stated for unweighted graphs";

/// A queried value, with its exact form when the oracle provides one.
#[derive(Debug, Clone)]
pub(crate) struct Value {
    pub f: Resistance,
    pub q: Option<ExactResistance>,
}

impl Value {
    fn finite(&self, u: usize, v: usize) -> Result<f64, VerifyError> {
        self.f.finite().ok_or(VerifyError::Disconnected { u, v })
    }

    fn rational(&self) -> Option<&BigRational> {
        self.q.as_ref().and_then(ExactResistance::finite)
    }
}

pub(crate) fn ask<O: ErOracle + ?Sized>(
    o: &mut O,
    u: usize,
    v: usize,
) -> Result<Value, VerifyError> {
    if o.capabilities().exact {
        let q = o.er_query_exact(u, v)?;
        let f = match &q {
            Some(ExactResistance::Infinite) => Resistance::Infinite,
            Some(r) => Resistance::Finite(r.to_f64()),
            None => o.er_query(u, v)?,
        };
        Ok(Value { f, q })
    } else {
        Ok(Value {
            f: o.er_query(u, v)?,
            q: None,
        })
    }
}

/// `R(anchor, u)` for every `u ≠ anchor`, in ascending order of `u`.
pub(crate) fn anchor_profile<O: ErOracle + ?Sized>(
    o: &mut O,
    anchor: usize,
) -> Result<Vec<(usize, Value)>, VerifyError> {
    (0..o.n())
        .filter(|&u| u != anchor)
        .map(|u| Ok((u, ask(o, anchor, u)?)))
        .collect()
}

/// `ab + bc = ac`.
fn tight(ab: &Value, bc: &Value, ac: &Value, tol: &Tolerance) -> bool {
    match (ab.rational(), bc.rational(), ac.rational()) {
        (Some(x), Some(y), Some(z)) => x + y == *z,
        _ => tol.tight_eq(ab.f.as_f64() + bc.f.as_f64(), ac.f.as_f64()),
    }
}

/// `|x − y| = 1`.
fn unit_difference(x: &Value, y: &Value, tol: &Tolerance) -> bool {
    match (x.rational(), y.rational()) {
        (Some(a), Some(b)) => (a - b).abs().is_one(),
        _ => tol.tight_eq((x.f.as_f64() - y.f.as_f64()).abs(), 1.0),
    }
}

fn is_one(x: &Value, tol: &Tolerance) -> bool {
    match x.rational() {
        Some(a) => a.is_one(),
        None => tol.tight_eq(x.f.as_f64(), 1.0),
    }
}

fn integral(x: &Value) -> bool {
    match &x.q {
        Some(q) => q.is_integer(),
        None => x.f.finite().is_some_and(|r| (r - r.round()).abs() < 1e-6),
    }
}

fn verdict<O: ErOracle + ?Sized>(
    o: &O,
    before: &QueryLedger,
    answer: bool,
    witness: Option<Witness>,
    note: Option<&'static str>,
) -> Verdict {
    Verdict {
        answer,
        witness,
        queries: o.ledger().since(before),
        note,
    }
}

/// Decides whether an unweighted hidden graph is a tree from the `n − 1`
/// values `R(0, u)`: it is exactly when all are finite integers.
pub fn is_tree<O: ErOracle + ?Sized>(
    o: &mut O,
    opts: &VerifyOptions,
) -> Result<Verdict, VerifyError> {
    if opts.weighted {
        return Err(VerifyError::WeightedInput);
    }
    let before = *o.ledger();
    let profile = anchor_profile(o, 0)?;
    let bad = profile.iter().find(|(_, r)| !integral(r)).map(|&(u, _)| u);
    Ok(verdict(
        o,
        &before,
        bad.is_none(),
        bad.map(Witness::Vertex),
        None,
    ))
}

/// Decides `hidden = known` with `n − 1` queries, assuming the weights of one
/// graph dominate the other's entrywise. Without that relation a `true`
/// answer carries no guarantee.
pub fn equal_monotone<O: ErOracle + ?Sized>(
    o: &mut O,
    known: &WeightedGraph,
    opts: &VerifyOptions,
) -> Result<Verdict, VerifyError> {
    if known.n() != o.n() {
        return Err(VerifyError::SizeMismatch {
            known: known.n(),
            hidden: o.n(),
        });
    }
    if !known.is_connected() {
        return Err(VerifyError::KnownDisconnected);
    }
    let expected = all_pairs_er(known);
    let before = *o.ledger();
    let profile = anchor_profile(o, 0)?;
    let bad = profile
        .iter()
        .find(|(u, r)| !r.f.approx_eq(expected.get(0, *u), &opts.tol))
        .map(|&(u, _)| u);
    Ok(verdict(
        o,
        &before,
        bad.is_none(),
        bad.map(Witness::Vertex),
        None,
    ))
}

/// Decides whether `v` is a cut vertex with `2n − 3` queries, by looking for
/// a `w` with `R(u₀, w) = R(u₀, v) + R(v, w)`, where `u₀` is the lowest id
/// other than `v`.
pub fn is_cut_vertex<O: ErOracle + ?Sized>(
    o: &mut O,
    v: usize,
    opts: &VerifyOptions,
) -> Result<Verdict, VerifyError> {
    let n = o.n();
    if v >= n {
        return Err(OracleError::VertexOutOfRange { vertex: v, n }.into());
    }
    let note = opts.weighted.then_some(WEIGHTED_NOTE);
    let before = *o.ledger();
    if n < 3 {
        return Ok(verdict(o, &before, false, None, note));
    }
    let u0 = if v == 0 { 1 } else { 0 };
    let a = ask(o, u0, v)?;
    a.finite(u0, v)?;
    let mut found = None;
    for w in (0..n).filter(|&w| w != u0 && w != v) {
        let c = ask(o, u0, w)?;
        c.finite(u0, w)?;
        let b = ask(o, v, w)?;
        b.finite(v, w)?;
        if found.is_none() && tight(&a, &b, &c, &opts.tol) {
            found = Some(Witness::Tight { a: u0, b: v, c: w });
        }
    }
    Ok(verdict(o, &before, found.is_some(), found, note))
}

/// Decides whether `a` and `b` lie in a common biconnected component with
/// `2n − 3` queries: they do unless some `r` satisfies
/// `R(a, r) + R(r, b) = R(a, b)`.
pub fn same_biconnected_component<O: ErOracle + ?Sized>(
    o: &mut O,
    a: usize,
    b: usize,
    opts: &VerifyOptions,
) -> Result<Verdict, VerifyError> {
    if a == b {
        return Err(VerifyError::SameVertex);
    }
    let note = opts.weighted.then_some(WEIGHTED_NOTE);
    let before = *o.ledger();
    let ab = ask(o, a, b)?;
    ab.finite(a, b)?;
    let mut found = None;
    for r in (0..o.n()).filter(|&r| r != a && r != b) {
        let ar = ask(o, a, r)?;
        ar.finite(a, r)?;
        let rb = ask(o, r, b)?;
        rb.finite(r, b)?;
        if found.is_none() && tight(&ar, &rb, &ab, &opts.tol) {
            found = Some(Witness::Tight { a, b: r, c: b });
        }
    }
    Ok(verdict(o, &before, found.is_none(), found, note))
}

/// Decides whether `(a, b)` is a cut edge of an unweighted graph with
/// `2n − 3` queries: `R(a, b) = 1` and `|R(a, x) − R(b, x)| = 1` for all
/// other `x`.
pub fn is_cut_edge<O: ErOracle + ?Sized>(
    o: &mut O,
    a: usize,
    b: usize,
    opts: &VerifyOptions,
) -> Result<Verdict, VerifyError> {
    if opts.weighted {
        return Err(VerifyError::WeightedInput);
    }
    if a == b {
        return Err(VerifyError::SameVertex);
    }
    let before = *o.ledger();
    let ab = ask(o, a, b)?;
    ab.finite(a, b)?;
    let mut found =
        (!is_one(&ab, &opts.tol)).then_some(Witness::UnitDifferenceFails { a, b, x: None });
    for x in (0..o.n()).filter(|&x| x != a && x != b) {
        let ax = ask(o, a, x)?;
        ax.finite(a, x)?;
        let bx = ask(o, b, x)?;
        bx.finite(b, x)?;
        if found.is_none() && !unit_difference(&ax, &bx, &opts.tol) {
            found = Some(Witness::UnitDifferenceFails { a, b, x: Some(x) });
        }
    }
    Ok(verdict(o, &before, found.is_none(), found, None))
}
