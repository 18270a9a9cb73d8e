//! Subcommand implementations. Each returns a [`Report`]; errors become exit
//! code 2 in `main`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use erlab::graph::generate::{generate, Family};
use erlab::graph::io::{parse_graph, parse_partial_graph, parse_td, write_graph, write_td};
use erlab::graph::{ErMatrix, Tolerance, TreeDecomposition, WeightedGraph};
use erlab::oracle::{ErOracle, HiddenGraphOracle, Mode, QueryLedger};
use erlab::property::ball::er_density;
use erlab::property::{
    adapt_bounded_degree_tester, test_edge_biconnectivity, test_vertex_biconnectivity, Reason,
    TestOutcome, TriangleFreeness,
};
use erlab::reconstruct::{
    complete_exhaustive, complete_quadratic, log_det_regularized, logdet_directional_derivative,
    reconstruct_from_td, reconstruct_full, reconstruct_schur, CompletionInstance, ReconstructError,
    ReconstructionResult,
};
use erlab::separation::{adjacency_family_report, clique_check};
use erlab::verify::{
    equal_monotone, is_cut_edge, is_cut_vertex, is_tree, same_biconnected_component, Verdict,
    VerifyOptions, Witness,
};

use crate::report::{num, Details, Report};
use crate::{Command, Common, CompleteMode, FamilyName, GenArgs};

/// Oracle features a command can make use of.
#[derive(Clone, Copy)]
struct Supports {
    exact: bool,
    ball: bool,
}

const PLAIN: Supports = Supports {
    exact: false,
    ball: false,
};
const EXACT: Supports = Supports {
    exact: true,
    ball: false,
};
const BALL: Supports = Supports {
    exact: false,
    ball: true,
};

struct Run<'a> {
    name: &'static str,
    common: &'a Common,
    start: Instant,
}

impl Run<'_> {
    fn check(&self, s: Supports) -> Result<()> {
        if self.common.exact && !s.exact {
            bail!("{} does not support --exact", self.name);
        }
        if self.common.ball_oracle && !s.ball {
            bail!("{} does not support --ball-oracle", self.name);
        }
        Ok(())
    }

    fn tol(&self) -> Result<Tolerance> {
        let t = self.common.tol;
        if !(t.is_finite() && t > 0.0) {
            bail!("--tol must be a positive number, got {t}");
        }
        Ok(Tolerance::with_tol(t))
    }

    /// The oracle over `--hidden`, and whether the file has non-unit weights.
    fn oracle(&self) -> Result<(HiddenGraphOracle, bool)> {
        let path = need(&self.common.hidden, "--hidden")?;
        let g = read_graph(path)?;
        let weighted = !g.is_unweighted();
        let mode = if self.common.exact {
            Mode::Exact
        } else {
            Mode::Float
        };
        let mut o = HiddenGraphOracle::with_mode(g, mode)?;
        if self.common.ball_oracle {
            o = o.with_sorted_ball();
        }
        Ok((o, weighted))
    }

    fn save_transcript(&self, o: &HiddenGraphOracle) -> Result<()> {
        if let Some(path) = &self.common.transcript {
            fs::write(path, o.transcript().to_string())
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        Ok(())
    }

    fn report(
        &self,
        n: usize,
        verdict: Option<bool>,
        reason: Option<String>,
        q: QueryLedger,
        details: Details,
    ) -> Report {
        Report {
            command: self.name.to_string(),
            n,
            verdict,
            reason,
            distinct_queries: q.distinct,
            total_queries: q.total,
            seed: self.common.seed,
            tolerance: self.common.tol,
            elapsed_ms: self.start.elapsed().as_millis(),
            details,
        }
    }

    /// Report for an oracle-backed run; also writes the transcript.
    fn finish(
        &self,
        o: &HiddenGraphOracle,
        verdict: Option<bool>,
        reason: Option<String>,
        details: Details,
    ) -> Result<Report> {
        self.save_transcript(o)?;
        Ok(self.report(o.n(), verdict, reason, *o.ledger(), details))
    }
}

fn need<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref().with_context(|| format!("{flag} is required"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn read_graph(path: &Path) -> Result<WeightedGraph> {
    parse_graph(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn read_td(path: &Path) -> Result<TreeDecomposition> {
    parse_td(&read(path)?).with_context(|| format!("{}", path.display()))
}

/// Converts a 1-indexed command-line vertex.
fn vertex(x: usize, n: usize) -> Result<usize> {
    if x == 0 || x > n {
        bail!("vertex {x} out of range 1..={n}");
    }
    Ok(x - 1)
}

fn pair(p: &[usize], n: usize) -> Result<(usize, usize)> {
    let (a, b) = (vertex(p[0], n)?, vertex(p[1], n)?);
    if a == b {
        bail!("the two vertices coincide");
    }
    Ok((a, b))
}

fn edges_json(g: &WeightedGraph) -> Value {
    Value::Array(
        g.edges()
            .iter()
            .map(|e| json!([e.u + 1, e.v + 1, num(e.w)]))
            .collect(),
    )
}

fn matrix_json(m: &ErMatrix) -> Value {
    Value::Array(
        (0..m.n())
            .map(|u| Value::Array(m.row(u).iter().map(|r| num(r.as_f64())).collect()))
            .collect(),
    )
}

fn witness_json(w: &Option<Witness>) -> Value {
    match w {
        None => Value::Null,
        Some(Witness::Vertex(v)) => json!({ "vertex": v + 1 }),
        Some(Witness::Tight { a, b, c }) => json!({ "tight": [a + 1, b + 1, c + 1] }),
        Some(Witness::UnitDifferenceFails { a, b, x }) => {
            json!({ "unit_difference_fails": [a + 1, b + 1, x.map(|x| x + 1)] })
        }
    }
}

fn witness_name(w: &Option<Witness>) -> Option<String> {
    w.as_ref().map(|w| {
        match w {
            Witness::Vertex(_) => "Vertex",
            Witness::Tight { .. } => "TightTriangle",
            Witness::UnitDifferenceFails { .. } => "UnitDifferenceFails",
        }
        .to_string()
    })
}

fn verdict_details(v: &Verdict) -> Details {
    let mut d = Details::new();
    d.put("witness", witness_json(&v.witness));
    d.put("note", v.note.map_or(Value::Null, Value::from));
    d
}

fn reason_parts(r: &Reason) -> (&'static str, Value) {
    match r {
        Reason::CutVertexFound { vertex, witness } => (
            "CutVertexFound",
            json!({ "vertex": vertex + 1, "witness": witness_json(witness) }),
        ),
        Reason::CutEdgeFound { u, v } => ("CutEdgeFound", json!({ "edge": [u + 1, v + 1] })),
        Reason::SmallLowDegreeComponent { root, size } => (
            "SmallLowDegreeComponent",
            json!({ "root": root + 1, "size": size }),
        ),
        Reason::DifferentBiconnectedComponent { a, b, witness } => (
            "DifferentBiconnectedComponent",
            json!({ "pair": [a + 1, b + 1], "witness": witness_json(witness) }),
        ),
        Reason::Disconnected { u, v } => ("Disconnected", json!({ "pair": [u + 1, v + 1] })),
        Reason::TesterRejected { property, evidence } => (
            "TesterRejected",
            json!({
                "property": property,
                "vertices": evidence.iter().map(|v| v + 1).collect::<Vec<_>>(),
            }),
        ),
        Reason::NoEvidence => ("NoEvidence", Value::Null),
    }
}

fn outcome_details(out: &TestOutcome, eps: f64) -> (Option<bool>, Option<String>, Details) {
    let (name, evidence) = reason_parts(&out.reason);
    let mut d = Details::new();
    d.float("eps", eps);
    d.put("samples_used", out.samples_used);
    d.put("evidence", evidence);
    if let Some(c) = out.budget_constant {
        d.float("budget_constant", c);
    }
    let accepted = out.accepted();
    (Some(accepted), (!accepted).then(|| name.to_string()), d)
}

pub fn run(cmd: &Command, common: &Common) -> Result<Report> {
    let name = match cmd {
        Command::Gen(_) => "gen",
        Command::Er { .. } => "er",
        Command::ReconstructFull { .. } => "reconstruct-full",
        Command::ReconstructTd { .. } => "reconstruct-td",
        Command::ReconstructSchur { .. } => "reconstruct-schur",
        Command::Complete { .. } => "complete",
        Command::VerifyTree => "verify-tree",
        Command::VerifyEqual => "verify-equal",
        Command::VerifyCutVertex { .. } => "verify-cut-vertex",
        Command::VerifyCutEdge { .. } => "verify-cut-edge",
        Command::VerifyBicomp { .. } => "verify-bicomp",
        Command::PtestVbc => "ptest-vbc",
        Command::PtestEbc => "ptest-ebc",
        Command::Density => "density",
        Command::AdaptTest { .. } => "adapt-test",
        Command::SepClique => "sep-clique",
        Command::SepAdjacency { .. } => "sep-adjacency",
        Command::GradientCheck { .. } => "gradient-check",
    };
    let r = Run {
        name,
        common,
        start: Instant::now(),
    };
    match cmd {
        Command::Gen(args) => gen(&r, args),
        Command::Er { pair } => er(&r, pair.as_deref()),
        Command::ReconstructFull { write } => {
            r.check(PLAIN)?;
            let (mut o, _) = r.oracle()?;
            let res = reconstruct_full(&mut o)?;
            reconstructed(&r, &o, res, write.as_deref())
        }
        Command::ReconstructTd { write } => {
            r.check(PLAIN)?;
            let td = read_td(need(&common.td, "--td")?)?;
            let (mut o, _) = r.oracle()?;
            let res = reconstruct_from_td(&mut o, &td)?;
            reconstructed(&r, &o, res, write.as_deref())
        }
        Command::ReconstructSchur { keep, write } => schur(&r, keep, write.as_deref()),
        Command::Complete { mode, write } => complete(&r, *mode, write.as_deref()),
        Command::VerifyTree => {
            r.check(EXACT)?;
            let (mut o, weighted) = r.oracle()?;
            let opts = VerifyOptions {
                tol: r.tol()?,
                weighted,
            };
            let v = is_tree(&mut o, &opts)?;
            let reason = (!v.answer).then(|| "NonIntegralResistance".to_string());
            r.finish(&o, Some(v.answer), reason, verdict_details(&v))
        }
        Command::VerifyEqual => {
            r.check(EXACT)?;
            let known = read_graph(need(&common.known, "--known")?)?;
            let (mut o, weighted) = r.oracle()?;
            let opts = VerifyOptions {
                tol: r.tol()?,
                weighted,
            };
            let v = equal_monotone(&mut o, &known, &opts)?;
            let reason = (!v.answer).then(|| "ResistanceDiffers".to_string());
            r.finish(&o, Some(v.answer), reason, verdict_details(&v))
        }
        Command::VerifyCutVertex { vertex: x } => {
            r.check(EXACT)?;
            let (mut o, weighted) = r.oracle()?;
            let v0 = vertex(*x, o.n())?;
            let opts = VerifyOptions {
                tol: r.tol()?,
                weighted,
            };
            let v = is_cut_vertex(&mut o, v0, &opts)?;
            let mut d = verdict_details(&v);
            d.put("vertex", *x);
            r.finish(&o, Some(v.answer), witness_name(&v.witness), d)
        }
        Command::VerifyCutEdge { pair: p } => {
            r.check(EXACT)?;
            let (mut o, weighted) = r.oracle()?;
            let (a, b) = pair(p, o.n())?;
            let opts = VerifyOptions {
                tol: r.tol()?,
                weighted,
            };
            let v = is_cut_edge(&mut o, a, b, &opts)?;
            let mut d = verdict_details(&v);
            d.put("pair", json!([p[0], p[1]]));
            r.finish(&o, Some(v.answer), witness_name(&v.witness), d)
        }
        Command::VerifyBicomp { pair: p } => {
            r.check(EXACT)?;
            let (mut o, weighted) = r.oracle()?;
            let (a, b) = pair(p, o.n())?;
            let opts = VerifyOptions {
                tol: r.tol()?,
                weighted,
            };
            let v = same_biconnected_component(&mut o, a, b, &opts)?;
            let mut d = verdict_details(&v);
            d.put("pair", json!([p[0], p[1]]));
            r.finish(&o, Some(v.answer), witness_name(&v.witness), d)
        }
        Command::PtestVbc => {
            r.check(EXACT)?;
            let (mut o, _) = r.oracle()?;
            let out = test_vertex_biconnectivity(&mut o, common.eps, common.seed)?;
            let (verdict, reason, d) = outcome_details(&out, common.eps);
            r.finish(&o, verdict, reason, d)
        }
        Command::PtestEbc => {
            r.check(BALL)?;
            let (mut o, _) = r.oracle()?;
            let out = test_edge_biconnectivity(&mut o, common.eps, common.seed)?;
            let (verdict, reason, mut d) = outcome_details(&out, common.eps);
            d.put("ball_requests", o.ledger().ball_requests);
            r.finish(&o, verdict, reason, d)
        }
        Command::Density => {
            r.check(PLAIN)?;
            let g = read_graph(need(&common.hidden, "--hidden")?)?;
            let (rho, argmax) = er_density(&g);
            let mut d = Details::new();
            d.put("rho", rho);
            d.put("argmax", argmax + 1);
            Ok(r.report(g.n(), None, None, QueryLedger::default(), d))
        }
        Command::AdaptTest { degree_bound } => {
            r.check(BALL)?;
            let (mut o, _) = r.oracle()?;
            let tester = TriangleFreeness {
                degree_bound: *degree_bound,
                epsilon: common.eps,
            };
            let (out, cost) = adapt_bounded_degree_tester(&mut o, &tester, common.seed)?;
            let (verdict, reason, mut d) = outcome_details(&out, common.eps);
            d.put("degree_bound", *degree_bound);
            d.put("callbacks", cost.callbacks);
            d.put("discoveries", cost.discoveries);
            d.put("rho", cost.rho);
            d.float("query_bound", cost.bound);
            r.finish(&o, verdict, reason, d)
        }
        Command::SepClique => {
            r.check(EXACT)?;
            let (mut o, _) = r.oracle()?;
            let v = clique_check(&mut o)?;
            let reason = (!v.answer).then(|| "ResistanceDiffers".to_string());
            r.finish(&o, Some(v.answer), reason, verdict_details(&v))
        }
        Command::SepAdjacency { n, i, j, matrices } => {
            r.check(PLAIN)?;
            let rep = adjacency_family_report(*n, *i, *j, *matrices)?;
            let mut d = Details::new();
            d.put("i", rep.i).put("j", rep.j);
            d.float("r_g_centers", rep.r_g_centers);
            d.float("r_h_centers", rep.r_h_centers);
            d.float("max_diff_avoiding", rep.max_diff_avoiding);
            d.put("distinguishing_pairs", rep.distinguishing_pairs);
            d.put("distinguishing_touch_ij", rep.distinguishing_touch_ij);
            d.put("sp_g", rep.sp_g.map_or(Value::Null, Value::from));
            d.put("sp_h", rep.sp_h.map_or(Value::Null, Value::from));
            if let Some((g, h)) = &rep.matrices {
                d.put("er_g", matrix_json(g));
                d.put("er_h", matrix_json(h));
            }
            let reason = (!rep.holds()).then(|| "ConstructionFails".to_string());
            Ok(r.report(rep.n, Some(rep.holds()), reason, QueryLedger::default(), d))
        }
        Command::GradientCheck { pair: p, h } => gradient(&r, p, *h),
    }
}

fn gen(r: &Run, a: &GenArgs) -> Result<Report> {
    r.check(PLAIN)?;
    let n = a.n;
    let family = match a.family {
        FamilyName::Path => Family::Path { n },
        FamilyName::Cycle => Family::Cycle { n },
        FamilyName::Star => Family::Star { n },
        FamilyName::Clique => Family::Clique { n },
        FamilyName::RandomTree => Family::RandomTree { n },
        FamilyName::RandomConnected => Family::RandomConnected { n, p: a.p },
        FamilyName::RandomWeighted => Family::RandomWeighted {
            n,
            p: a.p,
            lo: a.lo,
            hi: a.hi,
        },
        FamilyName::Caterpillar => Family::Caterpillar {
            n,
            spine: a.spine.unwrap_or(n.div_ceil(2)),
        },
        FamilyName::PartialKTree => Family::PartialKTree {
            n,
            k: a.k,
            keep: a.keep,
        },
        FamilyName::BoundedDegree => Family::BoundedDegree {
            n,
            d: a.d,
            extra: a.extra,
        },
        FamilyName::RandomBiconnected => Family::RandomBiconnected {
            n,
            chords: a.chords,
        },
        FamilyName::Windmill => Family::Windmill { count: a.count },
        FamilyName::TriangleChain => Family::TriangleChain { count: a.count },
        FamilyName::SpErPair => Family::SpErPair { n, i: a.i, j: a.j },
    };
    let out = generate(&family, r.common.seed)?;
    write(&a.write, &write_graph(&out.graph))?;
    let mut d = Details::new();
    d.put("family", format!("{family:?}"));
    d.put("m", out.graph.m());
    d.put("max_degree", out.graph.max_degree());
    match (&a.write_td, &out.decomposition) {
        (Some(path), Some(td)) => {
            write(path, &write_td(td, out.graph.n()))?;
            d.put("td_width", td.width());
        }
        (Some(_), None) => bail!("this family has no tree decomposition"),
        _ => {}
    }
    match (&a.write_partner, &out.partner) {
        (Some(path), Some(h)) => write(path, &write_graph(h))?,
        (Some(_), None) => bail!("this family has no partner graph"),
        _ => {}
    }
    Ok(r.report(out.graph.n(), None, None, QueryLedger::default(), d))
}

fn er(r: &Run, p: Option<&[usize]>) -> Result<Report> {
    r.check(EXACT)?;
    let (mut o, _) = r.oracle()?;
    let n = o.n();
    let mut d = Details::new();
    if let Some(p) = p {
        let (u, v) = pair(p, n)?;
        d.put("pair", json!([p[0], p[1]]));
        if r.common.exact {
            let q = o
                .er_query_exact(u, v)?
                .context("oracle has no exact mode")?;
            d.float("resistance", q.to_f64());
            d.put(
                "exact",
                q.finite()
                    .map_or(Value::Null, |x| Value::from(x.to_string())),
            );
        } else {
            d.float("resistance", o.er_query(u, v)?.as_f64());
        }
    } else {
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                upper.push(o.er_query(u, v)?.as_f64());
            }
        }
        // Row-major index of (u, v), u < v, in the strict upper triangle.
        let at = |u: usize, v: usize| upper[u * (2 * n - u - 1) / 2 + (v - u - 1)];
        let entry = |u: usize, v: usize| match u.cmp(&v) {
            std::cmp::Ordering::Less => num(at(u, v)),
            std::cmp::Ordering::Greater => num(at(v, u)),
            std::cmp::Ordering::Equal => num(0.0),
        };
        let rows = (0..n).map(|u| Value::Array((0..n).map(|v| entry(u, v)).collect()));
        d.put("matrix", Value::Array(rows.collect()));
    }
    r.finish(&o, None, None, d)
}

fn reconstructed(
    r: &Run,
    o: &HiddenGraphOracle,
    res: ReconstructionResult,
    out: Option<&Path>,
) -> Result<Report> {
    if let Some(path) = out {
        write(path, &write_graph(&res.graph))?;
    }
    let mut d = Details::new();
    d.put("m", res.graph.m());
    d.put("edges", edges_json(&res.graph));
    if res.candidates_evaluated > 0 {
        d.put("candidates_evaluated", res.candidates_evaluated);
    }
    r.finish(o, None, None, d)
}

fn schur(r: &Run, keep: &[usize], out: Option<&Path>) -> Result<Report> {
    r.check(PLAIN)?;
    let (mut o, _) = r.oracle()?;
    let keep = keep
        .iter()
        .map(|&x| vertex(x, o.n()))
        .collect::<Result<Vec<_>>>()?;
    let red = reconstruct_schur(&mut o, &keep)?;
    if let Some(path) = out {
        write(path, &write_graph(&red.graph))?;
    }
    let labels = |u: usize| red.vertices[u] + 1;
    let mut d = Details::new();
    d.put(
        "vertices",
        red.vertices.iter().map(|v| v + 1).collect::<Vec<_>>(),
    );
    d.put(
        "edges",
        Value::Array(
            red.graph
                .edges()
                .iter()
                .map(|e| json!([labels(e.u), labels(e.v), num(e.w)]))
                .collect(),
        ),
    );
    r.finish(&o, None, None, d)
}

fn complete(r: &Run, mode: CompleteMode, out: Option<&Path>) -> Result<Report> {
    r.check(PLAIN)?;
    let path = need(&r.common.instance, "--instance")?;
    let partial =
        parse_partial_graph(&read(path)?).with_context(|| format!("{}", path.display()))?;
    let inst = CompletionInstance::from_partial(partial)?;
    let (mut o, _) = r.oracle()?;
    if inst.n() != o.n() {
        bail!(
            "instance has {} vertices, hidden graph has {}",
            inst.n(),
            o.n()
        );
    }
    let res = match mode {
        CompleteMode::Quadratic => complete_quadratic(&mut o, &inst),
        CompleteMode::Exhaustive => complete_exhaustive(&mut o, &inst),
    };
    let mut d = Details::new();
    d.put("unknown", inst.unknown().len());
    match res {
        Ok(res) => {
            if let Some(path) = out {
                write(path, &write_graph(&res.graph))?;
            }
            d.put("m", res.graph.m());
            d.put("edges", edges_json(&res.graph));
            d.put("candidates_evaluated", res.candidates_evaluated);
            r.finish(&o, Some(true), None, d)
        }
        Err(
            e @ (ReconstructError::NoConsistentCompletion
            | ReconstructError::AmbiguousCompletion { .. }),
        ) => {
            let reason = match e {
                ReconstructError::AmbiguousCompletion { matches } => {
                    d.put("matches", matches);
                    "AmbiguousCompletion"
                }
                _ => "NoConsistentCompletion",
            };
            r.finish(&o, Some(false), Some(reason.to_string()), d)
        }
        Err(e) => Err(e.into()),
    }
}

/// Central difference of the regularized log-determinant along `(i, j)`,
/// against the analytic derivative and the queried resistance.
fn gradient(r: &Run, p: &[usize], h: f64) -> Result<Report> {
    r.check(PLAIN)?;
    if !(h.is_finite() && h > 0.0) {
        bail!("--h must be a positive number, got {h}");
    }
    let path = need(&r.common.hidden, "--hidden")?;
    let g = read_graph(path)?;
    let (i, j) = pair(p, g.n())?;
    let w = g.weight(i, j).unwrap_or(0.0);
    let plus = log_det_regularized(&g.with_weight(i, j, w + h)?)?;
    // Weights stay nonnegative: below h the difference is one-sided.
    let central = w >= h;
    let (fd, fd_tol) = if central {
        let minus = log_det_regularized(&g.with_weight(i, j, w - h)?)?;
        ((plus - minus) / (2.0 * h), 1e-6)
    } else {
        ((plus - log_det_regularized(&g)?) / h, 10.0 * h)
    };
    let analytic = logdet_directional_derivative(&g, i, j)?;
    let (mut o, _) = r.oracle()?;
    let res = o.er_query(i, j)?.as_f64();
    let tol = r.tol()?;
    let agrees = tol.eq(analytic, res) && (fd - res).abs() <= fd_tol * res.abs().max(1.0);
    let mut d = Details::new();
    d.put("pair", json!([p[0], p[1]]));
    d.float("h", h);
    d.put("scheme", if central { "central" } else { "forward" });
    d.float("resistance", res);
    d.float("analytic", analytic);
    d.float("finite_difference", fd);
    d.float("abs_diff_analytic", (analytic - res).abs());
    d.float("abs_diff_fd", (fd - res).abs());
    let reason = (!agrees).then(|| "GradientMismatch".to_string());
    r.finish(&o, Some(agrees), reason, d)
}
