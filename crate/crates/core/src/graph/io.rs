//! Text formats. Vertex ids and bag ids are 1-indexed on disk and 0-indexed
//! in memory.
//!
//! Graph: `p er <n> <m>` then `e <u> <v> [w]`, `#` starts a comment.
//! Completion instance: a graph file that may also contain `w set <w...>` and
//! `e <u> <v> ?` lines for unknown entries.
//! Tree decomposition: PACE `s td <bags> <width+1> <n>`, `b <id> <v...>`,
//! then one `<a> <b>` line per tree edge; `c` lines are comments.

use std::fmt::Write as _;

use thiserror::Error;

use super::decomposition::TreeDecomposition;
use super::{ordered, WeightedGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

fn at(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        msg: msg.into(),
    }
}

/// A partially specified graph: `known` holds the fixed entries (pairs absent
/// from it and from `unknown` have weight zero).
#[derive(Debug, Clone, PartialEq)]
pub struct PartialGraph {
    pub known: WeightedGraph,
    pub unknown: Vec<(usize, usize)>,
    pub weight_set: Vec<f64>,
}

fn content_lines<'a>(
    text: &'a str,
    comment: &[&str],
) -> impl Iterator<Item = (usize, Vec<String>)> + 'a {
    let comment: Vec<String> = comment.iter().map(|s| s.to_string()).collect();
    text.lines().enumerate().filter_map(move |(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        let tokens: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        match tokens.first() {
            None => None,
            Some(t) if comment.contains(t) => None,
            Some(_) => Some((i + 1, tokens)),
        }
    })
}

fn parse_num<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T, ParseError> {
    token
        .parse()
        .map_err(|_| at(line, format!("cannot parse {what} from '{token}'")))
}

fn parse_vertex(line: usize, token: &str, n: usize) -> Result<usize, ParseError> {
    let v: usize = parse_num(line, token, "vertex")?;
    if v == 0 || v > n {
        return Err(at(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

enum Entry {
    Known(f64),
    Unknown,
}

struct RawGraph {
    n: usize,
    entries: Vec<(usize, usize, Entry)>,
    weight_set: Option<Vec<f64>>,
}

fn parse_raw(text: &str, allow_unknown: bool) -> Result<RawGraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut entries = Vec::new();
    let mut weight_set = None;
    for (line, tokens) in content_lines(text, &[]) {
        match tokens[0].as_str() {
            "p" => {
                if header.is_some() {
                    return Err(at(line, "duplicate header"));
                }
                if tokens.len() != 4 || tokens[1] != "er" {
                    return Err(at(line, "header must be 'p er <n> <m>'"));
                }
                let n: usize = parse_num(line, &tokens[2], "n")?;
                if n == 0 {
                    return Err(at(line, "n must be positive"));
                }
                header = Some((n, parse_num(line, &tokens[3], "m")?));
            }
            "w" if allow_unknown => {
                if tokens.len() < 3 || tokens[1] != "set" {
                    return Err(at(line, "weight set must be 'w set <w1> <w2> ...'"));
                }
                let set = tokens[2..]
                    .iter()
                    .map(|t| parse_num::<f64>(line, t, "weight"))
                    .collect::<Result<Vec<_>, _>>()?;
                if set.iter().any(|w| !w.is_finite() || *w < 0.0) {
                    return Err(at(line, "candidate weights must be finite and nonnegative"));
                }
                weight_set = Some(set);
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| at(line, "edge before header"))?;
                if tokens.len() != 3 && tokens.len() != 4 {
                    return Err(at(line, "edge must be 'e <u> <v> [w]'"));
                }
                let u = parse_vertex(line, &tokens[1], n)?;
                let v = parse_vertex(line, &tokens[2], n)?;
                if u == v {
                    return Err(at(line, format!("self-loop at vertex {}", u + 1)));
                }
                let entry = match tokens.get(3).map(String::as_str) {
                    None => Entry::Known(1.0),
                    Some("?") if allow_unknown => Entry::Unknown,
                    Some(t) => {
                        let w: f64 = parse_num(line, t, "weight")?;
                        let ok = if allow_unknown { w >= 0.0 } else { w > 0.0 };
                        if !w.is_finite() || !ok {
                            return Err(at(line, format!("invalid weight {w}")));
                        }
                        Entry::Known(w)
                    }
                };
                entries.push((u, v, entry));
            }
            other => return Err(at(line, format!("unknown line type '{other}'"))),
        }
    }
    let (n, m) = header.ok_or_else(|| ParseError::Invalid("missing 'p er' header".into()))?;
    if entries.len() != m {
        return Err(ParseError::Invalid(format!(
            "header declares {m} edges, found {}",
            entries.len()
        )));
    }
    Ok(RawGraph {
        n,
        entries,
        weight_set,
    })
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph, ParseError> {
    let raw = parse_raw(text, false)?;
    let edges = raw.entries.into_iter().map(|(u, v, e)| match e {
        Entry::Known(w) => (u, v, w),
        Entry::Unknown => unreachable!("unknown entries rejected"),
    });
    WeightedGraph::new(raw.n, edges).map_err(|e| ParseError::Invalid(e.to_string()))
}

pub fn parse_partial_graph(text: &str) -> Result<PartialGraph, ParseError> {
    let raw = parse_raw(text, true)?;
    let mut known = Vec::new();
    let mut unknown = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (u, v, entry) in raw.entries {
        let pair = ordered(u, v);
        if !seen.insert(pair) {
            return Err(ParseError::Invalid(format!(
                "pair ({}, {}) listed twice",
                pair.0 + 1,
                pair.1 + 1
            )));
        }
        match entry {
            Entry::Known(w) if w > 0.0 => known.push((pair.0, pair.1, w)),
            Entry::Known(_) => {}
            Entry::Unknown => unknown.push(pair),
        }
    }
    let weight_set = raw
        .weight_set
        .ok_or_else(|| ParseError::Invalid("missing 'w set' line".into()))?;
    if weight_set.is_empty() {
        return Err(ParseError::Invalid("weight set is empty".into()));
    }
    let known = WeightedGraph::new(raw.n, known).map_err(|e| ParseError::Invalid(e.to_string()))?;
    Ok(PartialGraph {
        known,
        unknown,
        weight_set,
    })
}

fn fmt_weight(w: f64) -> String {
    format!("{w}")
}

pub fn write_graph(g: &WeightedGraph) -> String {
    let mut out = format!("p er {} {}\n", g.n(), g.m());
    for e in g.edges() {
        if e.w == 1.0 {
            let _ = writeln!(out, "e {} {}", e.u + 1, e.v + 1);
        } else {
            let _ = writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, fmt_weight(e.w));
        }
    }
    out
}

pub fn write_partial_graph(p: &PartialGraph) -> String {
    let set: Vec<String> = p.weight_set.iter().map(|&w| fmt_weight(w)).collect();
    let mut out = format!(
        "p er {} {}\nw set {}\n",
        p.known.n(),
        p.known.m() + p.unknown.len(),
        set.join(" ")
    );
    for e in p.known.edges() {
        let _ = writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, fmt_weight(e.w));
    }
    for &(u, v) in &p.unknown {
        let _ = writeln!(out, "e {} {} ?", u + 1, v + 1);
    }
    out
}

pub fn parse_td(text: &str) -> Result<TreeDecomposition, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut tree_edges = Vec::new();
    for (line, tokens) in content_lines(text, &["c"]) {
        match tokens[0].as_str() {
            "s" => {
                if tokens.len() != 5 || tokens[1] != "td" {
                    return Err(at(line, "header must be 's td <bags> <width+1> <n>'"));
                }
                let count: usize = parse_num(line, &tokens[2], "bag count")?;
                let n: usize = parse_num(line, &tokens[4], "n")?;
                bags = vec![None; count];
                header = Some((count, n));
            }
            "b" => {
                let (count, n) = header.ok_or_else(|| at(line, "bag before header"))?;
                if tokens.len() < 2 {
                    return Err(at(line, "bag must be 'b <id> <v...>'"));
                }
                let id: usize = parse_num(line, &tokens[1], "bag id")?;
                if id == 0 || id > count {
                    return Err(at(line, format!("bag id {id} outside 1..={count}")));
                }
                let vs = tokens[2..]
                    .iter()
                    .map(|t| parse_vertex(line, t, n))
                    .collect::<Result<Vec<_>, _>>()?;
                if bags[id - 1].replace(vs).is_some() {
                    return Err(at(line, format!("bag {id} defined twice")));
                }
            }
            _ => {
                let (count, _) = header.ok_or_else(|| at(line, "tree edge before header"))?;
                if tokens.len() != 2 {
                    return Err(at(line, "tree edge must be '<a> <b>'"));
                }
                let a: usize = parse_num(line, &tokens[0], "bag id")?;
                let b: usize = parse_num(line, &tokens[1], "bag id")?;
                if a == 0 || b == 0 || a > count || b > count {
                    return Err(at(
                        line,
                        format!("tree edge ({a}, {b}) refers to a missing bag"),
                    ));
                }
                tree_edges.push((a - 1, b - 1));
            }
        }
    }
    if header.is_none() {
        return Err(ParseError::Invalid("missing 's td' header".into()));
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| ParseError::Invalid(format!("bag {} missing", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    TreeDecomposition::new(bags, tree_edges).map_err(|e| ParseError::Invalid(e.to_string()))
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = format!("s td {} {} {}\n", td.bag_count(), td.width() + 1, n);
    for (i, bag) in td.bags().iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for &(a, b) in td.tree_edges() {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}
