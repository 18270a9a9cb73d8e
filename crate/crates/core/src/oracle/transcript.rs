//! Query transcripts: `q er <u> <v> <answer>`, `q sp <u> <v> <answer>` and
//! `q ball <v> <k> <u>:<r> ...`, 1-indexed, one query per line, `inf` for
//! unreachable pairs. Floats use the shortest round-trip representation, so
//! parsing a dump gives back the same values bit for bit.

use std::fmt;

use thiserror::Error;

use super::{ErOracle, Hops, OracleError};
use crate::graph::Resistance;

#[derive(Debug, Clone, PartialEq)]
pub enum TranscriptEntry {
    Er {
        u: usize,
        v: usize,
        answer: Resistance,
    },
    Sp {
        u: usize,
        v: usize,
        answer: Hops,
    },
    Ball {
        v: usize,
        items: Vec<(usize, Resistance)>,
    },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
}

#[derive(Debug, Error, PartialEq)]
pub enum TranscriptError {
    #[error("transcript line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("replay diverged at query {index}: recorded {recorded}, got {got}")]
    Mismatch {
        index: usize,
        recorded: String,
        got: String,
    },
    #[error("replay failed at query {index}: {source}")]
    Oracle { index: usize, source: OracleError },
}

fn fmt_resistance(r: Resistance) -> String {
    match r {
        Resistance::Finite(x) => format!("{x}"),
        Resistance::Infinite => "inf".into(),
    }
}

fn fmt_hops(h: Hops) -> String {
    h.map_or_else(|| "inf".into(), |x| x.to_string())
}

impl fmt::Display for TranscriptEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranscriptEntry::Er { u, v, answer } => {
                write!(f, "q er {} {} {}", u + 1, v + 1, fmt_resistance(*answer))
            }
            TranscriptEntry::Sp { u, v, answer } => {
                write!(f, "q sp {} {} {}", u + 1, v + 1, fmt_hops(*answer))
            }
            TranscriptEntry::Ball { v, items } => {
                write!(f, "q ball {} {}", v + 1, items.len())?;
                for (u, r) in items {
                    write!(f, " {}:{}", u + 1, fmt_resistance(*r))?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

fn parse_id(line: usize, t: &str) -> Result<usize, TranscriptError> {
    match t.parse::<usize>() {
        Ok(x) if x > 0 => Ok(x - 1),
        _ => Err(TranscriptError::Parse {
            line,
            msg: format!("bad vertex '{t}'"),
        }),
    }
}

fn parse_resistance(line: usize, t: &str) -> Result<Resistance, TranscriptError> {
    if t == "inf" {
        return Ok(Resistance::Infinite);
    }
    t.parse::<f64>()
        .map(Resistance::Finite)
        .map_err(|_| TranscriptError::Parse {
            line,
            msg: format!("bad resistance '{t}'"),
        })
}

impl Transcript {
    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub(crate) fn push(&mut self, e: TranscriptEntry) {
        self.entries.push(e);
    }

    pub fn parse(text: &str) -> Result<Self, TranscriptError> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t: Vec<&str> = raw.split_whitespace().collect();
            if t.is_empty() {
                continue;
            }
            let bad = |msg: &str| TranscriptError::Parse {
                line,
                msg: msg.to_string(),
            };
            if t[0] != "q" || t.len() < 4 {
                return Err(bad("expected 'q <kind> ...'"));
            }
            let entry = match t[1] {
                "er" if t.len() == 5 => TranscriptEntry::Er {
                    u: parse_id(line, t[2])?,
                    v: parse_id(line, t[3])?,
                    answer: parse_resistance(line, t[4])?,
                },
                "sp" if t.len() == 5 => TranscriptEntry::Sp {
                    u: parse_id(line, t[2])?,
                    v: parse_id(line, t[3])?,
                    answer: if t[4] == "inf" {
                        None
                    } else {
                        Some(t[4].parse().map_err(|_| bad("bad hop count"))?)
                    },
                },
                "ball" => {
                    let k: usize = t[3].parse().map_err(|_| bad("bad ball size"))?;
                    if t.len() != 4 + k {
                        return Err(bad("ball size does not match item count"));
                    }
                    let items = t[4..]
                        .iter()
                        .map(|item| {
                            let (u, r) =
                                item.split_once(':').ok_or_else(|| bad("bad ball item"))?;
                            Ok((parse_id(line, u)?, parse_resistance(line, r)?))
                        })
                        .collect::<Result<Vec<_>, TranscriptError>>()?;
                    TranscriptEntry::Ball {
                        v: parse_id(line, t[2])?,
                        items,
                    }
                }
                _ => return Err(bad("unknown query kind or wrong field count")),
            };
            entries.push(entry);
        }
        Ok(Transcript { entries })
    }

    /// Re-issues every recorded query against `o` and checks that each answer
    /// is reproduced exactly.
    pub fn replay<O: ErOracle + ?Sized>(&self, o: &mut O) -> Result<(), TranscriptError> {
        for (index, entry) in self.entries.iter().enumerate() {
            let wrap = |source| TranscriptError::Oracle { index, source };
            let got = match entry {
                TranscriptEntry::Er { u, v, answer } => {
                    let r = o.er_query(*u, *v).map_err(wrap)?;
                    TranscriptEntry::Er {
                        u: *u,
                        v: *v,
                        answer: r,
                    }
                    .eq(entry)
                    .then_some(())
                    .ok_or((fmt_resistance(*answer), fmt_resistance(r)))
                }
                TranscriptEntry::Sp { u, v, answer } => {
                    let h = o.sp_query(*u, *v).map_err(wrap)?;
                    (h == *answer)
                        .then_some(())
                        .ok_or((fmt_hops(*answer), fmt_hops(h)))
                }
                TranscriptEntry::Ball { v, items } => {
                    let got = o.sorted_ball(*v, items.len()).map_err(wrap)?;
                    let again = TranscriptEntry::Ball { v: *v, items: got };
                    (again == *entry)
                        .then_some(())
                        .ok_or((entry.to_string(), again.to_string()))
                }
            };
            if let Err((recorded, got)) = got {
                return Err(TranscriptError::Mismatch {
                    index,
                    recorded,
                    got,
                });
            }
        }
        Ok(())
    }
}
