use std::collections::BTreeMap;

use super::transcript::{Transcript, TranscriptEntry};
use super::{Hops, QueryLedger};
use crate::graph::{ordered, Resistance};

/// Cache, ledger and transcript shared by oracle implementations.
#[derive(Debug, Clone, Default)]
pub struct QueryBook {
    er: BTreeMap<(usize, usize), Resistance>,
    sp: BTreeMap<(usize, usize), Hops>,
    ledger: QueryLedger,
    transcript: Transcript,
}

impl QueryBook {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn er(&mut self, u: usize, v: usize, answer: impl FnOnce() -> Resistance) -> Resistance {
        let key = ordered(u, v);
        self.ledger.total += 1;
        let r = *self.er.entry(key).or_insert_with(|| {
            self.ledger.distinct += 1;
            answer()
        });
        self.transcript
            .push(TranscriptEntry::Er { u, v, answer: r });
        r
    }

    pub fn sp(&mut self, u: usize, v: usize, answer: impl FnOnce() -> Hops) -> Hops {
        let key = ordered(u, v);
        self.ledger.sp_total += 1;
        let h = *self.sp.entry(key).or_insert_with(|| {
            self.ledger.sp_distinct += 1;
            answer()
        });
        self.transcript
            .push(TranscriptEntry::Sp { u, v, answer: h });
        h
    }

    pub fn ball(&mut self, v: usize, items: Vec<(usize, Resistance)>) -> Vec<(usize, Resistance)> {
        self.ledger.ball_requests += items.len();
        self.transcript.push(TranscriptEntry::Ball {
            v,
            items: items.clone(),
        });
        items
    }
}
