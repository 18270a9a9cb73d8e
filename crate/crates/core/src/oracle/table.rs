use super::{check_pair, sort_ball, Capabilities, ErOracle, OracleError, QueryBook, QueryLedger};
use crate::graph::{ErMatrix, Resistance};
use crate::oracle::transcript::Transcript;

/// Oracle backed by a stored resistance matrix.
pub struct TableOracle {
    table: ErMatrix,
    sorted_ball: bool,
    book: QueryBook,
}

impl TableOracle {
    pub fn new(table: ErMatrix) -> Self {
        TableOracle {
            table,
            sorted_ball: false,
            book: QueryBook::new(),
        }
    }

    pub fn with_sorted_ball(mut self) -> Self {
        self.sorted_ball = true;
        self
    }

    pub fn transcript(&self) -> &Transcript {
        self.book.transcript()
    }
}

impl ErOracle for TableOracle {
    fn n(&self) -> usize {
        self.table.n()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            sorted_ball: self.sorted_ball,
            ..Capabilities::default()
        }
    }

    fn ledger(&self) -> &QueryLedger {
        self.book.ledger()
    }

    fn er_query(&mut self, u: usize, v: usize) -> Result<Resistance, OracleError> {
        check_pair(self.n(), u, v)?;
        let r = self.table.get(u, v);
        Ok(self.book.er(u, v, || r))
    }

    fn sorted_ball(&mut self, v: usize, k: usize) -> Result<Vec<(usize, Resistance)>, OracleError> {
        if !self.sorted_ball {
            return Err(OracleError::Unsupported("sorted-ball"));
        }
        let n = self.n();
        if v >= n {
            return Err(OracleError::VertexOutOfRange { vertex: v, n });
        }
        if k > n - 1 {
            return Err(OracleError::BallTooLarge { k, max: n - 1 });
        }
        let all = (0..n)
            .filter(|&u| u != v)
            .map(|u| (u, self.table.get(v, u)))
            .collect();
        let mut items = sort_ball(all);
        items.truncate(k);
        Ok(self.book.ball(v, items))
    }
}
