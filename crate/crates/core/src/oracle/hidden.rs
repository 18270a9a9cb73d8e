use super::{
    check_pair, sort_ball, Capabilities, ErOracle, Hops, OracleError, QueryBook, QueryLedger,
};
use crate::graph::exact::{ExactResistance, ExactResistances};
use crate::graph::{all_pairs_er, ErMatrix, Resistance, WeightedGraph};
use crate::oracle::transcript::Transcript;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Float,
    /// Rational arithmetic, for graphs with at most 100 vertices.
    Exact,
}

/// Simulated oracle over a hidden graph. Shortest-path queries are always
/// answered; sorted-ball queries only after [`with_sorted_ball`](Self::with_sorted_ball).
pub struct HiddenGraphOracle {
    hidden: WeightedGraph,
    resistances: ErMatrix,
    exact: Option<ExactResistances>,
    hops: Vec<Option<Vec<Option<usize>>>>,
    sorted_ball: bool,
    book: QueryBook,
}

impl HiddenGraphOracle {
    pub fn new(hidden: WeightedGraph) -> Self {
        let resistances = all_pairs_er(&hidden);
        let n = hidden.n();
        HiddenGraphOracle {
            hidden,
            resistances,
            exact: None,
            hops: vec![None; n],
            sorted_ball: false,
            book: QueryBook::new(),
        }
    }

    pub fn with_mode(hidden: WeightedGraph, mode: Mode) -> Result<Self, OracleError> {
        let mut o = Self::new(hidden);
        if mode == Mode::Exact {
            o.exact = Some(ExactResistances::compute(&o.hidden)?);
        }
        Ok(o)
    }

    pub fn with_sorted_ball(mut self) -> Self {
        self.sorted_ball = true;
        self
    }

    pub fn mode(&self) -> Mode {
        if self.exact.is_some() {
            Mode::Exact
        } else {
            Mode::Float
        }
    }

    pub fn transcript(&self) -> &Transcript {
        self.book.transcript()
    }

    fn answer(&self, u: usize, v: usize) -> Resistance {
        match &self.exact {
            Some(ex) => match ex.get(u, v) {
                ExactResistance::Finite(r) => {
                    Resistance::Finite(crate::graph::exact::ratio_to_f64(r))
                }
                ExactResistance::Infinite => Resistance::Infinite,
            },
            None => self.resistances.get(u, v),
        }
    }
}

impl ErOracle for HiddenGraphOracle {
    fn n(&self) -> usize {
        self.hidden.n()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            sorted_ball: self.sorted_ball,
            shortest_path: true,
            exact: self.exact.is_some(),
        }
    }

    fn ledger(&self) -> &QueryLedger {
        self.book.ledger()
    }

    fn er_query(&mut self, u: usize, v: usize) -> Result<Resistance, OracleError> {
        check_pair(self.n(), u, v)?;
        let r = self.answer(u, v);
        Ok(self.book.er(u, v, || r))
    }

    fn er_query_exact(
        &mut self,
        u: usize,
        v: usize,
    ) -> Result<Option<ExactResistance>, OracleError> {
        self.er_query(u, v)?;
        Ok(self.exact.as_ref().map(|ex| ex.get(u, v).clone()))
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
            .map(|u| (u, self.answer(v, u)))
            .collect();
        let mut items = sort_ball(all);
        items.truncate(k);
        Ok(self.book.ball(v, items))
    }

    fn sp_query(&mut self, u: usize, v: usize) -> Result<Hops, OracleError> {
        check_pair(self.n(), u, v)?;
        if self.hops[u].is_none() {
            self.hops[u] = Some(self.hidden.hop_distances(u));
        }
        let h = self.hops[u].as_ref().expect("filled above")[v];
        Ok(self.book.sp(u, v, || h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    #[test]
    fn repeated_queries_are_cached() {
        let mut o = HiddenGraphOracle::new(generate::path(3).unwrap());
        let first = o.er_query(0, 2).unwrap();
        assert!((first.as_f64() - 2.0).abs() < 1e-12);
        assert_eq!(o.er_query(2, 0).unwrap(), first);
        assert_eq!(o.ledger().distinct, 1);
        assert_eq!(o.ledger().total, 2);
        assert_eq!(o.er_query(1, 1), Err(OracleError::SameVertex(1)));
        assert_eq!(o.transcript().entries().len(), 2);
    }

    #[test]
    fn cross_component_query_is_infinite() {
        let g = WeightedGraph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        let mut o = HiddenGraphOracle::new(g);
        assert_eq!(o.er_query(1, 2).unwrap(), Resistance::Infinite);
        assert_eq!(o.sp_query(1, 2).unwrap(), None);
    }

    #[test]
    fn sorted_ball_needs_opt_in() {
        let g = generate::star(5).unwrap();
        let mut plain = HiddenGraphOracle::new(g.clone());
        assert_eq!(
            plain.sorted_ball(1, 2),
            Err(OracleError::Unsupported("sorted-ball"))
        );
        let mut o = HiddenGraphOracle::new(g).with_sorted_ball();
        let ball = o.sorted_ball(3, 2).unwrap();
        assert_eq!(ball[0].0, 0);
        assert_eq!(ball[1].0, 1);
        assert_eq!(o.ledger().ball_requests, 2);
        assert_eq!(o.ledger().distinct, 0);
        assert!(o.sorted_ball(3, 5).is_err());
    }

    #[test]
    fn shortest_paths() {
        let mut o = HiddenGraphOracle::new(generate::path(4).unwrap());
        assert_eq!(o.sp_query(0, 3).unwrap(), Some(3));
        assert_eq!(o.ledger().sp_distinct, 1);
        assert_eq!(o.ledger().distinct, 0);
    }

    #[test]
    fn exact_mode_answers_rationals() {
        let mut o = HiddenGraphOracle::with_mode(generate::cycle(4).unwrap(), Mode::Exact).unwrap();
        let r = o.er_query_exact(0, 1).unwrap().unwrap();
        assert!(!r.is_integer());
        assert!(o.er_query_exact(0, 2).unwrap().unwrap().is_integer());
        assert_eq!(o.ledger().distinct, 2);
    }
}
