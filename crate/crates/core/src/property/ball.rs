//! Effective-resistance unit balls.

use crate::graph::{all_pairs_er, Resistance, WeightedGraph};
use crate::oracle::{ErOracle, OracleError};

/// Ball membership is `R ≤ 1 + BALL_SLACK`, so cut-edge endpoints at exactly
/// one are always included.
pub const BALL_SLACK: f64 = 1e-9;

pub fn in_unit_ball(r: Resistance) -> bool {
    r.finite().is_some_and(|x| x <= 1.0 + BALL_SLACK)
}

/// How a unit ball is collected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallStrategy {
    /// `n − 1` ER queries from the center.
    Scan,
    /// Sorted-ball requests of doubling size until one overshoots radius 1.
    Sorted,
}

impl BallStrategy {
    /// `Sorted` when the oracle offers it.
    pub fn preferred<O: ErOracle + ?Sized>(o: &O) -> Self {
        if o.capabilities().sorted_ball {
            BallStrategy::Sorted
        } else {
            BallStrategy::Scan
        }
    }
}

/// The vertices other than `v` within resistance one of `v`, by ascending id.
pub fn unit_ball<O: ErOracle + ?Sized>(
    o: &mut O,
    v: usize,
    strategy: BallStrategy,
) -> Result<Vec<(usize, Resistance)>, OracleError> {
    let n = o.n();
    if v >= n {
        return Err(OracleError::VertexOutOfRange { vertex: v, n });
    }
    let mut ball = match strategy {
        BallStrategy::Scan => {
            let mut ball = Vec::new();
            for u in (0..n).filter(|&u| u != v) {
                let r = o.er_query(v, u)?;
                if in_unit_ball(r) {
                    ball.push((u, r));
                }
            }
            ball
        }
        BallStrategy::Sorted => {
            let mut k = 1.min(n - 1);
            loop {
                let items = o.sorted_ball(v, k)?;
                let overshoot = items.last().is_some_and(|&(_, r)| !in_unit_ball(r));
                if overshoot || k == n - 1 {
                    break items
                        .into_iter()
                        .filter(|&(_, r)| in_unit_ball(r))
                        .collect();
                }
                k = (2 * k).min(n - 1);
            }
        }
    };
    ball.sort_by_key(|&(u, _)| u);
    Ok(ball)
}

/// Maximum unit-ball size, counting the center, and the lowest vertex
/// attaining it.
pub fn er_density(g: &WeightedGraph) -> (usize, usize) {
    let r = all_pairs_er(g);
    let mut best = (0, 0);
    for v in 0..g.n() {
        let size = 1
            + (0..g.n())
                .filter(|&u| u != v && in_unit_ball(r.get(v, u)))
                .count();
        if size > best.0 {
            best = (size, v);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;
    use crate::oracle::HiddenGraphOracle;

    #[test]
    fn star_center_ball_is_everything() {
        let mut o = HiddenGraphOracle::new(generate::star(6).unwrap());
        let ball = unit_ball(&mut o, 0, BallStrategy::Scan).unwrap();
        assert_eq!(
            ball.iter().map(|b| b.0).collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 5]
        );
        assert_eq!(o.ledger().distinct, 5);
    }

    #[test]
    fn path_endpoint_ball() {
        let mut o = HiddenGraphOracle::new(generate::path(5).unwrap()).with_sorted_ball();
        let scan = unit_ball(&mut o, 0, BallStrategy::Scan).unwrap();
        let sorted = unit_ball(&mut o, 0, BallStrategy::Sorted).unwrap();
        assert_eq!(scan.len(), 1);
        assert_eq!(scan[0].0, 1);
        assert_eq!(sorted.iter().map(|b| b.0).collect::<Vec<_>>(), vec![1]);
        // One item, then two to see the ball end.
        assert_eq!(o.ledger().ball_requests, 3);
    }

    #[test]
    fn clique_ball_and_density() {
        let mut o = HiddenGraphOracle::new(generate::clique(5).unwrap()).with_sorted_ball();
        let ball = unit_ball(&mut o, 2, BallStrategy::Sorted).unwrap();
        assert_eq!(ball.len(), 4);
        assert!(ball.iter().all(|&(_, r)| (r.as_f64() - 0.4).abs() < 1e-12));
        assert_eq!(o.ledger().ball_requests, 1 + 2 + 4);
        assert_eq!(er_density(&generate::clique(8).unwrap()), (8, 0));
        assert_eq!(er_density(&generate::path(10).unwrap()), (3, 1));
        assert_eq!(er_density(&generate::star(6).unwrap()), (6, 0));
    }
}
