use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PropertyError;
use crate::graph::{all_pairs_er, validate_tree_decomposition, TreeDecomposition, WeightedGraph};

/// Observed ratios `r_T(s, t) / R(s, t)` on sampled pairs, where `r_T` is the
/// tree distance between the nearest bags holding `s` and `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct TdBoundReport {
    pub pairs_checked: usize,
    pub max_ratio: f64,
    /// The pair attaining `max_ratio`.
    pub worst: Option<(usize, usize)>,
    /// `4 · b_T · d_G · w_T`, with `w_T` taken as at least one.
    pub factor: f64,
    /// Sampled pairs whose ratio exceeds `factor`.
    pub violations: usize,
}

impl TdBoundReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Samples `samples` pairs of distinct vertices (with replacement) and checks
/// `r_T(s, t) ≤ 4 · b_T · d_G · w_T · R(s, t)` on each.
pub fn td_distance_bound_check(
    g: &WeightedGraph,
    td: &TreeDecomposition,
    b_t: usize,
    samples: usize,
    seed: u64,
) -> Result<TdBoundReport, PropertyError> {
    validate_tree_decomposition(g, td)?;
    let n = g.n();
    let found = td.max_multiplicity(n);
    if found > b_t {
        return Err(PropertyError::MultiplicityExceeded { found, bound: b_t });
    }
    let factor = 4.0 * (b_t * g.max_degree() * td.width().max(1)) as f64;
    let mut report = TdBoundReport {
        pairs_checked: 0,
        max_ratio: 0.0,
        worst: None,
        factor,
        violations: 0,
    };
    if n < 2 {
        return Ok(report);
    }
    let r = all_pairs_er(g);
    let holders: Vec<Vec<usize>> = (0..n).map(|v| td.bags_containing(v)).collect();
    let mut from_bag: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let s = rng.gen_range(0..n);
        let mut t = rng.gen_range(0..n - 1);
        if t >= s {
            t += 1;
        }
        let mut r_t = usize::MAX;
        for &a in &holders[s] {
            let dist = from_bag.entry(a).or_insert_with(|| td.tree_distances(a));
            for &b in &holders[t] {
                r_t = r_t.min(dist[b]);
            }
        }
        let ratio = r_t as f64 / r.get(s, t).as_f64();
        report.pairs_checked += 1;
        if ratio > report.max_ratio || report.worst.is_none() {
            report.max_ratio = ratio;
            report.worst = Some((s, t));
        }
        if ratio > factor {
            report.violations += 1;
        }
    }
    Ok(report)
}
