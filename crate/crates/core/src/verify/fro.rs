use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use super::support::{binomial, for_each_combination, merge, Best};
use crate::construct::{clamped_log, SignMatrix, FRO_TO_RIP};
use crate::error::{invalid, Error, Result};

/// Best pair `(I, J)` so far.
type PairBest = Best<FlatRatio, (Vec<usize>, Vec<usize>)>;

/// `|sum_{i in I, j in J} D_ij| / sqrt(|I||J|)` kept as the exact pair
/// `(|dot|, |I||J|)` so comparisons never round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct FlatRatio {
    dot: u64,
    sizes: u64,
}

impl Ord for FlatRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.dot as u128 * self.dot as u128 * other.sizes as u128;
        let rhs = other.dot as u128 * other.dot as u128 * self.sizes as u128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for FlatRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FroReport {
    pub k_checked: usize,
    pub theta_emp: f64,
    /// Disjoint 0-based index sets with `min(I) < min(J)`.
    pub worst_pair: (Vec<usize>, Vec<usize>),
    /// `150 * theta_emp * max(ln K, 1)`.
    pub delta_via_fro: f64,
    pub pairs_evaluated: u128,
}

/// Number of unordered disjoint pairs `{I, J}` with `1 <= |I|, |J| <= K`.
pub fn fro_pair_count(n: u64, k: u64) -> u128 {
    let mut ordered = 0u128;
    for a in 1..=k.min(n) {
        for b in 1..=k.min(n - a) {
            ordered += binomial(n, a) * binomial(n - a, b);
        }
    }
    ordered / 2
}

/// Exact flat restricted orthogonality constant over all disjoint nonempty
/// `I, J` with `|I|, |J| <= K`.
pub fn fro_constant(mat: &SignMatrix, k: usize, budget: u128) -> Result<FroReport> {
    let n = mat.cols();
    if k == 0 {
        return Err(invalid("K must be at least 1"));
    }
    if n < 2 {
        return Err(invalid("flat restricted orthogonality needs at least two columns"));
    }
    let needed = fro_pair_count(n as u64, k as u64);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget,
            hint: "reduce K",
        });
    }
    let gram = mat.sign_gram();

    let best = (1..=k.min(n))
        .into_par_iter()
        .flat_map(|a| (a - 1..n).into_par_iter().map(move |top| (a, top)))
        .map(|(a, top)| {
            let mut best: Option<PairBest> = None;
            let mut set_i = vec![0usize; a];
            set_i[a - 1] = top;
            for_each_combination(top, a - 1, |head| {
                set_i[..a - 1].copy_from_slice(head);
                // Row sums of the Gram over I.
                let row: Vec<i64> = (0..n)
                    .map(|j| set_i.iter().map(|&i| gram[i * n + j]).sum())
                    .collect();
                let avail: Vec<usize> = (set_i[0] + 1..n).filter(|j| !set_i.contains(j)).collect();
                for b in 1..=k.min(avail.len()) {
                    for_each_combination(avail.len(), b, |pick| {
                        let dot: i64 = pick.iter().map(|&t| row[avail[t]]).sum();
                        let cand = Best {
                            key: FlatRatio {
                                dot: dot.unsigned_abs(),
                                sizes: (a * b) as u64,
                            },
                            witness: (set_i.clone(), pick.iter().map(|&t| avail[t]).collect()),
                        };
                        best = merge(best.take(), Some(cand));
                    });
                }
            });
            best
        })
        .reduce(|| None, merge)
        .expect("at least one pair");

    let theta = best.key.dot as f64 / (mat.rows() as f64 * (best.key.sizes as f64).sqrt());
    let (log_k, _) = clamped_log(k as u64);
    Ok(FroReport {
        k_checked: k,
        theta_emp: theta,
        worst_pair: best.witness,
        delta_via_fro: FRO_TO_RIP * theta * log_k,
        pairs_evaluated: needed,
    })
}
