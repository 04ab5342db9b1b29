use rayon::prelude::*;
use serde::Serialize;

use super::support::{merge, Best};
use crate::construct::SignMatrix;
use crate::error::{invalid, Result};

/// Slack allowed when comparing coherence against the Welch floor.
pub const WELCH_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherenceReport {
    pub mu: f64,
    pub welch_floor: f64,
    /// 0-based column pair achieving `mu`, lexicographically smallest.
    pub worst_pair: (usize, usize),
    /// `mu >= welch_floor - WELCH_SLACK`.
    pub welch_holds: bool,
}

/// `sqrt(max(0, (N - M) / (M (N - 1))))`.
pub fn welch_floor(m: usize, n: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    ((n - m) / (m * (n - 1.0))).max(0.0).sqrt()
}

/// Largest `|<phi_a, phi_b>|` over distinct columns.
pub fn coherence(mat: &SignMatrix) -> Result<CoherenceReport> {
    let n = mat.cols();
    if n < 2 {
        return Err(invalid("coherence needs at least two columns"));
    }
    let best = (0..n)
        .into_par_iter()
        .map(|a| {
            (a + 1..n)
                .map(|b| Best {
                    key: mat.sign_dot(a, b).unsigned_abs(),
                    witness: (a, b),
                })
                .map(Some)
                .fold(None, merge)
        })
        .reduce(|| None, merge)
        .expect("two columns");
    let mu = best.key as f64 / mat.rows() as f64;
    let floor = welch_floor(mat.rows(), n);
    Ok(CoherenceReport {
        mu,
        welch_floor: floor,
        worst_pair: best.witness,
        welch_holds: mu >= floor - WELCH_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_bernoulli_baseline;

    #[test]
    fn examples() {
        let same = SignMatrix::from_signs(2, 2, &[1, -1, 1, -1]).unwrap();
        assert_eq!(coherence(&same).unwrap().mu, 1.0);
        let orth = SignMatrix::from_signs(2, 2, &[1, 1, 1, -1]).unwrap();
        let r = coherence(&orth).unwrap();
        assert_eq!((r.mu, r.welch_floor), (0.0, 0.0));
        assert!((welch_floor(3, 7) - (4.0f64 / 18.0).sqrt()).abs() < 1e-15);
        let one = SignMatrix::from_signs(2, 1, &[1, 1]).unwrap();
        assert!(coherence(&one).is_err());
    }

    #[test]
    fn welch_on_random_matrices() {
        for seed in 0..30 {
            let m = build_bernoulli_baseline(5, 17, seed).unwrap();
            assert!(coherence(&m).unwrap().welch_holds);
        }
    }
}
