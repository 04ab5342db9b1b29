use serde::Serialize;

use super::rip::{rip_constant, RipMode};
use super::support::supports_up_to;
use crate::construct::{build_bernoulli_baseline, build_legendre_deterministic};
use crate::error::{invalid, Error, Result};
use crate::ntheory::{next_prime_geq, BigNat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PrimeSelection {
    /// Every prime `p > MN` in `[lo, hi]`.
    Range { lo: u64, hi: u64 },
    /// The `count` smallest primes `p > MN`.
    FirstAbove { count: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub p: u64,
    pub delta: f64,
    pub worst_support: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineRow {
    pub rng_seed: u64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spread {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Spread {
    fn of(values: &[f64]) -> Option<Spread> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let mid = v.len() / 2;
        let median = if v.len() % 2 == 1 { v[mid] } else { (v[mid - 1] + v[mid]) / 2.0 };
        Some(Spread {
            min: v[0],
            median,
            max: v[v.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    /// Sparsity actually checked, `2K`.
    pub order: usize,
    pub target_delta: f64,
    /// Ascending in `p`.
    pub rows: Vec<ScanRow>,
    pub fraction_meeting_target: f64,
    pub baseline: Vec<BaselineRow>,
    pub legendre_spread: Option<Spread>,
    pub baseline_spread: Option<Spread>,
    /// Whether the `[min, max]` ranges of the two distributions intersect.
    pub overlap: Option<bool>,
}

fn select_primes(mn: u64, selection: PrimeSelection) -> Result<Vec<u64>> {
    let mut primes = Vec::new();
    let mut cursor = match selection {
        PrimeSelection::Range { lo, hi } => {
            if lo > hi {
                return Err(invalid(format!("empty prime range [{lo}, {hi}]")));
            }
            lo.max(mn + 1)
        }
        PrimeSelection::FirstAbove { .. } => mn + 1,
    };
    loop {
        if let PrimeSelection::FirstAbove { count } = selection {
            if primes.len() >= count {
                break;
            }
        }
        let p = next_prime_geq(&BigNat::from(cursor))?
            .as_u64()
            .ok_or_else(|| invalid("prime search left the 64-bit range"))?;
        if let PrimeSelection::Range { hi, .. } = selection {
            if p > hi {
                break;
            }
        }
        primes.push(p);
        cursor = p + 1;
    }
    Ok(primes)
}

/// Exact `delta_2K` of the deterministic matrix for each selected prime,
/// next to the same statistic for Bernoulli matrices drawn with
/// `baseline_seeds`. The comparison is descriptive.
pub fn conjecture_scan(
    m: usize,
    n: usize,
    k: usize,
    selection: PrimeSelection,
    target_delta: f64,
    baseline_seeds: &[u64],
    budget: u128,
) -> Result<ScanReport> {
    if m == 0 || k == 0 {
        return Err(invalid("M and K must be positive"));
    }
    let order = 2 * k;
    if order > n {
        return Err(invalid(format!("2K = {order} exceeds N = {n}")));
    }
    let needed = supports_up_to(n as u64, order as u64);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget,
            hint: "reduce N or K",
        });
    }
    let mn = (m as u64)
        .checked_mul(n as u64)
        .ok_or_else(|| invalid("M*N overflows"))?;

    let mut rows = Vec::new();
    for p in select_primes(mn, selection)? {
        let cert = crate::ntheory::PrimeCert::certify(&BigNat::from(p))?;
        let mat = build_legendre_deterministic(m, n, &cert)?;
        let r = rip_constant(&mat, order, RipMode::Exhaustive, budget)?;
        rows.push(ScanRow {
            p,
            delta: r.delta_exact.expect("exhaustive"),
            worst_support: r.worst_support,
        });
    }
    let mut baseline = Vec::new();
    for &seed in baseline_seeds {
        let mat = build_bernoulli_baseline(m, n, seed)?;
        let r = rip_constant(&mat, order, RipMode::Exhaustive, budget)?;
        baseline.push(BaselineRow {
            rng_seed: seed,
            delta: r.delta_exact.expect("exhaustive"),
        });
    }

    let legendre: Vec<f64> = rows.iter().map(|r| r.delta).collect();
    let base: Vec<f64> = baseline.iter().map(|r| r.delta).collect();
    let meeting = legendre.iter().filter(|&&d| d <= target_delta).count();
    let legendre_spread = Spread::of(&legendre);
    let baseline_spread = Spread::of(&base);
    let overlap = match (legendre_spread, baseline_spread) {
        (Some(a), Some(b)) => Some(a.min <= b.max && b.min <= a.max),
        _ => None,
    };
    Ok(ScanReport {
        m,
        n,
        k,
        order,
        target_delta,
        fraction_meeting_target: if rows.is_empty() { 0.0 } else { meeting as f64 / rows.len() as f64 },
        rows,
        baseline,
        legendre_spread,
        baseline_spread,
        overlap,
    })
}
