use serde::Serialize;

use crate::error::{invalid, Result};
use crate::ntheory::BigNat;

/// Default planning constant for the row count.
pub const DEFAULT_C1: f64 = 5_760_000.0;

/// Constant in the FRO-to-RIP conversion `delta = 150 * theta * log K`.
pub const FRO_TO_RIP: f64 = 150.0;

/// Caller-supplied replacements for planned quantities.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub m: Option<u64>,
    pub h: Option<u32>,
    pub c1: Option<f64>,
}

/// Resolved construction parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignParams {
    pub n: u64,
    pub k: u64,
    pub delta: f64,
    pub m: u64,
    pub h: u32,
    /// Natural log of the bias budget. The budget itself underflows `f64`
    /// for every realistic instance, so the log is the primary quantity.
    pub ln_eps_required: f64,
    pub eps_required: f64,
    pub p_min: BigNat,
    pub c1: f64,
    /// `max(ln K, 1)`, the clamped log used in both formulas.
    pub log_k_used: f64,
    pub log_k_clamped: bool,
    pub m_overridden: bool,
    pub h_overridden: bool,
    /// Natural log of `2 N^(-2K)`, the failure probability attached to the
    /// bias budget. Reported, never asserted.
    pub ln_failure_probability: f64,
}

impl DesignParams {
    /// Parameters for a directly specified `M x N` instance with entropy
    /// `H`, bypassing the planner. `K` and `delta` are recorded as 1.
    pub fn explicit(m: u64, n: u64, h: u32) -> Result<Self> {
        if m == 0 || n == 0 || h == 0 {
            return Err(invalid("explicit instances need M, N, H >= 1"));
        }
        let ln_n = (n as f64).ln();
        Ok(DesignParams {
            n,
            k: 1,
            delta: 1.0,
            m,
            h,
            ln_eps_required: f64::NAN,
            eps_required: f64::NAN,
            p_min: &BigNat::pow2(h) + &(&BigNat::from(m) * &BigNat::from(n)),
            c1: DEFAULT_C1,
            log_k_used: 1.0,
            log_k_clamped: true,
            m_overridden: true,
            h_overridden: true,
            ln_failure_probability: 2f64.ln() - 2.0 * ln_n,
        })
    }

    /// Row/column counts as `usize` for building an actual matrix.
    pub fn dims(&self) -> Result<(usize, usize)> {
        let m = usize::try_from(self.m).map_err(|_| invalid("M does not fit in memory"))?;
        let n = usize::try_from(self.n).map_err(|_| invalid("N does not fit in memory"))?;
        m.checked_mul(n)
            .ok_or_else(|| invalid("M*N overflows"))?;
        Ok((m, n))
    }
}

/// `max(ln K, 1)` and whether the clamp was active.
pub fn clamped_log(k: u64) -> (f64, bool) {
    let l = (k as f64).ln();
    if l < 1.0 {
        (1.0, true)
    } else {
        (l, false)
    }
}

/// Right-hand side of the bias sufficiency condition:
/// `-40 K ln((150/delta) K L) ln N`, which is also `ln eps_required`.
pub fn ln_bias_budget(n: u64, k: u64, delta: f64, log_k: f64) -> f64 {
    -40.0 * k as f64 * ((FRO_TO_RIP / delta) * k as f64 * log_k).ln() * (n as f64).ln()
}

/// Whether `ln 4 + 2 ln N - (H/3) ln 2 <= ln_budget`, i.e. whether the
/// chain bound `4 N^2 2^(-H/3)` fits inside the bias budget.
pub fn chain_fits(n: u64, h: u64, ln_budget: f64) -> bool {
    4f64.ln() + 2.0 * (n as f64).ln() - (h as f64 / 3.0) * 2f64.ln() <= ln_budget
}

/// Smallest `H >= 1` with [`chain_fits`].
pub fn minimal_entropy(n: u64, ln_budget: f64) -> u64 {
    let estimate = 3.0 * (4f64.ln() + 2.0 * (n as f64).ln() - ln_budget) / 2f64.ln();
    let mut h = estimate.ceil().max(1.0) as u64;
    while !chain_fits(n, h, ln_budget) {
        h += 1;
    }
    while h > 1 && chain_fits(n, h - 1, ln_budget) {
        h -= 1;
    }
    h
}

/// Plans `(M, H, eps, p_min)` for an `N`-column matrix that should be
/// `(2K, delta)`-RIP.
///
/// `M = ceil((C1/delta^2) K L^2 ln N)` and `H` is the least integer for which
/// the chain bound fits the bias budget, with `L = max(ln K, 1)`.
pub fn plan_parameters(n: u64, k: u64, delta: f64, overrides: Overrides) -> Result<DesignParams> {
    if n < 2 {
        return Err(invalid(format!("N must be at least 2, got {n}")));
    }
    if k < 1 || k > n {
        return Err(invalid(format!("K must satisfy 1 <= K <= N, got K={k}, N={n}")));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(invalid(format!("delta must lie in (0, 1], got {delta}")));
    }
    let c1 = overrides.c1.unwrap_or(DEFAULT_C1);
    if !(c1 > 0.0 && c1.is_finite()) {
        return Err(invalid(format!("C1 must be positive, got {c1}")));
    }
    let (log_k, clamped) = clamped_log(k);
    let ln_n = (n as f64).ln();
    let ln_budget = ln_bias_budget(n, k, delta, log_k);

    let m = match overrides.m {
        Some(0) => return Err(invalid("M override must be at least 1")),
        Some(m) => m,
        None => {
            let planned = (c1 / (delta * delta)) * k as f64 * log_k * log_k * ln_n;
            if planned >= u64::MAX as f64 {
                return Err(invalid("planned M exceeds u64"));
            }
            planned.ceil() as u64
        }
    };
    let h = match overrides.h {
        Some(0) => return Err(invalid("H override must be at least 1")),
        Some(h) => h,
        None => {
            let h = minimal_entropy(n, ln_budget);
            u32::try_from(h).map_err(|_| invalid("planned H exceeds u32"))?
        }
    };
    let mn = &BigNat::from(m) * &BigNat::from(n);
    let p_min = &BigNat::pow2(h) + &mn;

    Ok(DesignParams {
        n,
        k,
        delta,
        m,
        h,
        ln_eps_required: ln_budget,
        eps_required: ln_budget.exp(),
        p_min,
        c1,
        log_k_used: log_k,
        log_k_clamped: clamped,
        m_overridden: overrides.m.is_some(),
        h_overridden: overrides.h.is_some(),
        ln_failure_probability: 2f64.ln() - 2.0 * k as f64 * ln_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn override_arithmetic() {
        let p = plan_parameters(
            2,
            1,
            1.0,
            Overrides {
                m: Some(4),
                h: Some(4),
                c1: None,
            },
        )
        .unwrap();
        assert_eq!(p.p_min, BigNat::from(24u64));
        assert!(p.m_overridden && p.h_overridden);
        assert!(p.log_k_clamped);
    }

    // Frozen from a 50-digit mpmath evaluation of the same formulas.
    #[test]
    fn planned_values_n1000_k5() {
        let p = plan_parameters(1000, 5, 0.5, Overrides::default()).unwrap();
        assert_eq!(p.m, 2_061_284_215);
        assert_eq!(p.h, 46_641);
        assert!((p.ln_eps_required - (-10761.046764788)).abs() < 1e-6);
        assert_eq!(p.eps_required, 0.0);
        assert!(chain_fits(1000, p.h as u64, p.ln_eps_required));
        assert!(!chain_fits(1000, p.h as u64 - 1, p.ln_eps_required));
        assert!(!p.log_k_clamped);
    }

    #[test]
    fn other_frozen_plans() {
        for (n, k, delta, m, h) in [
            (2u64, 1u64, 1.0, 3_992_528u64, 614u32),
            (10, 2, 0.3, 294_730_892, 5534),
            (100, 3, 0.9, 118_575_048, 15135),
        ] {
            let p = plan_parameters(n, k, delta, Overrides::default()).unwrap();
            assert_eq!((p.m, p.h), (m, h), "N={n} K={k} delta={delta}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(plan_parameters(1000, 5, 0.0, Overrides::default()).is_err());
        assert!(plan_parameters(1000, 5, 1.5, Overrides::default()).is_err());
        assert!(plan_parameters(4, 8, 0.5, Overrides::default()).is_err());
        assert!(plan_parameters(4, 0, 0.5, Overrides::default()).is_err());
        assert!(plan_parameters(1, 1, 0.5, Overrides::default()).is_err());
    }

    #[test]
    fn monotone_in_k() {
        for n in [10u64, 100, 1000, 100_000] {
            let mut prev = (0u64, 0u32);
            for k in 1..=n.min(40) {
                let p = plan_parameters(n, k, 0.7, Overrides::default()).unwrap();
                assert!(p.m >= prev.0 && p.h >= prev.1, "N={n} K={k}");
                assert!(chain_fits(n, p.h as u64, p.ln_eps_required));
                assert!(p.h == 1 || !chain_fits(n, p.h as u64 - 1, p.ln_eps_required));
                prev = (p.m, p.h);
            }
        }
    }
}
