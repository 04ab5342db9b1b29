use num_rational::Ratio;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Serialize, Serializer};

use super::symtab::SymbolBits;
use crate::error::{invalid, Error, Result};
use crate::ntheory::{BigNat, PrimeCert};

/// Default cap on `H` for exhaustive seed enumeration.
pub const DEFAULT_BIAS_MAX_H: u32 = 24;

/// Longest symbol range an exact bias computation will tabulate.
const BIAS_RANGE_BUDGET: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasReport {
    pub p: BigNat,
    pub h: u32,
    /// Sorted, 1-based offsets.
    pub index_set: Vec<u64>,
    /// `(1/2^H) sum_x prod_{i in I} ((x + i) | p)`, signed.
    #[serde(serialize_with = "ratio_string")]
    pub exact_bias: Option<Ratio<i64>>,
    pub sampled_bias: Option<f64>,
    pub standard_error: Option<f64>,
    pub n_samples: Option<u64>,
    pub rng_seed: Option<u64>,
    /// `|I| sqrt(p) ln p / 2^H`.
    pub charsum_bound: f64,
    /// `4 N^2 2^(-H/3)`, present when the column count is known.
    pub chain_bound: Option<f64>,
    /// Exact mode only.
    pub charsum_holds: Option<bool>,
    /// Exact mode with known column count only.
    pub chain_holds: Option<bool>,
}

impl BiasReport {
    /// `|bias|` from whichever mode produced the report.
    pub fn magnitude(&self) -> f64 {
        match (&self.exact_bias, self.sampled_bias) {
            (Some(r), _) => (*r.numer() as f64 / *r.denom() as f64).abs(),
            (None, Some(s)) => s.abs(),
            (None, None) => f64::NAN,
        }
    }
}

fn ratio_string<S: Serializer>(r: &Option<Ratio<i64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
        None => s.serialize_none(),
    }
}

/// Natural log of an arbitrary-precision value from its top 64 bits.
fn ln_big(v: &BigNat) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return (v.to_u64().expect("fits") as f64).ln();
    }
    let shift = bits - 64;
    let top = BigNat::from_biguint(v.as_biguint() >> shift).to_u64().expect("64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

fn sorted_index_set(cert: &PrimeCert, h: u32, index_set: &[u64]) -> Result<Vec<u64>> {
    if index_set.is_empty() {
        return Err(invalid("bias is defined for nonempty index sets"));
    }
    let mut set = index_set.to_vec();
    set.sort_unstable();
    if set[0] == 0 || set.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("index set entries must be distinct and at least 1"));
    }
    let top = &BigNat::pow2(h) + (*set.last().expect("nonempty") - 1);
    if top >= *cert.p() {
        return Err(invalid(format!(
            "max(I) + 2^H - 1 = {top} reaches p = {}; a zero symbol is possible",
            cert.p()
        )));
    }
    Ok(set)
}

fn bounds(cert: &PrimeCert, h: u32, set_len: usize, n_cols: Option<u64>) -> (f64, Option<f64>) {
    let ln_p = ln_big(cert.p());
    let ln_2h = h as f64 * std::f64::consts::LN_2;
    let charsum = ((set_len as f64).ln() + 0.5 * ln_p + ln_p.ln() - ln_2h).exp();
    let chain = n_cols.map(|n| 4.0 * (n as f64).powi(2) * (-ln_2h / 3.0).exp());
    (charsum, chain)
}

/// Exact bias of the symbol stream over every seed `x < 2^H`.
pub fn bias_exact(
    cert: &PrimeCert,
    h: u32,
    index_set: &[u64],
    n_cols: Option<u64>,
    max_h: u32,
) -> Result<BiasReport> {
    if h > max_h {
        return Err(Error::BudgetExceeded {
            needed: 1u128 << h.min(127),
            budget: 1u128 << max_h.min(127),
            hint: "use sampled bias",
        });
    }
    let set = sorted_index_set(cert, h, index_set)?;
    let (lo, hi) = (set[0], *set.last().expect("nonempty"));
    let seeds = 1u64 << h;
    let span = hi - lo + seeds;
    if span > BIAS_RANGE_BUDGET {
        return Err(invalid(format!("symbol range of length {span} exceeds the budget")));
    }
    let bits = SymbolBits::new(cert, lo, span as usize);
    let shifts: Vec<usize> = set.iter().map(|&i| (i - lo) as usize).collect();
    let sum = bits.product_sum(&shifts, seeds as usize);
    let exact = Ratio::new(sum, seeds as i64);

    let (charsum_bound, chain_bound) = bounds(cert, h, set.len(), n_cols);
    let ln_2h = h as f64 * std::f64::consts::LN_2;
    let ln_abs_sum = (sum.unsigned_abs() as f64).ln();
    Ok(BiasReport {
        p: cert.p().clone(),
        h,
        index_set: set,
        exact_bias: Some(exact),
        sampled_bias: None,
        standard_error: None,
        n_samples: None,
        rng_seed: None,
        charsum_bound,
        chain_bound,
        // Compared in log space: |sum| against |I| sqrt(p) ln p.
        charsum_holds: Some(ln_abs_sum <= charsum_bound.ln() + ln_2h),
        chain_holds: chain_bound.map(|c| ln_abs_sum <= c.ln() + ln_2h),
    })
}

/// Monte Carlo estimate over `n_samples` uniform seeds drawn sequentially
/// from a ChaCha20 generator keyed by `rng_seed`.
pub fn bias_sampled(
    cert: &PrimeCert,
    h: u32,
    index_set: &[u64],
    n_samples: u64,
    rng_seed: u64,
    n_cols: Option<u64>,
) -> Result<BiasReport> {
    if n_samples == 0 {
        return Err(invalid("at least one sample is required"));
    }
    let set = sorted_index_set(cert, h, index_set)?;
    let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
    let digits = (h as usize).div_ceil(32);
    let spare = digits as u32 * 32 - h;
    let mut total: i64 = 0;
    let mut buf = vec![0u32; digits];
    for _ in 0..n_samples {
        for d in buf.iter_mut() {
            *d = rng.next_u32();
        }
        if let Some(last) = buf.last_mut() {
            *last = if spare == 32 { 0 } else { *last & (u32::MAX >> spare) };
        }
        let x = BigNat::from_biguint(num_bigint::BigUint::new(buf.clone()));
        let prod: i64 = set.iter().map(|&i| cert.symbol(&(&x + i)) as i64).product();
        total += prod;
    }
    let n = n_samples as f64;
    let mean = total as f64 / n;
    let standard_error = (n_samples > 1).then(|| ((1.0 - mean * mean).max(0.0) / (n - 1.0)).sqrt());
    let (charsum_bound, chain_bound) = bounds(cert, h, set.len(), n_cols);
    Ok(BiasReport {
        p: cert.p().clone(),
        h,
        index_set: set,
        exact_bias: None,
        sampled_bias: Some(mean),
        standard_error,
        n_samples: Some(n_samples),
        rng_seed: Some(rng_seed),
        charsum_bound,
        chain_bound,
        charsum_holds: None,
        chain_holds: None,
    })
}
