use serde::Serialize;

use super::symtab::SymbolBits;
use crate::ntheory::{BigNat, PrimeCert};
use crate::error::{invalid, Result};

/// Constant in front of `k sqrt(p) ln p`.
pub const CHARSUM_CONSTANT: f64 = 9.0;

/// Below this prime a violated bound is informational only.
pub const CHARSUM_SOFT_BELOW: u64 = 10_000;

/// Symbol ranges longer than this are refused.
pub const CHARSUM_RANGE_BUDGET: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharSumCheck {
    pub p: u64,
    pub k: usize,
    pub offsets: Vec<u64>,
    pub t: u64,
    pub sum_value: i64,
    /// `9 k sqrt(p) ln p`.
    pub bound_value: f64,
    pub pass: bool,
    /// `p < 10^4`: a failure here does not count against the bound.
    pub soft: bool,
}

/// Exact `sum_{n < t} prod_j ((n + d_j) | p)` against `9 k sqrt(p) ln p`.
pub fn charsum_check(p: u64, offsets: &[u64], t: u64) -> Result<CharSumCheck> {
    let cert = PrimeCert::certify(&BigNat::from(p))?;
    let (&first, &last) = match (offsets.first(), offsets.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(invalid("at least one offset is required")),
    };
    if first == 0 || offsets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("offsets must satisfy 0 < d_1 < ... < d_k"));
    }
    if last >= p {
        return Err(invalid(format!("largest offset {last} must be below p = {p}")));
    }
    if t == 0 || t > p - last {
        return Err(invalid(format!("t must satisfy 1 <= t <= p - d_k = {}", p - last)));
    }
    let span = last - first + t;
    if span > CHARSUM_RANGE_BUDGET {
        return Err(invalid(format!(
            "symbol range of length {span} exceeds the budget {CHARSUM_RANGE_BUDGET}"
        )));
    }
    let bits = SymbolBits::new(&cert, first, span as usize);
    let shifts: Vec<usize> = offsets.iter().map(|&d| (d - first) as usize).collect();
    let sum_value = bits.product_sum(&shifts, t as usize);
    let k = offsets.len();
    let pf = p as f64;
    let bound_value = CHARSUM_CONSTANT * k as f64 * pf.sqrt() * pf.ln();
    Ok(CharSumCheck {
        p,
        k,
        offsets: offsets.to_vec(),
        t,
        sum_value,
        bound_value,
        pass: (sum_value.unsigned_abs() as f64) <= bound_value,
        soft: p < CHARSUM_SOFT_BELOW,
    })
}
