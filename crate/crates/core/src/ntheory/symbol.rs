use std::mem::swap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::bignat::{mod_pow_u64, BigNat};
use super::prime::PrimeCert;
use crate::error::{invalid, Result};

/// Jacobi symbol `(a/n)` for odd `n >= 1`, binary reciprocity algorithm.
pub(crate) fn jacobi_u64(a: u64, n: u64) -> i8 {
    debug_assert!(n & 1 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz & 1 == 1 && matches!(n & 7, 3 | 5) {
            t = -t;
        }
        if a & 3 == 3 && n & 3 == 3 {
            t = -t;
        }
        swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

pub(crate) fn jacobi_big(a: &BigUint, n: &BigUint) -> i8 {
    debug_assert!(n.is_odd());
    if let (Some(a), Some(n)) = (a.to_u64(), n.to_u64()) {
        return jacobi_u64(a, n);
    }
    let mut a = a % n;
    let mut n = n.clone();
    let mut t = 1i8;
    while !a.is_zero() {
        let tz = a.trailing_zeros().expect("nonzero");
        a >>= tz as usize;
        let n_low = n.iter_u32_digits().next().unwrap_or(0);
        if tz & 1 == 1 && matches!(n_low & 7, 3 | 5) {
            t = -t;
        }
        let a_low = a.iter_u32_digits().next().unwrap_or(0);
        if a_low & 3 == 3 && n_low & 3 == 3 {
            t = -t;
        }
        swap(&mut a, &mut n);
        a %= &n;
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Euler's criterion `a^((p-1)/2) mod p`, mapped to {-1, 0, +1}.
/// `p` must be an odd prime; not checked here.
pub(crate) fn euler_u64(a: u64, p: u64) -> i8 {
    match mod_pow_u64(a, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        r if r == p - 1 => -1,
        r => panic!("Euler criterion gave {r} mod {p}; modulus is not prime"),
    }
}

pub(crate) fn euler_big(a: &BigNat, p: &BigNat) -> i8 {
    if let (Some(a), Some(p)) = (a.to_u64(), p.to_u64()) {
        return euler_u64(a, p);
    }
    let exp = (p - &BigNat::one()).half();
    let r = a.mod_pow(&exp, p);
    if r.is_zero() {
        0
    } else if r == BigNat::one() {
        1
    } else if &r + 1 == *p {
        -1
    } else {
        panic!("Euler criterion gave a non-unit residue; modulus is not prime")
    }
}

/// Legendre symbol `(a/p)` via Euler's criterion.
///
/// `p` is certified first, so even or composite moduli are rejected.
/// Callers evaluating many symbols against one prime should certify once
/// and use [`PrimeCert::symbol`].
pub fn legendre_symbol(a: &BigNat, p: &BigNat) -> Result<i8> {
    let cert = PrimeCert::certify(p)?;
    Ok(cert.euler(a))
}

/// Jacobi symbol `(a/n)` for odd `n >= 3`.
pub fn jacobi_symbol(a: &BigNat, n: &BigNat) -> Result<i8> {
    if !n.is_odd() || *n < BigNat::from(3u64) {
        return Err(invalid(format!(
            "Jacobi symbol needs an odd denominator >= 3, got {n}"
        )));
    }
    Ok(jacobi_big(a.as_biguint(), n.as_biguint()))
}
