use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// Arbitrary-precision nonnegative integer.
///
/// The backing `BigUint` is always normalized, so derived equality and
/// ordering compare magnitudes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigNat(BigUint);

impl BigNat {
    pub fn zero() -> Self {
        BigNat(BigUint::zero())
    }

    pub fn one() -> Self {
        BigNat(BigUint::one())
    }

    /// `2^bits`.
    pub fn pow2(bits: u32) -> Self {
        BigNat(BigUint::one() << bits as usize)
    }

    pub fn from_biguint(v: BigUint) -> Self {
        BigNat(v)
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_odd(&self) -> bool {
        self.0.is_odd()
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    /// Lowercase hex without prefix; zero encodes as `"0"`.
    pub fn to_hex(&self) -> String {
        self.0.to_str_radix(16)
    }

    /// Parses lowercase hex. Leading zeros are rejected so that the textual
    /// form is canonical.
    pub fn from_hex(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(invalid("empty hex string"));
        }
        if !s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)) {
            return Err(invalid(format!("'{s}' is not lowercase hex")));
        }
        if s.len() > 1 && s.starts_with('0') {
            return Err(invalid(format!("'{s}' has leading zeros")));
        }
        BigUint::parse_bytes(s.as_bytes(), 16)
            .map(BigNat)
            .ok_or_else(|| invalid(format!("'{s}' is not hex")))
    }

    pub fn rem_u64(&self, m: u64) -> u64 {
        (&self.0 % m).to_u64().expect("remainder fits u64")
    }

    pub fn modulo(&self, m: &BigNat) -> BigNat {
        BigNat(&self.0 % &m.0)
    }

    /// `self^exp mod modulus` by left-to-right square-and-multiply, reducing
    /// after every squaring and every multiplication.
    pub fn mod_pow(&self, exp: &BigNat, modulus: &BigNat) -> BigNat {
        assert!(!modulus.is_zero(), "zero modulus");
        let m = &modulus.0;
        if m.is_one() {
            return BigNat::zero();
        }
        let base = &self.0 % m;
        let mut acc = BigUint::one();
        for i in (0..exp.0.bits()).rev() {
            acc = (&acc * &acc) % m;
            if exp.0.bit(i) {
                acc = (&acc * &base) % m;
            }
        }
        BigNat(acc)
    }

    pub fn half(&self) -> BigNat {
        BigNat(&self.0 >> 1usize)
    }
}

impl From<u64> for BigNat {
    fn from(v: u64) -> Self {
        BigNat(BigUint::from(v))
    }
}

impl From<u32> for BigNat {
    fn from(v: u32) -> Self {
        BigNat(BigUint::from(v))
    }
}

impl From<usize> for BigNat {
    fn from(v: usize) -> Self {
        BigNat(BigUint::from(v))
    }
}

impl FromStr for BigNat {
    type Err = Error;

    /// Decimal digits only.
    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid(format!("'{s}' is not a decimal integer")));
        }
        BigUint::parse_bytes(s.as_bytes(), 10)
            .map(BigNat)
            .ok_or_else(|| invalid(format!("'{s}' is not a decimal integer")))
    }
}

impl fmt::Display for BigNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for BigNat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_str_radix(10))
    }
}

impl<'a> Add<&'a BigNat> for &'a BigNat {
    type Output = BigNat;
    fn add(self, rhs: &BigNat) -> BigNat {
        BigNat(&self.0 + &rhs.0)
    }
}

impl Add<u64> for &BigNat {
    type Output = BigNat;
    fn add(self, rhs: u64) -> BigNat {
        BigNat(&self.0 + rhs)
    }
}

impl<'a> Mul<&'a BigNat> for &'a BigNat {
    type Output = BigNat;
    fn mul(self, rhs: &BigNat) -> BigNat {
        BigNat(&self.0 * &rhs.0)
    }
}

/// Panics on underflow.
impl<'a> Sub<&'a BigNat> for &'a BigNat {
    type Output = BigNat;
    fn sub(self, rhs: &BigNat) -> BigNat {
        BigNat(&self.0 - &rhs.0)
    }
}

/// `a * b mod m` for `m < 2^64`.
#[inline]
pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Square-and-multiply over `u64`, reducing at every step.
pub(crate) fn mod_pow_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_is_canonical() {
        assert_eq!(BigNat::from(255u64).to_hex(), "ff");
        assert_eq!(BigNat::zero().to_hex(), "0");
        assert_eq!(BigNat::from_hex("ff").unwrap(), BigNat::from(255u64));
        assert!(BigNat::from_hex("0ff").is_err());
        assert!(BigNat::from_hex("FF").is_err());
        assert!(BigNat::from_hex("").is_err());
        assert_eq!(BigNat::from_hex("0").unwrap(), BigNat::zero());
    }

    #[test]
    fn mod_pow_matches_builtin() {
        let b = BigNat::from(123456789u64);
        let e = BigNat::from(1000003u64);
        let m = BigNat::from(998244353u64);
        let expected = b.as_biguint().modpow(e.as_biguint(), m.as_biguint());
        assert_eq!(b.mod_pow(&e, &m).into_biguint(), expected);
        assert_eq!(
            mod_pow_u64(123456789, 1000003, 998244353),
            expected.to_u64().unwrap()
        );
    }

    #[test]
    fn pow2_and_arith() {
        let p = &BigNat::pow2(4) + 8;
        assert_eq!(p, BigNat::from(24u64));
        assert_eq!(BigNat::pow2(100).bits(), 101);
    }
}
