use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntheory::BigNat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedSource {
    ExternalHex,
    Generated { rng_seed: u64 },
}

/// The offset `X`, drawn from `{0, ..., 2^H - 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Seed {
    x: BigNat,
    h: u32,
    source: SeedSource,
}

impl Seed {
    pub fn new(x: BigNat, h: u32) -> Result<Self> {
        Self::with_source(x, h, SeedSource::ExternalHex)
    }

    pub fn from_hex(hex: &str, h: u32) -> Result<Self> {
        Self::new(BigNat::from_hex(hex)?, h)
    }

    /// Draws `H` uniform bits from a ChaCha20 stream keyed by `rng_seed`.
    pub fn generate(h: u32, rng_seed: u64) -> Result<Self> {
        let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
        let words = (h as usize).div_ceil(32);
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        let spare = words * 32 - h as usize;
        if let Some(top) = digits.last_mut() {
            *top &= u32::MAX >> spare;
        }
        let x = BigNat::from_biguint(BigUint::from_slice(&digits));
        Self::with_source(x, h, SeedSource::Generated { rng_seed })
    }

    fn with_source(x: BigNat, h: u32, source: SeedSource) -> Result<Self> {
        if h == 0 {
            return Err(Error::InvalidArgument("H must be at least 1".into()));
        }
        if x >= BigNat::pow2(h) {
            return Err(Error::SeedOutOfRange {
                x: x.to_hex(),
                h,
            });
        }
        Ok(Seed { x, h, source })
    }

    pub fn x(&self) -> &BigNat {
        &self.x
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn source(&self) -> SeedSource {
        self.source
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_enforced() {
        assert!(Seed::new(BigNat::from(15u64), 4).is_ok());
        assert!(matches!(
            Seed::new(BigNat::from(16u64), 4),
            Err(Error::SeedOutOfRange { .. })
        ));
        assert!(Seed::from_hex("f", 4).is_ok());
        assert!(Seed::new(BigNat::zero(), 0).is_err());
    }

    #[test]
    fn generated_seeds_fit_and_repeat() {
        for h in [1u32, 7, 31, 32, 33, 64, 100, 1000] {
            for s in 0..20u64 {
                let a = Seed::generate(h, s).unwrap();
                assert!(a.x().bits() <= h as u64);
                assert_eq!(a, Seed::generate(h, s).unwrap());
            }
        }
        let draws: std::collections::BTreeSet<_> =
            (0..64).map(|s| Seed::generate(40, s).unwrap().x().clone()).collect();
        assert!(draws.len() > 60);
    }
}
