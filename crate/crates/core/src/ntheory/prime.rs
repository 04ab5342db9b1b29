use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use super::bignat::{mod_pow_u64, mul_mod_u64, BigNat};
use super::symbol::{euler_big, euler_u64, jacobi_big, jacobi_u64};
use crate::error::{Error, Result};

/// Witness set that makes Miller-Rabin deterministic for every `n < 2^64`.
const DETERMINISTIC_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Rounds used above 2^64. Error probability is below 4^-64.
pub const PROBABILISTIC_ROUNDS: u32 = 64;

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertMethod {
    DeterministicSmall,
    MillerRabin,
}

impl CertMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CertMethod::DeterministicSmall => "deterministic-small",
            CertMethod::MillerRabin => "miller-rabin",
        }
    }
}

/// Outcome of a primality test together with how it was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Primality {
    pub is_prime: bool,
    pub method: CertMethod,
    pub rounds: u32,
}

/// An odd prime `p >= 3` together with how its primality was established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeCert {
    p: BigNat,
    method: CertMethod,
    rounds: u32,
    #[serde(skip)]
    small: Option<u64>,
}

impl PrimeCert {
    /// Certifies `p`, rejecting 2, even numbers and composites.
    pub fn certify(p: &BigNat) -> Result<Self> {
        if !p.is_odd() || *p < BigNat::from(3u64) {
            return Err(Error::NotOddPrime(p.to_string()));
        }
        let verdict = is_prime(p);
        if !verdict.is_prime {
            return Err(Error::NotOddPrime(p.to_string()));
        }
        Ok(PrimeCert {
            p: p.clone(),
            method: verdict.method,
            rounds: verdict.rounds,
            small: p.to_u64(),
        })
    }

    pub fn p(&self) -> &BigNat {
        &self.p
    }

    pub fn method(&self) -> CertMethod {
        self.method
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    /// `Some(p)` when `p < 2^64`.
    pub fn as_u64(&self) -> Option<u64> {
        self.small
    }

    /// Legendre symbol through the Jacobi reciprocity algorithm, which
    /// agrees with the Legendre symbol because `p` is certified prime.
    pub fn symbol(&self, a: &BigNat) -> i8 {
        match (self.small, a.to_u64()) {
            (Some(p), Some(a)) => jacobi_u64(a, p),
            _ => jacobi_big(a.as_biguint(), self.p.as_biguint()),
        }
    }

    /// As [`symbol`](Self::symbol) for a machine-word argument.
    pub fn symbol_u64(&self, a: u64) -> i8 {
        match self.small {
            Some(p) => jacobi_u64(a, p),
            None => jacobi_big(&BigUint::from(a), self.p.as_biguint()),
        }
    }

    /// Legendre symbol through Euler's criterion.
    pub fn euler(&self, a: &BigNat) -> i8 {
        match (self.small, a.to_u64()) {
            (Some(p), Some(a)) => euler_u64(a, p),
            _ => euler_big(a, &self.p),
        }
    }
}

fn miller_rabin_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = mod_pow_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn miller_rabin_big(n: &BigNat, a: &BigNat) -> bool {
    let one = BigNat::one();
    let n_minus_1 = n - &one;
    let nm1 = n_minus_1.as_biguint();
    let s = nm1.trailing_zeros().expect("n > 1");
    let d = BigNat::from_biguint(nm1 >> s as usize);
    let mut x = a.mod_pow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x).modulo(n);
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Uniform-ish base in `[2, n - 2]` drawn from a generator keyed by `n`, so
/// verdicts are reproducible.
fn random_base(rng: &mut ChaCha20Rng, n: &BigNat) -> BigNat {
    let bits = n.bits() as usize;
    let words = bits.div_ceil(32);
    let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
    let spare = words * 32 - bits;
    if let Some(top) = digits.last_mut() {
        *top >>= spare;
    }
    let span = n - &BigNat::from(3u64);
    let r = BigNat::from_biguint(BigUint::from_slice(&digits)).modulo(&span);
    &r + 2
}

/// Primality test.
///
/// Deterministic below 2^64 (trial division plus Miller-Rabin on a fixed
/// witness set). Above that, Miller-Rabin with [`PROBABILISTIC_ROUNDS`]
/// bases drawn from a ChaCha20 stream seeded by the low bits of `n`.
pub fn is_prime(n: &BigNat) -> Primality {
    let det = |is_prime| Primality {
        is_prime,
        method: CertMethod::DeterministicSmall,
        rounds: 0,
    };
    if let Some(v) = n.to_u64() {
        if v < 2 {
            return det(false);
        }
        for &sp in &SMALL_PRIMES {
            if v == sp {
                return det(true);
            }
            if v % sp == 0 {
                return det(false);
            }
        }
        if v < 97 * 97 {
            return det(true);
        }
        return det(DETERMINISTIC_WITNESSES
            .iter()
            .all(|&a| miller_rabin_u64(v, a)));
    }
    let mr = |is_prime| Primality {
        is_prime,
        method: CertMethod::MillerRabin,
        rounds: PROBABILISTIC_ROUNDS,
    };
    if SMALL_PRIMES.iter().any(|&sp| n.rem_u64(sp) == 0) {
        return mr(false);
    }
    let low = n
        .as_biguint()
        .iter_u64_digits()
        .next()
        .expect("n is nonzero");
    let mut rng = ChaCha20Rng::seed_from_u64(low ^ n.bits());
    let mut bases = vec![BigNat::from(2u64)];
    while bases.len() < PROBABILISTIC_ROUNDS as usize {
        bases.push(random_base(&mut rng, n));
    }
    mr(bases.iter().all(|a| miller_rabin_big(n, a)))
}

/// Smallest odd prime `p >= lower`, searched in ascending order.
///
/// Bertrand's postulate bounds the result by `2 * lower`. Since certified
/// primes are odd, `lower = 2` yields 3.
pub fn next_prime_geq(lower: &BigNat) -> Result<PrimeCert> {
    if *lower < BigNat::from(2u64) {
        return Err(Error::InvalidArgument(format!(
            "prime search needs lower >= 2, got {lower}"
        )));
    }
    let mut candidate = if lower.is_odd() {
        lower.clone()
    } else {
        lower + 1
    };
    if candidate < BigNat::from(3u64) {
        candidate = BigNat::from(3u64);
    }
    loop {
        if is_prime(&candidate).is_prime {
            return PrimeCert::certify(&candidate);
        }
        candidate = &candidate + 2;
    }
}

/// Convenience for tests and tables: `p < 2^64` as a u64 prime check.
pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigNat::from(n)).is_prime
}
