//! Modular arithmetic over arbitrary-precision naturals: Legendre and Jacobi
//! symbols, Miller-Rabin certification and ascending prime search.

mod bignat;
mod prime;
mod symbol;

pub use bignat::BigNat;
pub use prime::{
    is_prime, is_prime_u64, next_prime_geq, CertMethod, PrimeCert, Primality,
    PROBABILISTIC_ROUNDS,
};
pub use symbol::{jacobi_symbol, legendre_symbol};

pub(crate) use bignat::mul_mod_u64;
