//! Seeded Legendre-symbol sensing matrices and exact small-scale verifiers.
//!
//! The matrix entry in row `m`, column `n` (both 1-based) is the Legendre
//! symbol of `X + M(n-1) + m` modulo a prime `p >= 2^H + MN`, scaled by
//! `1/sqrt(M)`. Around that construction the crate provides:
//!
//! - [`ntheory`]: symbols, primality certification, prime search.
//! - [`construct`]: parameter planning, seeded/deterministic/Bernoulli
//!   matrices and the `RIPM v1` file format.
//! - [`verify`]: exhaustive and sampled RIP constants, flat restricted
//!   orthogonality, coherence against the Welch floor, character sums,
//!   exact bias of the seeded symbol stream and the matching-count identity.
//! - [`codes`]: small-bias sets and balanced binary linear codes.
//! - [`recovery`]: orthogonal matching pursuit and recovery sweeps.
//!
//! All logarithms are natural unless a function says otherwise.

pub mod cli;
pub mod codes;
pub mod construct;
pub mod error;
pub mod ntheory;
pub mod recovery;
pub mod report;
pub mod verify;

pub use error::{Error, Result};

/// Logarithm convention recorded in every report.
pub const LOG_CONVENTION: &str = "natural";

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
