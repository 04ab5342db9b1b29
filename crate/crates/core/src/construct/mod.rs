//! Parameter planning and matrix construction.

mod format;
mod matrix;
mod plan;
mod seed;

pub use format::{read_ripm, write_ripm};
pub use matrix::{
    build_bernoulli_baseline, build_legendre_deterministic, build_legendre_seeded, Provenance,
    SignMatrix, BERNOULLI_GENERATOR,
};
pub use plan::{
    chain_fits, clamped_log, ln_bias_budget, minimal_entropy, plan_parameters, DesignParams,
    Overrides, DEFAULT_C1, FRO_TO_RIP,
};
pub use seed::{Seed, SeedSource};
