use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::omp::{omp_recover, SparseSignal};
use crate::construct::{
    build_bernoulli_baseline, build_legendre_deterministic, build_legendre_seeded, DesignParams, Seed, SignMatrix,
};
use crate::error::{invalid, Result};
use crate::ntheory::{next_prime_geq, BigNat, PrimeCert};

/// Largest max-norm error still counted as exact recovery.
pub const VALUE_TOLERANCE: f64 = 1e-8;

/// Residual norm at which pursuit stops on noiseless measurements.
pub const SWEEP_NOISE_TOL: f64 = 1e-10;

pub const SWEEP_HEADER: &str = "ensemble,m,n,k,trials,successes,success_rate,note";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ensemble {
    /// One fixed matrix from the symbols of `1..=MN` modulo `p`.
    LegendreDeterministic { p: BigNat },
    /// A fresh seed `X < 2^h` per trial, `p = next_prime_geq(2^h + MN)`.
    LegendreSeeded { h: u32 },
    /// A fresh Bernoulli matrix per trial.
    Bernoulli,
}

impl Ensemble {
    pub fn name(&self) -> &'static str {
        match self {
            Ensemble::LegendreDeterministic { .. } => "legendre-deterministic",
            Ensemble::LegendreSeeded { .. } => "legendre-seeded",
            Ensemble::Bernoulli => "bernoulli",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub ensemble: &'static str,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub trials: u64,
    pub successes: Option<u64>,
    pub success_rate: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub rng_seed: u64,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Comma-separated rows under [`SWEEP_HEADER`].
    pub fn to_csv(&self) -> String {
        let mut out = format!("{SWEEP_HEADER}\n");
        for r in &self.rows {
            let opt = |v: Option<String>| v.unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.ensemble,
                r.m,
                r.n,
                r.k,
                r.trials,
                opt(r.successes.map(|v| v.to_string())),
                opt(r.success_rate.map(|v| v.to_string())),
                opt(r.note.clone())
            );
        }
        out
    }
}

enum Source {
    Fixed(SignMatrix),
    Seeded { params: DesignParams, cert: PrimeCert },
    Bernoulli,
}

impl Source {
    fn matrix(&self, m: usize, n: usize, rng: &mut ChaCha20Rng) -> Result<SignMatrix> {
        match self {
            Source::Fixed(mat) => Ok(mat.clone()),
            Source::Seeded { params, cert } => {
                let seed = Seed::generate(params.h, rng.next_u64())?;
                build_legendre_seeded(params, &seed, cert)
            }
            Source::Bernoulli => build_bernoulli_baseline(m, n, rng.next_u64()),
        }
    }
}

fn trial(source: &Source, m: usize, n: usize, k: usize, rng_seed: u64, index: u64) -> Result<bool> {
    let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
    rng.set_stream(index);
    let mat = source.matrix(m, n, &mut rng)?;
    let support = sample(&mut rng, n, k).into_vec();
    let pairs: Vec<(usize, f64)> = support
        .into_iter()
        .map(|i| (i, if rng.next_u32() & 1 == 0 { 1.0 } else { -1.0 }))
        .collect();
    let truth = SparseSignal::from_pairs(n, pairs)?;
    let y = mat.apply(&truth.dense());
    let Ok(found) = omp_recover(&mat, &y, k, SWEEP_NOISE_TOL) else {
        return Ok(false);
    };
    let exact = found.signal.support == truth.support
        && found
            .signal
            .values
            .iter()
            .zip(&truth.values)
            .all(|(a, b)| (a - b).abs() <= VALUE_TOLERANCE);
    Ok(exact)
}

/// Fraction of exact OMP recoveries of random `K`-sparse `+-1` signals.
///
/// Trial `t` at sparsity `K` reads stream `(K << 32) | t` of a ChaCha20
/// generator keyed by `rng_seed`, so the table does not depend on scheduling.
pub fn phase_sweep(
    ensemble: &Ensemble,
    m: usize,
    n: usize,
    ks: &[usize],
    trials: u64,
    rng_seed: u64,
) -> Result<SweepTable> {
    if m == 0 || n == 0 {
        return Err(invalid("M and N must be positive"));
    }
    if trials == 0 || trials > u32::MAX as u64 {
        return Err(invalid("trials must lie in 1..=2^32-1"));
    }
    let mn = (m as u64).checked_mul(n as u64).ok_or_else(|| invalid("M*N overflows"))?;
    let source = match ensemble {
        Ensemble::LegendreDeterministic { p } => {
            Source::Fixed(build_legendre_deterministic(m, n, &PrimeCert::certify(p)?)?)
        }
        Ensemble::LegendreSeeded { h } => {
            let params = DesignParams::explicit(m as u64, n as u64, *h)?;
            let cert = next_prime_geq(&(&BigNat::pow2(*h) + mn))?;
            Source::Seeded { params, cert }
        }
        Ensemble::Bernoulli => Source::Bernoulli,
    };
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        let base = SweepRow {
            ensemble: ensemble.name(),
            m,
            n,
            k,
            trials,
            successes: None,
            success_rate: None,
            note: None,
        };
        if k > m || k > n {
            rows.push(SweepRow {
                note: Some(format!("skipped: K exceeds {}", if k > m { "M" } else { "N" })),
                ..base
            });
            continue;
        }
        let successes = (0..trials)
            .into_par_iter()
            .map(|t| trial(&source, m, n, k, rng_seed, (k as u64) << 32 | t).map(u64::from))
            .collect::<Result<Vec<u64>>>()?
            .into_iter()
            .sum::<u64>();
        rows.push(SweepRow {
            successes: Some(successes),
            success_rate: Some(successes as f64 / trials as f64),
            ..base
        });
    }
    Ok(SweepTable { rng_seed, rows })
}
