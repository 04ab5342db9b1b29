use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::plan::DesignParams;
use super::seed::Seed;
use crate::error::{invalid, Error, Result};
use crate::ntheory::{BigNat, PrimeCert};

/// Identifier of the generator behind Bernoulli baselines.
pub const BERNOULLI_GENERATOR: &str = "chacha20";

/// How a sign matrix was produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// Symbols of `X + 1 ..= X + MN` modulo `p`.
    LegendreSeeded { x: BigNat, p: BigNat },
    /// Symbols of `1 ..= MN` modulo `p`.
    LegendreDeterministic { p: BigNat },
    /// Independent fair signs from [`BERNOULLI_GENERATOR`], one stream per column.
    BernoulliIid { seed: u64 },
    /// Signs supplied directly.
    Explicit,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::LegendreSeeded { .. } => "legendre-seeded",
            Provenance::LegendreDeterministic { .. } => "legendre-deterministic",
            Provenance::BernoulliIid { .. } => "bernoulli-iid",
            Provenance::Explicit => "explicit",
        }
    }
}

/// `M x N` matrix of signs with the implicit scale `1/sqrt(M)`.
///
/// Each column is packed into `ceil(M/64)` words, bit set meaning `-1`.
/// Padding bits past row `M` are always zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    rows: usize,
    cols: usize,
    words_per_col: usize,
    bits: Vec<u64>,
    provenance: Provenance,
}

impl SignMatrix {
    /// Builds column by column (in parallel); `column(c, out)` writes the
    /// signs of column `c` into `out`.
    fn from_columns<F>(rows: usize, cols: usize, provenance: Provenance, column: F) -> Result<Self>
    where
        F: Fn(usize, &mut [i8]) -> Result<()> + Sync,
    {
        if rows == 0 || cols == 0 {
            return Err(invalid("matrix needs at least one row and one column"));
        }
        let words_per_col = rows.div_ceil(64);
        let packed: Vec<Vec<u64>> = (0..cols)
            .into_par_iter()
            .map(|c| {
                let mut signs = vec![0i8; rows];
                column(c, &mut signs)?;
                pack_signs(&signs, words_per_col).map_err(|r| {
                    invalid(format!("zero entry at row {}, column {}", r + 1, c + 1))
                })
            })
            .collect::<Result<_>>()?;
        Ok(SignMatrix {
            rows,
            cols,
            words_per_col,
            bits: packed.concat(),
            provenance,
        })
    }

    /// Wraps explicit column-major signs.
    pub fn from_signs(rows: usize, cols: usize, signs: &[i8]) -> Result<Self> {
        Self::from_signs_with(rows, cols, signs, Provenance::Explicit)
    }

    pub(crate) fn from_signs_with(
        rows: usize,
        cols: usize,
        signs: &[i8],
        provenance: Provenance,
    ) -> Result<Self> {
        if signs.len() != rows * cols {
            return Err(invalid(format!(
                "expected {} signs, got {}",
                rows * cols,
                signs.len()
            )));
        }
        if let Some(bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(invalid(format!("entry {bad} is not a sign")));
        }
        Self::from_columns(rows, cols, provenance, |c, out| {
            out.copy_from_slice(&signs[c * rows..(c + 1) * rows]);
            Ok(())
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `1/sqrt(M)`.
    pub fn scale(&self) -> f64 {
        1.0 / (self.rows as f64).sqrt()
    }

    /// Sign at 0-based `(row, col)`.
    pub fn sign(&self, row: usize, col: usize) -> i8 {
        let w = self.bits[col * self.words_per_col + row / 64];
        if (w >> (row % 64)) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub(crate) fn column_words(&self, col: usize) -> &[u64] {
        &self.bits[col * self.words_per_col..(col + 1) * self.words_per_col]
    }

    /// Column-major signs.
    pub fn signs(&self) -> Vec<i8> {
        (0..self.cols)
            .flat_map(|c| (0..self.rows).map(move |r| (r, c)))
            .map(|(r, c)| self.sign(r, c))
            .collect()
    }

    /// Unscaled inner product of two sign columns, `M - 2 * (#disagreements)`.
    pub fn sign_dot(&self, a: usize, b: usize) -> i64 {
        let diff: u32 = self
            .column_words(a)
            .iter()
            .zip(self.column_words(b))
            .map(|(x, y)| (x ^ y).count_ones())
            .sum();
        self.rows as i64 - 2 * diff as i64
    }

    /// Unscaled Gram matrix `S^T S` of the sign columns, row-major `N x N`.
    pub fn sign_gram(&self) -> Vec<i64> {
        let n = self.cols;
        let rows: Vec<Vec<i64>> = (0..n)
            .into_par_iter()
            .map(|a| (0..n).map(|b| self.sign_dot(a, b)).collect())
            .collect();
        rows.concat()
    }

    /// `Phi x` including the `1/sqrt(M)` scale.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![0.0; self.rows];
        for (c, &xc) in x.iter().enumerate() {
            if xc == 0.0 {
                continue;
            }
            for (r, yr) in y.iter_mut().enumerate() {
                *yr += self.sign(r, c) as f64 * xc;
            }
        }
        let s = self.scale();
        y.iter_mut().for_each(|v| *v *= s);
        y
    }

    /// `<phi_col, v>` including the scale.
    pub fn column_inner(&self, col: usize, v: &[f64]) -> f64 {
        let acc: f64 = v
            .iter()
            .enumerate()
            .map(|(r, &vr)| self.sign(r, col) as f64 * vr)
            .sum();
        acc * self.scale()
    }
}

/// Packs signs into words; returns the index of the first zero on failure.
fn pack_signs(signs: &[i8], words: usize) -> std::result::Result<Vec<u64>, usize> {
    let mut out = vec![0u64; words];
    for (r, &s) in signs.iter().enumerate() {
        match s {
            1 => {}
            -1 => out[r / 64] |= 1 << (r % 64),
            _ => return Err(r),
        }
    }
    Ok(out)
}

/// Symbols of `start + 1 ..= start + out.len()` into `out`.
fn fill_symbols(cert: &PrimeCert, start: &BigNat, out: &mut [i8]) {
    match (cert.as_u64(), start.to_u64()) {
        (Some(_), Some(s)) => {
            for (i, o) in out.iter_mut().enumerate() {
                *o = cert.symbol_u64(s + i as u64 + 1);
            }
        }
        _ => {
            for (i, o) in out.iter_mut().enumerate() {
                *o = cert.symbol(&(start + (i as u64 + 1)));
            }
        }
    }
}

/// Seeded construction: entry `(m, n)` (1-based) is the symbol of
/// `X + M(n-1) + m` modulo `p`, filled one column at a time.
///
/// Requires `p >= 2^H + MN` so that every argument lies in `[1, p)`.
pub fn build_legendre_seeded(params: &DesignParams, seed: &Seed, p: &PrimeCert) -> Result<SignMatrix> {
    if seed.h() != params.h {
        return Err(invalid(format!(
            "seed was drawn with H = {} but parameters use H = {}",
            seed.h(),
            params.h
        )));
    }
    if *p.p() < params.p_min {
        return Err(Error::PrimeTooSmall {
            p: p.p().to_string(),
            p_min: params.p_min.to_string(),
        });
    }
    let (m, n) = params.dims()?;
    let x = seed.x().clone();
    let provenance = Provenance::LegendreSeeded {
        x: x.clone(),
        p: p.p().clone(),
    };
    SignMatrix::from_columns(m, n, provenance, |c, out| {
        let start = &x + (c as u64 * m as u64);
        fill_symbols(p, &start, out);
        Ok(())
    })
}

/// Unseeded construction: symbols of `1 ..= MN` modulo `p`, which must
/// exceed `MN`.
pub fn build_legendre_deterministic(m: usize, n: usize, p: &PrimeCert) -> Result<SignMatrix> {
    let mn = m
        .checked_mul(n)
        .ok_or_else(|| invalid("M*N overflows"))?;
    if *p.p() <= BigNat::from(mn) {
        return Err(Error::PrimeTooSmall {
            p: p.p().to_string(),
            p_min: (mn + 1).to_string(),
        });
    }
    let provenance = Provenance::LegendreDeterministic { p: p.p().clone() };
    SignMatrix::from_columns(m, n, provenance, |c, out| {
        fill_symbols(p, &BigNat::from(c as u64 * m as u64), out);
        Ok(())
    })
}

/// Fair independent signs. Column `c` reads stream `c` of a ChaCha20
/// generator keyed by `rng_seed`, so columns can be produced in any order.
pub fn build_bernoulli_baseline(m: usize, n: usize, rng_seed: u64) -> Result<SignMatrix> {
    SignMatrix::from_columns(m, n, Provenance::BernoulliIid { seed: rng_seed }, |c, out| {
        let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
        rng.set_stream(c as u64);
        let mut word = 0u64;
        for (r, o) in out.iter_mut().enumerate() {
            if r % 64 == 0 {
                word = rng.next_u64();
            }
            *o = if (word >> (r % 64)) & 1 == 1 { -1 } else { 1 };
        }
        Ok(())
    })
}
