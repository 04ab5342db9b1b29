//! Packed Legendre symbols over a contiguous range, for sums of products
//! of shifted symbols.

use rayon::prelude::*;

use crate::ntheory::{mul_mod_u64, PrimeCert};

/// Primes up to this size get a full quadratic-residue table.
const SQUARE_TABLE_LIMIT: u64 = 1 << 26;

/// Bit `j` is set iff `(lo + j | p) = -1`. No argument may be divisible by `p`.
pub(crate) struct SymbolBits {
    words: Vec<u64>,
    len: usize,
}

impl SymbolBits {
    pub(crate) fn new(cert: &PrimeCert, lo: u64, len: usize) -> Self {
        let n_words = len.div_ceil(64);
        let words = match cert.as_u64() {
            Some(p) if p <= SQUARE_TABLE_LIMIT => {
                let squares = square_table(p);
                (0..n_words)
                    .into_par_iter()
                    .map(|w| {
                        let mut word = 0u64;
                        for b in 0..64.min(len - w * 64) {
                            let a = ((lo + (w * 64 + b) as u64) % p) as usize;
                            if squares[a / 64] >> (a % 64) & 1 == 0 {
                                word |= 1 << b;
                            }
                        }
                        word
                    })
                    .collect()
            }
            _ => (0..n_words)
                .into_par_iter()
                .map(|w| {
                    let mut word = 0u64;
                    for b in 0..64.min(len - w * 64) {
                        if cert.symbol_u64(lo + (w * 64 + b) as u64) < 0 {
                            word |= 1 << b;
                        }
                    }
                    word
                })
                .collect(),
        };
        SymbolBits { words, len }
    }

    /// Bits `offset + 64 w .. offset + 64 w + 64`, zero past the end.
    fn window(&self, offset: usize, w: usize) -> u64 {
        let start = offset + 64 * w;
        let (i, s) = (start / 64, start % 64);
        let lo = self.words.get(i).copied().unwrap_or(0) >> s;
        if s == 0 {
            lo
        } else {
            lo | self.words.get(i + 1).copied().unwrap_or(0) << (64 - s)
        }
    }

    /// `sum_{x < t} prod_j sym(lo + x + shifts[j])`; needs
    /// `max(shifts) + t <= len`.
    pub(crate) fn product_sum(&self, shifts: &[usize], t: usize) -> i64 {
        assert!(shifts.iter().all(|&s| s + t <= self.len));
        let n_words = t.div_ceil(64);
        let negatives: u64 = (0..n_words)
            .into_par_iter()
            .map(|w| {
                let mut acc = shifts.iter().fold(0u64, |acc, &s| acc ^ self.window(s, w));
                let valid = t - 64 * w;
                if valid < 64 {
                    acc &= (1u64 << valid) - 1;
                }
                acc.count_ones() as u64
            })
            .sum();
        t as i64 - 2 * negatives as i64
    }
}

/// Bit `a` set iff `a` is a nonzero square modulo `p`.
fn square_table(p: u64) -> Vec<u64> {
    let mut table = vec![0u64; (p as usize).div_ceil(64)];
    for x in 1..=p / 2 {
        let a = mul_mod_u64(x, x, p) as usize;
        table[a / 64] |= 1 << (a % 64);
    }
    table
}
