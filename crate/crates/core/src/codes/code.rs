use serde::Serialize;

use crate::error::{invalid, Result};

/// Largest dimension for which all `2^n` codewords are enumerated.
pub const MAX_ENUM_DIM: usize = 20;

/// Binary linear code given by an `n x q` generator whose rows are
/// independent over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    n: usize,
    q: usize,
    /// Row `i`, packed little-endian over positions.
    rows: Vec<Vec<u64>>,
}

/// Counts of nonzero codewords by weight, plus the most unbalanced one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightSpectrum {
    /// `counts[w]` nonzero codewords of weight `w`; `counts.len() == q + 1`.
    pub counts: Vec<u64>,
    /// Largest `|2w - q|` over nonzero codewords.
    pub max_imbalance: u64,
    /// Smallest message mask (bit `i` selects row `i`) attaining it.
    pub worst_message: u64,
    pub worst_weight: u64,
}

impl BinaryCode {
    /// `rows[i][j]` is generator entry `(i, j)`, each 0 or 1.
    pub fn new(rows: &[Vec<u8>]) -> Result<Self> {
        let code = Self::from_bits_unchecked(rows)?;
        if let Some(dep) = code.dependency() {
            let rows: Vec<usize> = (0..code.n).filter(|i| dep >> i & 1 == 1).map(|i| i + 1).collect();
            return Err(invalid(format!("generator rows {rows:?} sum to zero over GF(2)")));
        }
        Ok(code)
    }

    pub(crate) fn from_bits_unchecked(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > 64 {
            return Err(invalid(format!("dimension must be in 1..=64, got {n}")));
        }
        let q = rows[0].len();
        if q == 0 {
            return Err(invalid("length must be positive"));
        }
        let words = q.div_ceil(64);
        let mut packed = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != q {
                return Err(invalid(format!("row {} has length {} instead of {q}", i + 1, row.len())));
            }
            let mut w = vec![0u64; words];
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => w[j / 64] |= 1 << (j % 64),
                    _ => return Err(invalid(format!("entry ({}, {}) is not a bit", i + 1, j + 1))),
                }
            }
            packed.push(w);
        }
        Ok(BinaryCode { n, q, rows: packed })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.q
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bit(&self, row: usize, col: usize) -> u8 {
        (self.rows[row][col / 64] >> (col % 64) & 1) as u8
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.n).map(|i| (0..self.q).map(|j| self.bit(i, j)).collect()).collect()
    }

    /// Column `j` as a mask over rows (bit `i` is entry `(i, j)`).
    pub fn column_mask(&self, col: usize) -> u64 {
        (0..self.n).fold(0, |m, i| m | (self.bit(i, col) as u64) << i)
    }

    /// GF(2) rank by row reduction.
    pub fn rank(&self) -> usize {
        self.n - self.reduce().iter().filter(|(v, _)| v.iter().all(|&w| w == 0)).count()
    }

    /// Row reduction tracking which original rows make up each reduced row.
    fn reduce(&self) -> Vec<(Vec<u64>, u64)> {
        let mut work: Vec<(Vec<u64>, u64)> =
            self.rows.iter().enumerate().map(|(i, r)| (r.clone(), 1u64 << i)).collect();
        let mut pivot_row = 0;
        for col in 0..self.q {
            let (wi, bi) = (col / 64, col % 64);
            let Some(found) = (pivot_row..self.n).find(|&r| work[r].0[wi] >> bi & 1 == 1) else {
                continue;
            };
            work.swap(pivot_row, found);
            let (pv, pm) = work[pivot_row].clone();
            for (r, (v, m)) in work.iter_mut().enumerate() {
                if r != pivot_row && v[wi] >> bi & 1 == 1 {
                    v.iter_mut().zip(&pv).for_each(|(a, b)| *a ^= b);
                    *m ^= pm;
                }
            }
            pivot_row += 1;
        }
        work
    }

    /// A nonempty set of rows summing to zero, as a row mask, if any.
    /// Among the zero rows after reduction the smallest mask is returned.
    pub(crate) fn dependency(&self) -> Option<u64> {
        self.reduce()
            .into_iter()
            .filter(|(v, _)| v.iter().all(|&w| w == 0))
            .map(|(_, m)| m)
            .min()
    }

    /// Weights of all `2^n - 1` nonzero codewords, in Gray-code order.
    pub fn weight_spectrum(&self) -> Result<WeightSpectrum> {
        if self.n > MAX_ENUM_DIM {
            return Err(invalid(format!(
                "weight enumeration needs n <= {MAX_ENUM_DIM}, got {}",
                self.n
            )));
        }
        let mut counts = vec![0u64; self.q + 1];
        let mut word = vec![0u64; self.rows[0].len()];
        let mut worst: Option<(u64, u64, u64)> = None;
        for step in 1u64..1 << self.n {
            let flip = step.trailing_zeros() as usize;
            word.iter_mut().zip(&self.rows[flip]).for_each(|(a, b)| *a ^= b);
            let message = step ^ (step >> 1);
            let w: u64 = word.iter().map(|x| x.count_ones() as u64).sum();
            counts[w as usize] += 1;
            let imbalance = (2 * w).abs_diff(self.q as u64);
            let replace = match worst {
                None => true,
                Some((i, m, _)) => imbalance > i || (imbalance == i && message < m),
            };
            if replace {
                worst = Some((imbalance, message, w));
            }
        }
        let (max_imbalance, worst_message, worst_weight) = worst.expect("n >= 1");
        Ok(WeightSpectrum {
            counts,
            max_imbalance,
            worst_message,
            worst_weight,
        })
    }

    /// The same code with columns sorted by [`column_mask`](Self::column_mask).
    pub fn canonical(&self) -> BinaryCode {
        let mut cols: Vec<u64> = (0..self.q).map(|j| self.column_mask(j)).collect();
        cols.sort_unstable();
        let rows: Vec<Vec<u8>> = (0..self.n)
            .map(|i| cols.iter().map(|c| (c >> i & 1) as u8).collect())
            .collect();
        Self::from_bits_unchecked(&rows).expect("same shape")
    }
}
