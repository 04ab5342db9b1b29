use num_rational::Ratio;
use serde::Serialize;

use super::code::MAX_ENUM_DIM;
use crate::error::{invalid, Result};

/// Multiset of `q` sign vectors in `{+1, -1}^n`, `n <= 64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiasedSet {
    n: usize,
    /// Bit `i` of entry `x` is set iff `x_i = -1`.
    vectors: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactBias {
    /// `max over nonempty I of |sum_x prod_{i in I} x_i|`.
    pub max_abs_sum: u64,
    pub q: u64,
    /// Smallest mask attaining the max, as 1-based coordinates.
    pub witness: Vec<usize>,
}

impl ExactBias {
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.max_abs_sum, self.q)
    }

    pub fn value(&self) -> f64 {
        self.max_abs_sum as f64 / self.q as f64
    }
}

impl BiasedSet {
    /// `signs[x][i]` is coordinate `i` of vector `x`, each `+1` or `-1`.
    pub fn new(signs: &[Vec<i8>]) -> Result<Self> {
        let n = signs.first().map(|v| v.len()).unwrap_or(0);
        if signs.is_empty() || n == 0 || n > 64 {
            return Err(invalid("need at least one vector of dimension 1..=64"));
        }
        let mut vectors = Vec::with_capacity(signs.len());
        for (x, v) in signs.iter().enumerate() {
            if v.len() != n {
                return Err(invalid(format!("vector {} has dimension {} instead of {n}", x + 1, v.len())));
            }
            let mut mask = 0u64;
            for (i, &s) in v.iter().enumerate() {
                match s {
                    1 => {}
                    -1 => mask |= 1 << i,
                    _ => return Err(invalid(format!("entry ({}, {}) is not a sign", x + 1, i + 1))),
                }
            }
            vectors.push(mask);
        }
        Ok(BiasedSet { n, vectors })
    }

    pub(crate) fn from_masks(n: usize, vectors: Vec<u64>) -> Self {
        debug_assert!(n <= 64 && !vectors.is_empty());
        BiasedSet { n, vectors }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.vectors.len()
    }

    pub fn masks(&self) -> &[u64] {
        &self.vectors
    }

    pub fn signs(&self) -> Vec<Vec<i8>> {
        self.vectors
            .iter()
            .map(|m| (0..self.n).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect())
            .collect()
    }

    /// `sum_x prod_{i in I} x_i` for the index set with mask `index_mask`.
    pub fn character_sum(&self, index_mask: u64) -> i64 {
        let odd = self.vectors.iter().filter(|&&v| (v & index_mask).count_ones() % 2 == 1).count();
        self.vectors.len() as i64 - 2 * odd as i64
    }

    /// Exhaustive bias over all `2^n - 1` index sets through a Walsh-Hadamard
    /// transform of the vector histogram.
    pub fn exact_bias(&self) -> Result<ExactBias> {
        if self.n > MAX_ENUM_DIM {
            return Err(invalid(format!("exact bias needs n <= {MAX_ENUM_DIM}, got {}", self.n)));
        }
        let size = 1usize << self.n;
        let mut f = vec![0i64; size];
        for &v in &self.vectors {
            f[v as usize] += 1;
        }
        let mut h = 1;
        while h < size {
            for block in (0..size).step_by(2 * h) {
                for i in block..block + h {
                    let (a, b) = (f[i], f[i + h]);
                    f[i] = a + b;
                    f[i + h] = a - b;
                }
            }
            h *= 2;
        }
        let (mask, best) = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, s)| (i, s.unsigned_abs()))
            .fold((0usize, 0u64), |acc, (i, s)| if s > acc.1 || acc.0 == 0 { (i, s) } else { acc });
        Ok(ExactBias {
            max_abs_sum: best,
            q: self.vectors.len() as u64,
            witness: (0..self.n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_square_is_unbiased() {
        let x = BiasedSet::new(&[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]).unwrap();
        let b = x.exact_bias().unwrap();
        assert_eq!(b.max_abs_sum, 0);
        assert_eq!(b.witness, vec![1]);
    }

    #[test]
    fn correlated_pair() {
        let x = BiasedSet::new(&[vec![1, 1], vec![-1, -1]]).unwrap();
        let b = x.exact_bias().unwrap();
        assert_eq!(b.ratio(), Ratio::from_integer(1));
        assert_eq!(b.witness, vec![1, 2]);
    }

    #[test]
    fn transform_matches_direct_sums() {
        let x = BiasedSet::from_masks(5, vec![3, 7, 7, 12, 31, 0, 18, 9, 22]);
        let b = x.exact_bias().unwrap();
        let direct = (1u64..32).map(|i| x.character_sum(i).unsigned_abs()).max().unwrap();
        assert_eq!(b.max_abs_sum, direct);
        let first = (1u64..32).find(|&i| x.character_sum(i).unsigned_abs() == direct).unwrap();
        let mask = b.witness.iter().fold(0u64, |m, &i| m | 1 << (i - 1));
        assert_eq!(mask, first);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BiasedSet::new(&[]).is_err());
        assert!(BiasedSet::new(&[vec![1, 0]]).is_err());
        assert!(BiasedSet::new(&[vec![1, 1], vec![1]]).is_err());
    }
}
