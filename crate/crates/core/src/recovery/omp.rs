use serde::Serialize;

use crate::construct::SignMatrix;
use crate::error::{invalid, Error, Result};
use crate::verify::condition_estimate;

/// Refits on supports whose Gram condition estimate exceeds this are refused.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparseSignal {
    pub n: usize,
    /// Ascending 0-based column indices.
    pub support: Vec<usize>,
    /// Values aligned with `support`.
    pub values: Vec<f64>,
}

impl SparseSignal {
    pub fn zero(n: usize) -> Self {
        SparseSignal {
            n,
            support: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn from_pairs(n: usize, mut pairs: Vec<(usize, f64)>) -> Result<Self> {
        pairs.sort_by_key(|&(i, _)| i);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) || pairs.last().is_some_and(|&(i, _)| i >= n) {
            return Err(invalid("support indices must be distinct and below N"));
        }
        Ok(SparseSignal {
            n,
            support: pairs.iter().map(|p| p.0).collect(),
            values: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn dense(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            x[i] = v;
        }
        x
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmpResult {
    pub signal: SparseSignal,
    /// Residual norm before the first and after every iteration.
    pub residual_history: Vec<f64>,
    /// Columns in the order they were selected.
    pub selection_order: Vec<usize>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves `A z = b` for symmetric positive definite row-major `A`.
fn cholesky_solve(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let k = b.len();
    let mut l = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let s: f64 = a[i * k + j] - (0..j).map(|t| l[i * k + t] * l[j * k + t]).sum::<f64>();
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * k + i] = s.sqrt();
            } else {
                l[i * k + j] = s / l[j * k + j];
            }
        }
    }
    let mut z = vec![0.0; k];
    for i in 0..k {
        z[i] = (b[i] - (0..i).map(|t| l[i * k + t] * z[t]).sum::<f64>()) / l[i * k + i];
    }
    for i in (0..k).rev() {
        z[i] = (z[i] - (i + 1..k).map(|t| l[t * k + i] * z[t]).sum::<f64>()) / l[i * k + i];
    }
    Some(z)
}

/// Least-squares coefficients of `y` on the columns `order`.
fn refit(mat: &SignMatrix, order: &[usize], y: &[f64]) -> Result<Vec<f64>> {
    let s = order.len();
    let inv_m = 1.0 / mat.rows() as f64;
    let gram: Vec<f64> = (0..s * s)
        .map(|t| mat.sign_dot(order[t / s], order[t % s]) as f64 * inv_m)
        .collect();
    let singular = |condition| {
        let mut partial = order.to_vec();
        partial.sort_unstable();
        Error::SingularSupport {
            partial_support: partial,
            condition,
        }
    };
    let condition = condition_estimate(&gram, s);
    if condition > MAX_CONDITION {
        return Err(singular(condition));
    }
    let rhs: Vec<f64> = order.iter().map(|&j| mat.column_inner(j, y)).collect();
    cholesky_solve(&gram, &rhs).ok_or_else(|| singular(f64::INFINITY))
}

/// Orthogonal matching pursuit with at most `k` iterations.
///
/// Each iteration picks the unselected column with the largest absolute
/// correlation with the residual (smallest index on ties) and refits by
/// least squares on the accumulated support. Stops early once the residual
/// norm is at most `noise_tol`.
pub fn omp_recover(mat: &SignMatrix, y: &[f64], k: usize, noise_tol: f64) -> Result<OmpResult> {
    let (m, n) = (mat.rows(), mat.cols());
    if y.len() != m {
        return Err(invalid(format!("y has length {} but M = {m}", y.len())));
    }
    if k > m {
        return Err(invalid(format!("K = {k} exceeds M = {m}")));
    }
    if noise_tol.is_nan() || noise_tol < 0.0 {
        return Err(invalid("noise tolerance must be nonnegative"));
    }
    let mut residual = y.to_vec();
    let mut history = vec![norm(&residual)];
    let mut order: Vec<usize> = Vec::new();
    let mut coeffs: Vec<f64> = Vec::new();

    for _ in 0..k.min(n) {
        if history[history.len() - 1] <= noise_tol {
            break;
        }
        let mut best: Option<(f64, usize)> = None;
        for j in (0..n).filter(|j| !order.contains(j)) {
            let c = mat.column_inner(j, &residual).abs();
            if best.is_none_or(|(bc, _)| c > bc) {
                best = Some((c, j));
            }
        }
        let Some((corr, pick)) = best else { break };
        if corr == 0.0 {
            break;
        }
        order.push(pick);

        coeffs = refit(mat, &order, y)?;
        let mut x = vec![0.0; n];
        for (&j, &v) in order.iter().zip(&coeffs) {
            x[j] = v;
        }
        let fit = mat.apply(&x);
        residual = y.iter().zip(&fit).map(|(a, b)| a - b).collect();
        history.push(norm(&residual));
    }

    let signal = SparseSignal::from_pairs(n, order.iter().copied().zip(coeffs).collect())?;
    Ok(OmpResult {
        signal,
        residual_history: history,
        selection_order: order,
    })
}
