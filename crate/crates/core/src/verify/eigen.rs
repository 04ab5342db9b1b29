/// Off-diagonal Frobenius threshold (relative to `max(1, ||A||_F)`) at which
/// Jacobi sweeps stop.
pub const EIGEN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of the symmetric row-major `n x n` matrix `a` by cyclic
/// Jacobi rotations, ascending. `a` is overwritten.
pub fn symmetric_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let frob = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let threshold = EIGEN_TOL * frob.max(1.0);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| 2.0 * a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// `||A_S - I||_2` where `A_S = D_S / scale` is the principal submatrix of
/// the integer Gram `gram` (row-major, side `n`) on `support`.
pub fn gram_deviation(gram: &[i64], n: usize, support: &[usize], scale: f64) -> f64 {
    let k = support.len();
    match k {
        0 => 0.0,
        1 => (gram[support[0] * n + support[0]] as f64 / scale - 1.0).abs(),
        _ => {
            let mut a = vec![0.0; k * k];
            for (r, &i) in support.iter().enumerate() {
                for (c, &j) in support.iter().enumerate() {
                    let v = gram[i * n + j] as f64 / scale;
                    a[r * k + c] = if r == c { v - 1.0 } else { v };
                }
            }
            let vals = symmetric_eigenvalues(&mut a, k);
            vals[0].abs().max(vals[k - 1].abs())
        }
    }
}

/// Ratio `lambda_max / lambda_min` of a symmetric positive semidefinite
/// matrix; infinite when singular.
pub fn condition_estimate(a: &[f64], n: usize) -> f64 {
    let mut work = a.to_vec();
    let vals = symmetric_eigenvalues(&mut work, n);
    let (lo, hi) = (vals[0], vals[n - 1]);
    if lo <= 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}
