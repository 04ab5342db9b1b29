use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::eigen::gram_deviation;
use super::support::{max_over_supports, merge, supports_up_to, Best};
use crate::construct::SignMatrix;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RipMode {
    Exhaustive,
    Sampled { n_samples: u64, rng_seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RipReport {
    pub k_checked: usize,
    /// Max over all supports of size at most `k_checked`; exhaustive mode only.
    pub delta_exact: Option<f64>,
    /// Max over the supports actually evaluated.
    pub delta_lower_bound: f64,
    /// 0-based column indices.
    pub worst_support: Vec<usize>,
    pub mode: RipMode,
    pub supports_evaluated: u128,
}

/// Rounds to 12 significant digits, the precision at which deltas are
/// reported and compared.
pub fn round_sig12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

fn tie_key(v: f64) -> i64 {
    (round_sig12(v) * 1e12).round() as i64
}

/// Exact or sampled restricted isometry constant `delta_K`.
///
/// Exhaustive mode evaluates `||Phi_S^T Phi_S - I||_2` on every support of
/// size `1..=K` (refusing when their count exceeds `budget`). Sampled mode
/// evaluates `n_samples` uniformly random supports of size exactly `K`;
/// sample `i` draws from stream `i` of a ChaCha20 generator keyed by the seed.
pub fn rip_constant(mat: &SignMatrix, k: usize, mode: RipMode, budget: u128) -> Result<RipReport> {
    let n = mat.cols();
    if k == 0 || k > n {
        return Err(invalid(format!("K must satisfy 1 <= K <= N = {n}, got {k}")));
    }
    let gram = mat.sign_gram();
    let scale = mat.rows() as f64;
    let score = |s: &[usize]| {
        let v = gram_deviation(&gram, n, s, scale);
        (tie_key(v), round_sig12(v))
    };

    match mode {
        RipMode::Exhaustive => {
            let needed = supports_up_to(n as u64, k as u64);
            if needed > budget {
                return Err(Error::BudgetExceeded {
                    needed,
                    budget,
                    hint: "use sampled mode",
                });
            }
            let best = (1..=k)
                .map(|size| max_over_supports(n, size, |s| score(s).0))
                .fold(None, merge)
                .expect("at least one support");
            let value = score(&best.witness).1;
            Ok(RipReport {
                k_checked: k,
                delta_exact: Some(value),
                delta_lower_bound: value,
                worst_support: best.witness,
                mode,
                supports_evaluated: needed,
            })
        }
        RipMode::Sampled {
            n_samples,
            rng_seed,
        } => {
            if n_samples == 0 {
                return Err(invalid("sampled mode needs at least one sample"));
            }
            let best = (0..n_samples)
                .into_par_iter()
                .map(|i| {
                    let support = sampled_support(n, k, rng_seed, i);
                    Some(Best {
                        key: score(&support).0,
                        witness: support,
                    })
                })
                .reduce(|| None, merge)
                .expect("at least one sample");
            Ok(RipReport {
                k_checked: k,
                delta_exact: None,
                delta_lower_bound: score(&best.witness).1,
                worst_support: best.witness,
                mode,
                supports_evaluated: n_samples as u128,
            })
        }
    }
}

pub(crate) fn sampled_support(n: usize, k: usize, rng_seed: u64, index: u64) -> Vec<usize> {
    let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
    rng.set_stream(index);
    let mut s = sample(&mut rng, n, k).into_vec();
    s.sort_unstable();
    s
}
