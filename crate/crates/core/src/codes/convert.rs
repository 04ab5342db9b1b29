use num_rational::Ratio;
use serde::Serialize;

use super::biased::{BiasedSet, ExactBias};
use super::code::BinaryCode;
use crate::error::{invalid, Error, Result};

/// Parses `a/b` or a finite decimal such as `0.125` into an exact ratio.
pub fn parse_ratio(s: &str) -> Result<Ratio<u64>> {
    let bad = || invalid(format!("`{s}` is not a nonnegative fraction or decimal"));
    if let Some((a, b)) = s.split_once('/') {
        let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
        if b == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let den = 10u64.pow(frac.len() as u32);
    let num_frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let num = int.checked_mul(den).and_then(|v| v.checked_add(num_frac)).ok_or_else(bad)?;
    Ok(Ratio::new(num, den))
}

fn ratio_string(r: &Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasedFromCode {
    #[serde(skip)]
    pub set: BiasedSet,
    pub requested_eps: String,
    /// `max |2w - q| / q` over nonzero codewords.
    pub certified_eps: String,
    /// Exhaustive bias of the produced set.
    pub exact_bias: ExactBias,
    /// `exact_bias <= requested_eps`.
    pub pass: bool,
}

/// Maps the columns of `G` to sign vectors by `b -> (-1)^b` after checking
/// every nonzero codeword weight lies in `[(1 - eps) q / 2, (1 + eps) q / 2]`.
pub fn code_to_biased(code: &BinaryCode, eps: Ratio<u64>) -> Result<BiasedFromCode> {
    let spectrum = code.weight_spectrum()?;
    let q = code.len() as u64;
    let certified = Ratio::new(spectrum.max_imbalance, q);
    if certified > eps {
        let (lo, hi) = (
            (Ratio::from_integer(1) - eps.min(Ratio::from_integer(1))) * q / 2,
            (Ratio::from_integer(1) + eps) * q / 2,
        );
        let codeword: String = (0..code.len())
            .map(|j| {
                let bit = (0..code.dim())
                    .filter(|&i| spectrum.worst_message >> i & 1 == 1)
                    .fold(0u8, |b, i| b ^ code.bit(i, j));
                char::from(b'0' + bit)
            })
            .collect();
        return Err(Error::WeightWindow {
            codeword,
            weight: spectrum.worst_weight,
            lo: ratio_string(&lo),
            hi: ratio_string(&hi),
        });
    }
    let set = BiasedSet::from_masks(code.dim(), (0..code.len()).map(|j| code.column_mask(j)).collect());
    let exact_bias = set.exact_bias()?;
    Ok(BiasedFromCode {
        pass: exact_bias.ratio() <= eps,
        requested_eps: ratio_string(&eps),
        certified_eps: ratio_string(&certified),
        exact_bias,
        set,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CodeFromBiased {
    Code {
        #[serde(skip)]
        code: BinaryCode,
        exact_bias: ExactBias,
        /// Every nonzero weight lies within `[(1 - eps*) q / 2, (1 + eps*) q / 2]`.
        window_holds: bool,
    },
    /// Coordinates whose product is constant over the set, so the bias is 1.
    Degenerate { certificate: Vec<usize>, character_sum: i64 },
}

/// Reads the set as the columns of a generator, sorted by column mask.
pub fn biased_to_code(set: &BiasedSet) -> Result<CodeFromBiased> {
    let mut cols = set.masks().to_vec();
    cols.sort_unstable();
    let rows: Vec<Vec<u8>> = (0..set.dim())
        .map(|i| cols.iter().map(|c| (c >> i & 1) as u8).collect())
        .collect();
    let code = BinaryCode::from_bits_unchecked(&rows)?;
    if let Some(dep) = code.dependency() {
        return Ok(CodeFromBiased::Degenerate {
            certificate: (0..set.dim()).filter(|i| dep >> i & 1 == 1).map(|i| i + 1).collect(),
            character_sum: set.character_sum(dep),
        });
    }
    let exact_bias = set.exact_bias()?;
    let spectrum = code.weight_spectrum()?;
    Ok(CodeFromBiased::Code {
        window_holds: Ratio::new(spectrum.max_imbalance, code.len() as u64) <= exact_bias.ratio(),
        code,
        exact_bias,
    })
}

/// `min(log2(1/eps), n - 1)` bits.
pub fn entropy_lower_bound(n: usize, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid(format!("eps must lie in (0, 1], got {eps}")));
    }
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    Ok((1.0 / eps).log2().min((n - 1) as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WelchEntropyCheck {
    pub n: usize,
    pub q: u64,
    pub exact_bias: ExactBias,
    /// `(2^n - q) / (q (2^n - 1))`, as `num/den` (numerator may be negative).
    pub floor: String,
    pub holds: bool,
}

/// Exact check of `eps*^2 >= (2^n - q) / (q (2^n - 1))`.
pub fn welch_entropy_check(set: &BiasedSet) -> Result<WelchEntropyCheck> {
    let exact_bias = set.exact_bias()?;
    let n = set.dim();
    let q = set.size() as i128;
    let full = 1i128 << n;
    let s = exact_bias.max_abs_sum as i128;
    // (s/q)^2 >= (full - q) / (q (full - 1))  <=>  s^2 (full - 1) >= q (full - q)
    let holds = s * s * (full - 1) >= q * (full - q);
    Ok(WelchEntropyCheck {
        n,
        q: q as u64,
        floor: format!("{}/{}", full - q, q * (full - 1)),
        exact_bias,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(rows: &[&[u8]]) -> BinaryCode {
        BinaryCode::new(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn part_a_examples() {
        let r = code_to_biased(&code(&[&[0, 0, 1, 1], &[0, 1, 0, 1]]), Ratio::from_integer(0)).unwrap();
        assert_eq!(r.exact_bias.max_abs_sum, 0);
        assert_eq!(r.set.signs(), vec![vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]);
        let r = code_to_biased(&code(&[&[0, 1]]), Ratio::from_integer(0)).unwrap();
        assert_eq!(r.set.signs(), vec![vec![1], vec![-1]]);
        let err = code_to_biased(&code(&[&[1, 1]]), Ratio::new(1, 2)).unwrap_err();
        assert!(matches!(err, Error::WeightWindow { ref codeword, weight: 2, .. } if codeword == "11"));
        assert!(code_to_biased(&code(&[&[1, 1]]), Ratio::from_integer(1)).unwrap().pass);
    }

    #[test]
    fn part_b_examples() {
        let x = BiasedSet::new(&[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]).unwrap();
        match biased_to_code(&x).unwrap() {
            CodeFromBiased::Code { code, window_holds, .. } => {
                assert_eq!(code.rank(), 2);
                assert_eq!(code.weight_spectrum().unwrap().counts[2], 3);
                assert!(window_holds);
            }
            other => panic!("{other:?}"),
        }
        let x = BiasedSet::new(&[vec![1, 1], vec![-1, -1]]).unwrap();
        assert_eq!(
            biased_to_code(&x).unwrap(),
            CodeFromBiased::Degenerate {
                certificate: vec![1, 2],
                character_sum: 2
            }
        );
    }

    #[test]
    fn entropy_and_welch() {
        assert_eq!(entropy_lower_bound(5, 1.0).unwrap(), 0.0);
        assert_eq!(entropy_lower_bound(3, 1.0 / 1024.0).unwrap(), 2.0);
        assert_eq!(entropy_lower_bound(30, 0.25).unwrap(), 2.0);
        assert!(entropy_lower_bound(3, 0.0).is_err());
        let x = BiasedSet::new(&[vec![1, 1], vec![-1, -1]]).unwrap();
        let w = welch_entropy_check(&x).unwrap();
        assert!(w.holds);
        assert_eq!(w.floor, "2/6");
        let u = BiasedSet::new(&[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]).unwrap();
        let w = welch_entropy_check(&u).unwrap();
        assert!(w.holds && w.floor == "0/12" && w.exact_bias.max_abs_sum == 0);
    }

    #[test]
    fn ratios() {
        assert_eq!(parse_ratio("0.125").unwrap(), Ratio::new(1, 8));
        assert_eq!(parse_ratio("1/3").unwrap(), Ratio::new(1, 3));
        assert_eq!(parse_ratio("1").unwrap(), Ratio::from_integer(1));
        assert_eq!(parse_ratio(".5").unwrap(), Ratio::new(1, 2));
        for bad in ["", ".", "1/0", "-1", "0.1e3", "a"] {
            assert!(parse_ratio(bad).is_err(), "{bad}");
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn generator() -> impl Strategy<Value = BinaryCode> {
            (1usize..=8).prop_flat_map(|n| (Just(n), n + 2..=32)).prop_flat_map(|(n, q)| {
                prop::collection::vec(prop::collection::vec(0u8..=1, q), n)
                    .prop_filter_map("full rank", |rows| BinaryCode::new(&rows).ok())
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(96))]

            #[test]
            fn window_bounds_bias_and_round_trips(code in generator()) {
                let spectrum = code.weight_spectrum().unwrap();
                let eps = Ratio::new(spectrum.max_imbalance, code.len() as u64);
                let a = code_to_biased(&code, eps).unwrap();
                prop_assert!(a.pass);
                match biased_to_code(&a.set).unwrap() {
                    CodeFromBiased::Code { code: back, window_holds, .. } => {
                        prop_assert!(window_holds);
                        prop_assert_eq!(back, code.canonical());
                    }
                    other => prop_assert!(false, "{:?}", other),
                }
            }

            #[test]
            fn welch_entropy_inequality(n in 2usize..=10, seed in prop::collection::vec(any::<u64>(), 1..=64)) {
                let q = seed.len().min(1 << (n - 1));
                let masks: Vec<u64> = seed[..q].iter().map(|v| v & ((1 << n) - 1)).collect();
                let set = BiasedSet::from_masks(n, masks);
                prop_assert!(welch_entropy_check(&set).unwrap().holds);
            }
        }
    }
}
