//! Support enumeration in colexicographic order with a reduction whose
//! result does not depend on how the work was split.

use std::cmp::Ordering;

use rayon::prelude::*;

/// Default cap on supports (or index-set pairs) for exhaustive checks.
pub const DEFAULT_SUPPORT_BUDGET: u128 = 1_000_000;

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `C(n,1) + ... + C(n,k)`.
pub fn supports_up_to(n: u64, k: u64) -> u128 {
    (1..=k.min(n)).map(|s| binomial(n, s)).sum()
}

/// Advances `s` (strictly increasing, entries `< limit`) to its colex
/// successor; returns `false` after the last combination.
pub(crate) fn next_colex(s: &mut [usize], limit: usize) -> bool {
    let k = s.len();
    for j in 0..k {
        let cap = if j + 1 < k { s[j + 1] } else { limit };
        if s[j] + 1 < cap {
            s[j] += 1;
            for (i, v) in s[..j].iter_mut().enumerate() {
                *v = i;
            }
            return true;
        }
    }
    false
}

/// Visits every `k`-subset of `0..n` in colex order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut s: Vec<usize> = (0..k).collect();
    loop {
        f(&s);
        if k == 0 || !next_colex(&mut s, n) {
            break;
        }
    }
}

/// Best candidate so far: larger key wins, equal keys go to the
/// lexicographically smaller witness.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Best<K, W> {
    pub key: K,
    pub witness: W,
}

pub(crate) fn better<K: Ord, W: Ord>(a: Best<K, W>, b: Best<K, W>) -> Best<K, W> {
    match a.key.cmp(&b.key) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if a.witness <= b.witness {
                a
            } else {
                b
            }
        }
    }
}

pub(crate) fn merge<K: Ord, W: Ord>(a: Option<Best<K, W>>, b: Option<Best<K, W>>) -> Option<Best<K, W>> {
    match (a, b) {
        (Some(a), Some(b)) => Some(better(a, b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Maximizes `score` over every support of size `k` drawn from `0..n`.
/// Work is split by the largest element of the support.
pub(crate) fn max_over_supports<K, F>(n: usize, k: usize, score: F) -> Option<Best<K, Vec<usize>>>
where
    K: Ord + Send,
    F: Fn(&[usize]) -> K + Sync,
{
    if k == 0 || k > n {
        return None;
    }
    (k - 1..n)
        .into_par_iter()
        .map(|top| {
            let mut best: Option<Best<K, Vec<usize>>> = None;
            let mut support = vec![0usize; k];
            support[k - 1] = top;
            for_each_combination(top, k - 1, |head| {
                support[..k - 1].copy_from_slice(head);
                let cand = Best {
                    key: score(&support),
                    witness: support.clone(),
                };
                best = merge(best.take(), Some(cand));
            });
            best
        })
        .reduce(|| None, merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(32, 4), 35960);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(supports_up_to(24, 3), 24 + 276 + 2024);
    }

    #[test]
    fn colex_order_and_count() {
        let mut seen = Vec::new();
        for_each_combination(5, 3, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[1], vec![0, 1, 3]);
        assert_eq!(seen[2], vec![0, 2, 3]);
        assert_eq!(seen[3], vec![1, 2, 3]);
        assert_eq!(seen[9], vec![2, 3, 4]);
        let mut empty = 0;
        for_each_combination(4, 0, |s| {
            assert!(s.is_empty());
            empty += 1
        });
        assert_eq!(empty, 1);
    }

    #[test]
    fn ties_go_to_smallest_support() {
        let best = max_over_supports(6, 2, |_| 7u8).unwrap();
        assert_eq!(best.witness, vec![0, 1]);
        let best = max_over_supports(6, 2, |s| (s[0] + s[1]) as u32).unwrap();
        assert_eq!(best.witness, vec![4, 5]);
    }
}
