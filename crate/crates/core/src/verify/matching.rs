use serde::Serialize;

use crate::error::{invalid, Result};

/// Largest `q` accepted by the brute-force enumeration.
pub const MATCHING_MAX_Q: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingCheck {
    pub q: usize,
    pub colors: u64,
    /// `sum over perfect matchings M2 of colors^(components of M0 + M2)`.
    pub brute: u128,
    /// `(colors + q - 2)!! / (colors - 2)!!`.
    pub formula: u128,
    pub matchings: u128,
    /// `(q - 1)!!`.
    pub expected_matchings: u128,
    pub pass: bool,
}

/// `n!!` with `n!! = 1` for `n <= 0`.
pub fn double_factorial(n: i64) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut k = n;
    while k > 1 {
        acc = acc.checked_mul(k as u128)?;
        k -= 2;
    }
    Some(acc)
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Calls `f` with every perfect matching of `0..q` as a partner table.
fn for_each_matching(partner: &mut [usize], f: &mut impl FnMut(&[usize])) {
    let Some(first) = partner.iter().position(|&v| v == usize::MAX) else {
        f(partner);
        return;
    };
    for other in first + 1..partner.len() {
        if partner[other] == usize::MAX {
            partner[first] = other;
            partner[other] = first;
            for_each_matching(partner, f);
            partner[first] = usize::MAX;
            partner[other] = usize::MAX;
        }
    }
}

/// Checks the matching-coloring identity against `M0 = {01, 23, ...}`.
pub fn matching_coloring_count(q: usize, colors: u64) -> Result<MatchingCheck> {
    if q == 0 || q % 2 == 1 {
        return Err(invalid(format!("q must be a positive even number, got {q}")));
    }
    if q > MATCHING_MAX_Q {
        return Err(invalid(format!("q = {q} exceeds the enumeration limit {MATCHING_MAX_Q}")));
    }
    if colors == 0 {
        return Err(invalid("at least one color is required"));
    }
    let overflow = || invalid("count overflows 128 bits");
    let mut brute: u128 = 0;
    let mut matchings: u128 = 0;
    let mut failed = false;
    let mut partner = vec![usize::MAX; q];
    for_each_matching(&mut partner, &mut |m2| {
        let mut parent: Vec<usize> = (0..q).collect();
        let mut components = q;
        let edges = (0..q / 2).map(|i| (2 * i, 2 * i + 1)).chain((0..q).map(|v| (v, m2[v])));
        for (a, b) in edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                components -= 1;
            }
        }
        matchings += 1;
        match (colors as u128).checked_pow(components as u32).and_then(|t| brute.checked_add(t)) {
            Some(v) => brute = v,
            None => failed = true,
        }
    });
    if failed {
        return Err(overflow());
    }
    let top = double_factorial(colors as i64 + q as i64 - 2).ok_or_else(overflow)?;
    let bottom = double_factorial(colors as i64 - 2).ok_or_else(overflow)?;
    let formula = top / bottom;
    let expected_matchings = double_factorial(q as i64 - 1).expect("small");
    Ok(MatchingCheck {
        q,
        colors,
        brute,
        formula,
        matchings,
        expected_matchings,
        pass: brute == formula && top % bottom == 0 && matchings == expected_matchings,
    })
}
