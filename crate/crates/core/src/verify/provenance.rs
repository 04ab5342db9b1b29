use serde::Serialize;

use crate::construct::{build_bernoulli_baseline, Provenance, SignMatrix};
use crate::error::Result;
use crate::ntheory::{BigNat, PrimeCert};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProvenanceCheck {
    pub kind: &'static str,
    /// False for explicit matrices, which carry nothing to re-derive.
    pub applicable: bool,
    pub entries_checked: u64,
    pub mismatches: u64,
    /// 0-based `(row, col)` of the first mismatch in column-major order.
    pub first_mismatch: Option<(usize, usize)>,
    pub note: Option<String>,
    pub pass: bool,
}

/// Recomputes every entry from the recorded provenance. Legendre entries
/// are recomputed by Euler's criterion, independently of the reciprocity
/// route used during construction.
pub fn provenance_check(mat: &SignMatrix) -> Result<ProvenanceCheck> {
    let (m, n) = (mat.rows(), mat.cols());
    let kind = mat.provenance().tag();
    let mut report = ProvenanceCheck {
        kind,
        applicable: true,
        entries_checked: 0,
        mismatches: 0,
        first_mismatch: None,
        note: None,
        pass: true,
    };
    let expected: Option<Box<dyn Fn(usize, usize) -> i8>> = match mat.provenance() {
        Provenance::Explicit => {
            report.applicable = false;
            report.note = Some("explicit matrix: nothing to re-derive".into());
            return Ok(report);
        }
        Provenance::BernoulliIid { seed } => {
            let rebuilt = build_bernoulli_baseline(m, n, *seed)?;
            Some(Box::new(move |r, c| rebuilt.sign(r, c)))
        }
        Provenance::LegendreSeeded { x, p } => legendre_entries(&mut report, x.clone(), p, m, n),
        Provenance::LegendreDeterministic { p } => legendre_entries(&mut report, BigNat::zero(), p, m, n),
    };
    let Some(expected) = expected else {
        return Ok(report);
    };
    for c in 0..n {
        for r in 0..m {
            report.entries_checked += 1;
            if expected(r, c) != mat.sign(r, c) {
                report.mismatches += 1;
                report.first_mismatch.get_or_insert((r, c));
            }
        }
    }
    report.pass = report.mismatches == 0;
    Ok(report)
}

/// Entry oracle for a Legendre matrix with offset `x`; `None` after
/// recording why the provenance itself is inadmissible.
fn legendre_entries(
    report: &mut ProvenanceCheck,
    x: BigNat,
    p: &BigNat,
    m: usize,
    n: usize,
) -> Option<Box<dyn Fn(usize, usize) -> i8>> {
    let cert = match PrimeCert::certify(p) {
        Ok(c) => c,
        Err(e) => {
            report.note = Some(e.to_string());
            report.pass = false;
            return None;
        }
    };
    let largest = &x + &(&BigNat::from(m) * &BigNat::from(n));
    if largest >= *p {
        report.note = Some(format!("X + MN = {largest} is not below p = {p}"));
        report.pass = false;
        return None;
    }
    Some(Box::new(move |r, c| cert.euler(&(&x + (c as u64 * m as u64 + r as u64 + 1)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_legendre_deterministic, read_ripm, write_ripm};

    #[test]
    fn detects_tampering() {
        let cert = PrimeCert::certify(&BigNat::from(211u64)).unwrap();
        let mat = build_legendre_deterministic(5, 6, &cert).unwrap();
        assert!(provenance_check(&mat).unwrap().pass);
        let text = write_ripm(&mat);
        let body_start = text.find("\np ").unwrap() + 1;
        let body_start = body_start + text[body_start..].find('\n').unwrap() + 1;
        let mut bytes = text.into_bytes();
        bytes[body_start] = if bytes[body_start] == b'+' { b'-' } else { b'+' };
        let tampered = read_ripm(std::str::from_utf8(&bytes).unwrap()).unwrap();
        let r = provenance_check(&tampered).unwrap();
        assert!(!r.pass);
        assert_eq!((r.mismatches, r.first_mismatch), (1, Some((0, 0))));
    }

    #[test]
    fn bernoulli_and_explicit() {
        let b = build_bernoulli_baseline(7, 9, 4).unwrap();
        assert!(provenance_check(&b).unwrap().pass);
        let e = SignMatrix::from_signs(1, 2, &[1, -1]).unwrap();
        let r = provenance_check(&e).unwrap();
        assert!(r.pass && !r.applicable);
    }
}
