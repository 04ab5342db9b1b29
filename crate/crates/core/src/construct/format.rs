//! `RIPM v1` text format.
//!
//! ```text
//! RIPM 1 <M> <N> <provenance-tag>
//! <provenance fields, one per line>
//! <M lines of N space-separated '+' / '-'>
//! ```
//!
//! Provenance fields: `p <hex>` and `x <hex>` for `legendre-seeded`,
//! `p <hex>` for `legendre-deterministic`, `rng chacha20 <decimal seed>` for
//! `bernoulli-iid`, none for `explicit`. Hex is lowercase without leading
//! zeros. Every line ends in `\n`. Only the canonical rendering is accepted,
//! so reading then writing reproduces the input byte for byte.

use std::fmt::Write as _;

use super::matrix::{Provenance, SignMatrix, BERNOULLI_GENERATOR};
use crate::error::{Error, Result};
use crate::ntheory::BigNat;

pub const MAGIC: &str = "RIPM";
pub const FORMAT_VERSION: u32 = 1;

pub fn write_ripm(mat: &SignMatrix) -> String {
    let mut out = String::with_capacity(mat.rows() * mat.cols() * 2 + 64);
    let _ = writeln!(
        out,
        "{MAGIC} {FORMAT_VERSION} {} {} {}",
        mat.rows(),
        mat.cols(),
        mat.provenance().tag()
    );
    match mat.provenance() {
        Provenance::LegendreSeeded { x, p } => {
            let _ = writeln!(out, "p {}", p.to_hex());
            let _ = writeln!(out, "x {}", x.to_hex());
        }
        Provenance::LegendreDeterministic { p } => {
            let _ = writeln!(out, "p {}", p.to_hex());
        }
        Provenance::BernoulliIid { seed } => {
            let _ = writeln!(out, "rng {BERNOULLI_GENERATOR} {seed}");
        }
        Provenance::Explicit => {}
    }
    for r in 0..mat.rows() {
        for c in 0..mat.cols() {
            if c > 0 {
                out.push(' ');
            }
            out.push(if mat.sign(r, c) == 1 { '+' } else { '-' });
        }
        out.push('\n');
    }
    out
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn field<'a>(lines: &[&'a str], idx: usize, key: &str) -> Result<&'a str> {
    let line = lines
        .get(idx)
        .ok_or_else(|| perr(idx + 1, format!("missing '{key}' field")))?;
    line.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| perr(idx + 1, format!("expected '{key} <value>'")))
}

fn hex_field(lines: &[&str], idx: usize, key: &str) -> Result<BigNat> {
    BigNat::from_hex(field(lines, idx, key)?).map_err(|e| perr(idx + 1, e.to_string()))
}

pub fn read_ripm(text: &str) -> Result<SignMatrix> {
    if !text.ends_with('\n') {
        return Err(perr(text.lines().count().max(1), "file must end with a newline"));
    }
    let lines: Vec<&str> = text[..text.len() - 1].split('\n').collect();
    let header: Vec<&str> = lines[0].split(' ').collect();
    if header.len() != 5 || header[0] != MAGIC {
        return Err(perr(1, "expected 'RIPM 1 <M> <N> <provenance-tag>'"));
    }
    if header[1] != FORMAT_VERSION.to_string() {
        return Err(perr(1, format!("unsupported version '{}'", header[1])));
    }
    let parse_dim = |s: &str, what: &str| -> Result<usize> {
        s.parse::<usize>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| perr(1, format!("{what} must be a positive integer, got '{s}'")))
    };
    let rows = parse_dim(header[2], "M")?;
    let cols = parse_dim(header[3], "N")?;

    let (provenance, body_start) = match header[4] {
        "legendre-seeded" => {
            let p = hex_field(&lines, 1, "p")?;
            let x = hex_field(&lines, 2, "x")?;
            (Provenance::LegendreSeeded { x, p }, 3)
        }
        "legendre-deterministic" => (
            Provenance::LegendreDeterministic {
                p: hex_field(&lines, 1, "p")?,
            },
            2,
        ),
        "bernoulli-iid" => {
            let v = field(&lines, 1, "rng")?;
            let seed = v
                .strip_prefix(BERNOULLI_GENERATOR)
                .and_then(|s| s.strip_prefix(' '))
                .ok_or_else(|| perr(2, format!("expected 'rng {BERNOULLI_GENERATOR} <seed>'")))?;
            let seed: u64 = seed
                .parse()
                .map_err(|_| perr(2, format!("bad seed '{seed}'")))?;
            (Provenance::BernoulliIid { seed }, 2)
        }
        "explicit" => (Provenance::Explicit, 1),
        other => return Err(perr(1, format!("unknown provenance tag '{other}'"))),
    };

    let body = &lines[body_start..];
    if body.len() != rows {
        return Err(perr(
            body_start + body.len().min(rows) + 1,
            format!("expected {rows} entry rows, found {}", body.len()),
        ));
    }
    let mut signs = vec![0i8; rows * cols];
    for (r, line) in body.iter().enumerate() {
        let lineno = body_start + r + 1;
        let tokens: Vec<&str> = line.split(' ').collect();
        if tokens.len() != cols {
            return Err(perr(
                lineno,
                format!("expected {cols} entries, found {}", tokens.len()),
            ));
        }
        for (c, tok) in tokens.iter().enumerate() {
            signs[c * rows + r] = match *tok {
                "+" => 1,
                "-" => -1,
                other => return Err(perr(lineno, format!("entry '{other}' is not '+' or '-'"))),
            };
        }
    }
    SignMatrix::from_signs_with(rows, cols, &signs, provenance)
}
