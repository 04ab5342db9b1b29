//! Text formats, both canonical and newline-terminated:
//!
//! ```text
//! CODE v1 <n> <q>        BSET v1 <n> <q>
//! <n rows of q '0'/'1'>  <q rows of n '+'/'-'>
//! ```

use super::biased::BiasedSet;
use super::code::BinaryCode;
use crate::error::{Error, Result};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn write_code(code: &BinaryCode) -> String {
    let mut out = format!("CODE v1 {} {}\n", code.dim(), code.len());
    for row in code.rows() {
        out.extend(row.iter().map(|&b| char::from(b'0' + b)));
        out.push('\n');
    }
    out
}

pub fn write_bset(set: &BiasedSet) -> String {
    let mut out = format!("BSET v1 {} {}\n", set.dim(), set.size());
    for v in set.signs() {
        out.extend(v.iter().map(|&s| if s == 1 { '+' } else { '-' }));
        out.push('\n');
    }
    out
}

/// Header fields and body lines; `rows` lines of `width` chars from `alphabet`.
fn read_grid(text: &str, magic: &str, alphabet: [char; 2]) -> Result<(usize, usize, Vec<Vec<u8>>)> {
    if !text.ends_with('\n') {
        return Err(perr(text.lines().count().max(1), "file must end with a newline"));
    }
    let lines: Vec<&str> = text[..text.len() - 1].split('\n').collect();
    let parts: Vec<&str> = lines[0].split(' ').collect();
    if parts.len() != 4 || parts[0] != magic || parts[1] != "v1" {
        return Err(perr(1, format!("expected '{magic} v1 <n> <q>'")));
    }
    let num = |s: &str| -> Result<usize> {
        if s.is_empty() || s.starts_with('0') || !s.bytes().all(|c| c.is_ascii_digit()) {
            return Err(perr(1, format!("`{s}` is not a canonical positive integer")));
        }
        s.parse().map_err(|_| perr(1, format!("`{s}` is out of range")))
    };
    let (n, q) = (num(parts[2])?, num(parts[3])?);
    let (rows, width) = if magic == "CODE" { (n, q) } else { (q, n) };
    if lines.len() != rows + 1 {
        return Err(perr(lines.len().min(rows + 1) + 1, format!("expected {rows} body lines, found {}", lines.len() - 1)));
    }
    let mut grid = Vec::with_capacity(rows);
    for (i, line) in lines[1..].iter().enumerate() {
        let row: Vec<u8> = line
            .chars()
            .map(|c| alphabet.iter().position(|&a| a == c).map(|b| b as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| perr(i + 2, format!("only '{}' and '{}' are allowed", alphabet[0], alphabet[1])))?;
        if row.len() != width {
            return Err(perr(i + 2, format!("expected {width} symbols, found {}", row.len())));
        }
        grid.push(row);
    }
    Ok((n, q, grid))
}

pub fn read_code(text: &str) -> Result<BinaryCode> {
    let (_, _, grid) = read_grid(text, "CODE", ['0', '1'])?;
    BinaryCode::new(&grid)
}

pub fn read_bset(text: &str) -> Result<BiasedSet> {
    let (_, _, grid) = read_grid(text, "BSET", ['+', '-'])?;
    let signs: Vec<Vec<i8>> = grid
        .into_iter()
        .map(|r| r.into_iter().map(|b| if b == 0 { 1 } else { -1 }).collect())
        .collect();
    BiasedSet::new(&signs)
}
