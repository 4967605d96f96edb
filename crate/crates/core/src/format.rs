//! Matrix file formats.
//!
//! Text: first line `m n`, then `m` lines of `n` whitespace-separated
//! complex literals (`a`, `ai`, `a+bi`, `a-bi`). JSON: an object with
//! `rows`, `cols` and `data`, a row-major array of `[re, im]` pairs.
//! [`parse_matrix`] accepts either, keyed on the first non-blank character.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

/// Parses a single complex literal such as `3`, `-2.5i`, `1e-3+4i`, `i`.
pub fn parse_complex(tok: &str) -> Option<C64> {
    let tok = tok.trim();
    if tok.is_empty() {
        return None;
    }
    let Some(body) = tok.strip_suffix('i') else {
        return parse_real(tok).map(|re| C64::new(re, 0.0));
    };
    // Split at the last sign that is not the leading sign and does not
    // belong to an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = parse_real(&body[..k])?;
            let im = parse_imag_coeff(&body[k..])?;
            Some(C64::new(re, im))
        }
        None => parse_imag_coeff(body).map(|im| C64::new(0.0, im)),
    }
}

// Shortest representation that round-trips; integers print without a
// trailing `.0`.
fn fmt_real(x: f64) -> String {
    let s = format!("{x:?}");
    s.strip_suffix(".0").map(str::to_owned).unwrap_or(s)
}

fn parse_real(s: &str) -> Option<f64> {
    let x: f64 = s.parse().ok()?;
    x.is_finite().then_some(x)
}

fn parse_imag_coeff(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => parse_real(s),
    }
}

/// Formats a complex literal that parses back to the identical value.
pub fn format_complex(z: C64) -> String {
    let re = fmt_real(z.re);
    if z.im == 0.0 && z.im.is_sign_positive() {
        return re;
    }
    if z.im.is_sign_negative() {
        format!("{re}-{}i", fmt_real(-z.im))
    } else {
        format!("{re}+{}i", fmt_real(z.im))
    }
}

pub fn parse_text(src: &str) -> Result<ComplexMatrix> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let parse_dim = |s: &str| -> Result<usize> {
        match s.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(Error::Parse {
                line: hline,
                msg: format!("invalid dimension `{s}`"),
            }),
        }
    };
    if dims.len() != 2 {
        return Err(Error::Parse {
            line: hline,
            msg: "header must be `rows cols`".into(),
        });
    }
    let (m, n) = (parse_dim(dims[0])?, parse_dim(dims[1])?);

    let mut entries = Vec::with_capacity(m * n);
    let mut row_count = 0;
    for (line, text) in lines {
        if row_count == m {
            return Err(Error::Parse {
                line,
                msg: format!("more than {m} rows"),
            });
        }
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() != n {
            return Err(Error::Parse {
                line,
                msg: format!("expected {n} entries, found {}", toks.len()),
            });
        }
        for tok in toks {
            entries.push(parse_complex(tok).ok_or_else(|| Error::Parse {
                line,
                msg: format!("bad complex literal `{tok}`"),
            })?);
        }
        row_count += 1;
    }
    if row_count != m {
        return Err(Error::Parse {
            line: hline,
            msg: format!("expected {m} rows, found {row_count}"),
        });
    }
    ComplexMatrix::new(m, n, entries)
}

pub fn write_text(a: &ComplexMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", a.rows(), a.cols());
    for i in 0..a.rows() {
        let row: Vec<String> = (0..a.cols()).map(|j| format_complex(a.get(i, j))).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn parse_json(src: &str) -> Result<ComplexMatrix> {
    let jm: JsonMatrix = serde_json::from_str(src).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    if jm.rows == 0 || jm.cols == 0 {
        return Err(Error::Parse {
            line: 1,
            msg: "rows and cols must be positive".into(),
        });
    }
    let entries = jm.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
    ComplexMatrix::new(jm.rows, jm.cols, entries)
}

pub fn write_json(a: &ComplexMatrix) -> String {
    let jm = JsonMatrix {
        rows: a.rows(),
        cols: a.cols(),
        data: a.entries().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string(&jm).expect("matrix serializes")
}

/// Parses either format.
pub fn parse_matrix(src: &str) -> Result<ComplexMatrix> {
    if src.trim_start().starts_with('{') {
        parse_json(src)
    } else {
        parse_text(src)
    }
}
