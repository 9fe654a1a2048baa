//! Plain-text matrix files.
//!
//! The first token is the dimension `n`, followed by `n*n` complex tokens
//! in row-major order, separated by any whitespace. A token is `a`, `bi`,
//! `a+bi` or `a-bi` (`i` alone means unit imaginary). Text after `#` on a
//! line is ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

/// Parses one scalar token.
pub fn parse_complex(token: &str) -> Result<C64> {
    let bad = || Error::Parse(format!("invalid complex number `{token}`"));
    let t = token.trim();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t
            .parse::<f64>()
            .map(|re| C64::new(re, 0.0))
            .map_err(|_| bad());
    };
    // split at the last sign that is not the sign of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re.is_empty() {
        0.0
    } else {
        re.parse::<f64>().map_err(|_| bad())?
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(C64::new(re, im))
}

/// Lossless textual form accepted by [`parse_complex`].
pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 && !z.im.is_sign_negative() {
        format!("{:?}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{:?}{:?}i", z.re, z.im)
    } else {
        format!("{:?}+{:?}i", z.re, z.im)
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut tokens = text
        .lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    let dim_token = tokens
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dim: usize = dim_token
        .parse()
        .map_err(|_| Error::Parse(format!("invalid dimension `{dim_token}`")))?;
    if dim == 0 {
        return Err(Error::Parse("dimension must be positive".into()));
    }
    let entries = tokens.map(parse_complex).collect::<Result<Vec<_>>>()?;
    if entries.len() != dim * dim {
        return Err(Error::Parse(format!(
            "expected {} entries for dimension {dim}, found {}",
            dim * dim,
            entries.len()
        )));
    }
    ComplexMatrix::from_row_slice(dim, &entries).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_matrix(&text)
}

pub fn format_matrix(m: &ComplexMatrix) -> String {
    let n = m.dim();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format_complex(m[(i, j)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
