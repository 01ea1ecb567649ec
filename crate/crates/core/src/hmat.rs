//! The `HMAT 1` text format.
//!
//! ```text
//! HMAT 1
//! n 2
//! kind hadamard
//! ++
//! +-
//! ```
//!
//! The `kind` line is optional. `0` entries are legal only for `kind conference`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::matrix::SignMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HmatKind {
    Hadamard,
    Conference,
    Skew,
}

impl HmatKind {
    pub fn as_str(self) -> &'static str {
        match self {
            HmatKind::Hadamard => "hadamard",
            HmatKind::Conference => "conference",
            HmatKind::Skew => "skew",
        }
    }
}

impl fmt::Display for HmatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HmatKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hadamard" => Ok(HmatKind::Hadamard),
            "conference" => Ok(HmatKind::Conference),
            "skew" => Ok(HmatKind::Skew),
            other => Err(format!("unknown kind {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HmatFile {
    pub kind: Option<HmatKind>,
    pub matrix: SignMatrix,
}

impl HmatFile {
    pub fn new(kind: HmatKind, matrix: SignMatrix) -> Self {
        HmatFile {
            kind: Some(kind),
            matrix,
        }
    }
}

/// Renders a square matrix with entries in {-1, 0, +1}.
///
/// Panics if the matrix is not square or has other entries; every matrix
/// handed to this function comes out of a verified constructor.
pub fn render(file: &HmatFile) -> String {
    let m = &file.matrix;
    assert!(m.is_square(), "HMAT matrices are square");
    let n = m.rows();
    let mut out = String::with_capacity(n * (n + 1) + 32);
    out.push_str("HMAT 1\n");
    out.push_str(&format!("n {n}\n"));
    if let Some(kind) = file.kind {
        out.push_str(&format!("kind {kind}\n"));
    }
    for i in 0..n {
        for &v in m.row(i) {
            out.push(match v {
                1 => '+',
                -1 => '-',
                0 => '0',
                other => panic!("entry {other} cannot be rendered"),
            });
        }
        out.push('\n');
    }
    out
}

pub fn parse(text: &str) -> Result<HmatFile, ParseError> {
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let (ln, header) = lines.next().unwrap_or((1, ""));
    if header != "HMAT 1" {
        return Err(perr(
            ln,
            1,
            format!("expected header \"HMAT 1\", found {header:?}"),
        ));
    }
    let (ln, size) = lines
        .next()
        .ok_or_else(|| perr(2, 1, "missing size line"))?;
    let n: usize = size
        .strip_prefix("n ")
        .and_then(|v| v.parse().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| perr(ln, 1, format!("expected \"n <order>\", found {size:?}")))?;

    let mut kind = None;
    let mut pending = lines.next();
    if let Some((ln, line)) = pending {
        if let Some(k) = line.strip_prefix("kind ") {
            kind = Some(k.parse::<HmatKind>().map_err(|e| perr(ln, 6, e))?);
            pending = lines.next();
        }
    }

    let zeros_ok = kind == Some(HmatKind::Conference);
    let mut entries = Vec::with_capacity(n * n);
    for row in 0..n {
        let first_row_line = if kind.is_some() { 4 } else { 3 };
        let (ln, line) = pending.ok_or_else(|| {
            perr(
                first_row_line + row,
                1,
                format!("expected {n} rows, found {row}"),
            )
        })?;
        let mut count = 0;
        for (c, ch) in line.chars().enumerate() {
            let v = match ch {
                '+' => 1,
                '-' => -1,
                '0' if zeros_ok => 0,
                '0' => {
                    return Err(perr(
                        ln,
                        c + 1,
                        "zero entry is only legal for kind conference",
                    ))
                }
                other => return Err(perr(ln, c + 1, format!("illegal character {other:?}"))),
            };
            if count == n {
                return Err(perr(ln, c + 1, format!("row longer than {n}")));
            }
            entries.push(v);
            count += 1;
        }
        if count != n {
            return Err(perr(
                ln,
                count + 1,
                format!("row has length {count}, expected {n}"),
            ));
        }
        pending = lines.next();
    }
    // the final newline leaves one empty trailing piece
    match pending {
        Some((_, "")) if lines.next().is_none() => {}
        None => {}
        Some((ln, _)) => return Err(perr(ln, 1, format!("unexpected content after {n} rows"))),
    }
    let matrix = SignMatrix::from_fn(n, n, |i, j| entries[i * n + j]).expect("n >= 1");
    Ok(HmatFile { kind, matrix })
}
