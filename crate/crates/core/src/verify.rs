//! Exact verification with failure witnesses.
//!
//! Row pairs are scanned in lexicographic order `(i, j)` with `i < j`; the
//! witness on failure is always the first failing pair in that order, also
//! when the packed path splits rows across threads.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::field::{is_odd_prime_power, FieldError, PrimePowerField};
use crate::matrix::{MatrixError, SignMatrix};
use crate::packed::PackedMatrix;
use crate::seeds::{conference, q_matrix};

/// Orders at or above this use the bit-packed path.
pub const PACKED_THRESHOLD: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Packed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    NotSquare {
        rows: usize,
        cols: usize,
    },
    /// An entry outside the alphabet the check allows.
    Entry {
        row: usize,
        col: usize,
        value: i32,
    },
    /// Two distinct rows with nonzero inner product.
    RowPair {
        i: usize,
        j: usize,
        dot: i64,
    },
    /// A derived matrix entry (Gram, `H + H^T`) differs from its target.
    Mismatch {
        row: usize,
        col: usize,
        actual: i64,
        expected: i64,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            Witness::Entry { row, col, value } => write!(f, "entry ({row}, {col}) = {value}"),
            Witness::RowPair { i, j, dot } => write!(f, "rows ({i}, {j}) have inner product {dot}"),
            Witness::Mismatch {
                row,
                col,
                actual,
                expected,
            } => write!(f, "entry ({row}, {col}) is {actual}, expected {expected}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationCertificate {
    pub order: usize,
    pub checks: Vec<String>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub elapsed: Duration,
    pub method: Method,
}

impl VerificationCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Equality ignoring the wall-clock field.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.order == other.order
            && self.checks == other.checks
            && self.verdict == other.verdict
            && self.witness == other.witness
    }

    fn finish(
        order: usize,
        checks: Vec<&str>,
        witness: Option<Witness>,
        start: Instant,
        method: Method,
    ) -> Self {
        VerificationCertificate {
            order,
            checks: checks.into_iter().map(String::from).collect(),
            verdict: if witness.is_some() {
                Verdict::Fail
            } else {
                Verdict::Pass
            },
            witness,
            elapsed: start.elapsed(),
            method,
        }
    }
}

impl fmt::Display for VerificationCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} order={} checks=[{}] method={:?}",
            self.verdict,
            self.order,
            self.checks.join(", "),
            self.method
        )?;
        if let Some(w) = &self.witness {
            write!(f, " witness: {w}")?;
        }
        Ok(())
    }
}

fn first_non_pm(h: &SignMatrix) -> Option<Witness> {
    h.first_non_sign()
        .map(|(row, col, value)| Witness::Entry { row, col, value })
}

fn dense_first_pair(h: &SignMatrix) -> Option<Witness> {
    let n = h.rows();
    for i in 0..n {
        for j in i + 1..n {
            let dot: i64 = h
                .row(i)
                .iter()
                .zip(h.row(j))
                .map(|(a, b)| (*a as i64) * (*b as i64))
                .sum();
            if dot != 0 {
                return Some(Witness::RowPair { i, j, dot });
            }
        }
    }
    None
}

fn packed_first_pair(p: &PackedMatrix) -> Option<Witness> {
    let n = p.rows();
    (0..n).into_par_iter().find_map_first(|i| {
        (i + 1..n).find_map(|j| {
            let dot = p.dot_unchecked(i, j);
            (dot != 0).then_some(Witness::RowPair { i, j, dot })
        })
    })
}

/// Checks `H H^T = n I` for a +-1 matrix, choosing the path by order.
pub fn is_hadamard(h: &SignMatrix) -> VerificationCertificate {
    let method = if h.rows() >= PACKED_THRESHOLD {
        Method::Packed
    } else {
        Method::Dense
    };
    is_hadamard_with(h, method)
}

pub fn is_hadamard_with(h: &SignMatrix, method: Method) -> VerificationCertificate {
    let start = Instant::now();
    let checks = vec!["square", "entries +-1", "rows pairwise orthogonal"];
    if !h.is_square() {
        let w = Witness::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        };
        return VerificationCertificate::finish(h.rows(), checks, Some(w), start, method);
    }
    let witness = first_non_pm(h).or_else(|| match method {
        Method::Dense => dense_first_pair(h),
        Method::Packed => {
            let p = PackedMatrix::pack(h).expect("entries already checked to be +-1");
            packed_first_pair(&p)
        }
    });
    VerificationCertificate::finish(h.rows(), checks, witness, start, method)
}

/// Hadamard and `H + H^T = 2I`.
pub fn is_skew_hadamard(h: &SignMatrix) -> VerificationCertificate {
    let mut cert = is_hadamard(h);
    let start = Instant::now();
    cert.checks.push("H + H^T = 2I".to_string());
    if cert.passed() {
        let n = h.rows();
        'scan: for i in 0..n {
            for j in i..n {
                let actual = h.get(i, j) as i64 + h.get(j, i) as i64;
                let expected = if i == j { 2 } else { 0 };
                if actual != expected {
                    cert.witness = Some(Witness::Mismatch {
                        row: i,
                        col: j,
                        actual,
                        expected,
                    });
                    cert.verdict = Verdict::Fail;
                    break 'scan;
                }
            }
        }
    }
    cert.elapsed += start.elapsed();
    cert
}

pub fn is_symmetric(h: &SignMatrix) -> bool {
    h.is_symmetric()
}

/// Zero diagonal, +-1 off the diagonal, and `C C^T = qI - J`.
pub fn is_conference_core(c: &SignMatrix, q: usize) -> VerificationCertificate {
    let start = Instant::now();
    let checks = vec![
        "square of order q",
        "zero diagonal",
        "off-diagonal +-1",
        "C C^T = qI - J",
    ];
    if c.shape() != (q, q) {
        let w = Witness::NotSquare {
            rows: c.rows(),
            cols: c.cols(),
        };
        return VerificationCertificate::finish(c.rows(), checks, Some(w), start, Method::Dense);
    }
    let mut witness = None;
    'entries: for i in 0..q {
        for j in 0..q {
            let v = c.get(i, j);
            let ok = if i == j { v == 0 } else { v == 1 || v == -1 };
            if !ok {
                witness = Some(Witness::Entry {
                    row: i,
                    col: j,
                    value: v,
                });
                break 'entries;
            }
        }
    }
    if witness.is_none() {
        'gram: for i in 0..q {
            for j in i..q {
                let actual: i64 = c
                    .row(i)
                    .iter()
                    .zip(c.row(j))
                    .map(|(a, b)| (*a as i64) * (*b as i64))
                    .sum();
                let expected = if i == j { q as i64 - 1 } else { -1 };
                if actual != expected {
                    witness = Some(Witness::Mismatch {
                        row: i,
                        col: j,
                        actual,
                        expected,
                    });
                    break 'gram;
                }
            }
        }
    }
    VerificationCertificate::finish(q, checks, witness, start, Method::Dense)
}

/// First entry (row-major) where `actual` differs from `expected`.
pub fn first_difference(actual: &SignMatrix, expected: &SignMatrix) -> Option<Witness> {
    if actual.shape() != expected.shape() {
        return Some(Witness::NotSquare {
            rows: actual.rows(),
            cols: actual.cols(),
        });
    }
    actual
        .entries()
        .iter()
        .zip(expected.entries())
        .position(|(a, b)| a != b)
        .map(|k| Witness::Mismatch {
            row: k / actual.cols(),
            col: k % actual.cols(),
            actual: actual.entries()[k] as i64,
            expected: expected.entries()[k] as i64,
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub status: CheckStatus,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub q: u32,
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.status)
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "identity checks for q = {}", self.q)?;
        for c in &self.checks {
            write!(f, "  {:<8} {}", c.status.to_string(), c.name)?;
            if let Some(note) = &c.note {
                write!(f, "  ({note})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PropertyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Seed(#[from] crate::seeds::SeedError),
    #[error("q = {0} must be an odd prime power no larger than 49")]
    Unsupported(u32),
}

pub const PROPERTY_Q_MAX: u32 = 49;

/// Runs the conference-matrix, Q/J/I commutation and back-diagonal identities for GF(q).
pub fn property_suite(q: u32) -> Result<PropertyReport, PropertyError> {
    if !is_odd_prime_power(q) || q > PROPERTY_Q_MAX {
        return Err(PropertyError::Unsupported(q));
    }
    let field = PrimePowerField::of_order(q)?;
    let conf = conference(&field)?;
    let n = q as usize;
    let c = &conf.matrix;
    let qm = q_matrix(&conf);
    let qt = qm.transpose();
    let j = SignMatrix::all_ones(n)?;
    let i = SignMatrix::identity(n)?;
    let r = SignMatrix::back_diagonal(n)?;
    let p = j.sub(&i.scale(2)?)?;

    let mut checks = Vec::new();
    let mut push = |name, ok: bool| {
        checks.push(PropertyCheck {
            name,
            status: if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            note: None,
        })
    };

    let expected_gram = i.scale(q as i32)?.sub(&j)?;
    push("C C^T = qI - J", c.gram()? == expected_gram);
    let sym_ok = if q % 4 == 1 {
        c.is_symmetric()
    } else {
        c.is_skew_symmetric()
    };
    push("C symmetric iff q = 1 mod 4, skew iff q = 3 mod 4", sym_ok);
    push(
        "row and column sums of C are 0",
        c.row_sums().iter().chain(&c.col_sums()).all(|&s| s == 0),
    );
    push(
        "row and column sums of Q are 1",
        qm.row_sums().iter().chain(&qm.col_sums()).all(|&s| s == 1),
    );
    push(
        "J Q^T = Q^T J = J",
        j.matmul(&qt)? == j && qt.matmul(&j)? == j,
    );
    push("Q J = J Q = J", qm.matmul(&j)? == j && j.matmul(&qm)? == j);
    push("Q (J - 2I) = (J - 2I) Q", qm.matmul(&p)? == p.matmul(&qm)?);
    push(
        "Q^T (J - 2I) = (J - 2I) Q^T",
        qt.matmul(&p)? == p.matmul(&qt)?,
    );
    push("R^T R = I", r.transpose().matmul(&r)? == i);

    if conf.circulant {
        push("Q R symmetric (circulant C)", qm.matmul(&r)?.is_symmetric());
    } else {
        checks.push(PropertyCheck {
            name: "Q R symmetric (circulant C)",
            status: CheckStatus::Skipped,
            note: Some("conference matrix is not circulant in the canonical ordering".into()),
        });
    }
    Ok(PropertyReport { q, checks })
}
