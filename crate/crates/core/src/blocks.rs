//! The 2q x 2q block matrices `M` and `N` and the bounded variant family.
//!
//! A [`BlockSpec`] is a symbolic 2x2 grid of signed atoms. Its text form is
//! `[[+P,+Q],[-Q,+P]]` with atoms
//!
//! | token | q x q matrix |
//! |-------|--------------|
//! | `J`   | all ones     |
//! | `P`   | `J - 2I`     |
//! | `Q`   | `C + I`      |
//! | `Qt`  | `(C + I)^T`  |
//! | `Qb`  | `I - C`      |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{MatrixError, SignMatrix};
use crate::seeds::{q_matrix, ConferenceMatrix, Symmetry};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlockError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("{what} needs a {expected:?} conference matrix, got {got:?}")]
    SymmetryMismatch {
        what: &'static str,
        expected: Symmetry,
        got: Symmetry,
    },
    #[error("cannot parse block grid {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("case {0} has no A/B form")]
    NoPairForm(NCase),
    #[error("realized block grid has entry {value} at ({row}, {col})")]
    NotPm { row: usize, col: usize, value: i32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AtomBase {
    J,
    P,
    Q,
    Qt,
    Qb,
}

impl AtomBase {
    fn token(self) -> &'static str {
        match self {
            AtomBase::J => "J",
            AtomBase::P => "P",
            AtomBase::Q => "Q",
            AtomBase::Qt => "Qt",
            AtomBase::Qb => "Qb",
        }
    }

    fn from_token(s: &str) -> Option<Self> {
        Some(match s {
            "J" => AtomBase::J,
            "P" => AtomBase::P,
            "Q" => AtomBase::Q,
            "Qt" => AtomBase::Qt,
            "Qb" => AtomBase::Qb,
            _ => return None,
        })
    }

    /// `Q <-> Qt`; other bases have no transpose toggle.
    fn toggled(self) -> Option<Self> {
        match self {
            AtomBase::Q => Some(AtomBase::Qt),
            AtomBase::Qt => Some(AtomBase::Q),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockAtom {
    pub base: AtomBase,
    /// +1 or -1.
    pub sign: i8,
}

impl BlockAtom {
    pub const fn pos(base: AtomBase) -> Self {
        BlockAtom { base, sign: 1 }
    }

    pub const fn neg(base: AtomBase) -> Self {
        BlockAtom { base, sign: -1 }
    }

    pub fn flipped(self) -> Self {
        BlockAtom {
            sign: -self.sign,
            ..self
        }
    }
}

impl fmt::Display for BlockAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { '-' } else { '+' };
        write!(f, "{s}{}", self.base.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockSpec {
    pub grid: [[BlockAtom; 2]; 2],
    pub label: String,
}

impl BlockSpec {
    pub fn new(grid: [[BlockAtom; 2]; 2], label: impl Into<String>) -> Self {
        BlockSpec {
            grid,
            label: label.into(),
        }
    }

    /// Canonical text encoding, e.g. `[[+P,+Q],[-Q,+P]]`.
    pub fn encoding(&self) -> String {
        let g = &self.grid;
        format!("[[{},{}],[{},{}]]", g[0][0], g[0][1], g[1][0], g[1][1])
    }

    pub fn cells(&self) -> impl Iterator<Item = BlockAtom> + '_ {
        self.grid.iter().flatten().copied()
    }

    /// Same grid, new label.
    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

impl fmt::Display for BlockSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

impl FromStr for BlockSpec {
    type Err = BlockError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| BlockError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix("[[")
            .and_then(|s| s.strip_suffix("]]"))
            .ok_or_else(|| err("expected [[a,b],[c,d]]"))?;
        let rows: Vec<&str> = inner.split("],[").collect();
        if rows.len() != 2 {
            return Err(err("expected two rows"));
        }
        let mut grid = [[BlockAtom::pos(AtomBase::J); 2]; 2];
        for (r, row) in rows.iter().enumerate() {
            let cells: Vec<&str> = row.split(',').collect();
            if cells.len() != 2 {
                return Err(err("expected two cells per row"));
            }
            for (c, cell) in cells.iter().enumerate() {
                let (sign, token) = match cell.chars().next() {
                    Some('+') => (1, &cell[1..]),
                    Some('-') => (-1, &cell[1..]),
                    _ => (1, *cell),
                };
                let base = AtomBase::from_token(token)
                    .ok_or_else(|| err(&format!("unknown atom {token:?}")))?;
                grid[r][c] = BlockAtom { base, sign };
            }
        }
        Ok(BlockSpec::new(grid, "custom"))
    }
}

/// The q x q matrices the atoms stand for, built once per conference matrix.
pub struct AtomTable {
    j: SignMatrix,
    p: SignMatrix,
    q: SignMatrix,
    qt: SignMatrix,
    qb: SignMatrix,
}

impl AtomTable {
    pub fn new(c: &ConferenceMatrix) -> Result<Self, MatrixError> {
        let n = c.q;
        let i = SignMatrix::identity(n)?;
        let j = SignMatrix::all_ones(n)?;
        let p = j.sub(&i.scale(2)?)?;
        let q = q_matrix(c);
        let qt = q.transpose();
        let qb = i.sub(&c.matrix)?;
        Ok(AtomTable { j, p, q, qt, qb })
    }

    pub fn base(&self, base: AtomBase) -> &SignMatrix {
        match base {
            AtomBase::J => &self.j,
            AtomBase::P => &self.p,
            AtomBase::Q => &self.q,
            AtomBase::Qt => &self.qt,
            AtomBase::Qb => &self.qb,
        }
    }

    pub fn realize(&self, spec: &BlockSpec) -> Result<SignMatrix, BlockError> {
        let n = self.j.rows();
        let out = SignMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let atom = spec.grid[i / n][j / n];
            atom.sign as i32 * self.base(atom.base).get(i % n, j % n)
        })?;
        if let Some((row, col, value)) = out.first_non_sign() {
            return Err(BlockError::NotPm { row, col, value });
        }
        Ok(out)
    }
}

/// Expands each atom to its q x q matrix and assembles the 2q x 2q grid.
pub fn realize_block(spec: &BlockSpec, c: &ConferenceMatrix) -> Result<SignMatrix, BlockError> {
    AtomTable::new(c)?.realize(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MKind {
    /// `[[Q, Q], [Q, -Q]]`, for skew-symmetric `C`.
    CaseA,
    /// `[[C + I, -C + I], [-C + I, -C - I]]`, for symmetric `C`.
    CaseB,
}

impl MKind {
    pub fn spec(self) -> BlockSpec {
        use AtomBase::*;
        match self {
            MKind::CaseA => BlockSpec::new(
                [
                    [BlockAtom::pos(Q), BlockAtom::pos(Q)],
                    [BlockAtom::pos(Q), BlockAtom::neg(Q)],
                ],
                "M-case-A",
            ),
            MKind::CaseB => BlockSpec::new(
                [
                    [BlockAtom::pos(Q), BlockAtom::pos(Qb)],
                    [BlockAtom::pos(Qb), BlockAtom::neg(Q)],
                ],
                "M-case-B",
            ),
        }
    }

    pub fn required_symmetry(self) -> Symmetry {
        match self {
            MKind::CaseA => Symmetry::SkewSymmetric,
            MKind::CaseB => Symmetry::Symmetric,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MKind::CaseA => "case-A",
            MKind::CaseB => "case-B",
        }
    }
}

fn check_symmetry(kind: MKind, c: &ConferenceMatrix) -> Result<(), BlockError> {
    let expected = kind.required_symmetry();
    if c.symmetry != expected {
        return Err(BlockError::SymmetryMismatch {
            what: kind.name(),
            expected,
            got: c.symmetry,
        });
    }
    Ok(())
}

/// `M = [[Q, Q], [Q, -Q]]`; requires a skew-symmetric conference matrix.
pub fn m_case_a(c: &ConferenceMatrix) -> Result<SignMatrix, BlockError> {
    check_symmetry(MKind::CaseA, c)?;
    realize_block(&MKind::CaseA.spec(), c)
}

/// `M = [[C + I, -C + I], [-C + I, -C - I]]`; requires a symmetric conference matrix.
pub fn m_case_b(c: &ConferenceMatrix) -> Result<SignMatrix, BlockError> {
    check_symmetry(MKind::CaseB, c)?;
    realize_block(&MKind::CaseB.spec(), c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NCase {
    I,
    II,
    III,
    IV,
}

impl fmt::Display for NCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NCase::I => "I",
            NCase::II => "II",
            NCase::III => "III",
            NCase::IV => "IV",
        })
    }
}

impl NCase {
    /// `(A, B)` of `N = K2 (x) A + I2 (x) B`, where defined.
    pub fn pair(self) -> Option<(AtomBase, AtomBase)> {
        match self {
            NCase::I => Some((AtomBase::P, AtomBase::J)),
            NCase::II => Some((AtomBase::J, AtomBase::Q)),
            NCase::III => Some((AtomBase::P, AtomBase::Q)),
            NCase::IV => None,
        }
    }

    /// `(alpha, beta)` of the claimed Gram matrix `I2 (x) (alpha J + beta I)`.
    pub fn gram_coefficients(self, q: i64) -> (i64, i64) {
        match self {
            NCase::I => (2 * q - 4, 4),
            NCase::II => (q - 1, q + 1),
            NCase::III => (q - 5, q + 5),
            NCase::IV => (2 * q - 8, 8),
        }
    }
}

/// `N` as written in the theorem statements.
pub fn n_printed(case: NCase) -> BlockSpec {
    use AtomBase::*;
    let (grid, label) = match case {
        NCase::I => (
            [
                [BlockAtom::pos(P), BlockAtom::pos(J)],
                [BlockAtom::neg(J), BlockAtom::pos(P)],
            ],
            "case-I-printed",
        ),
        NCase::II => (
            [
                [BlockAtom::pos(J), BlockAtom::pos(Q)],
                [BlockAtom::neg(Q), BlockAtom::pos(J)],
            ],
            "case-II-printed",
        ),
        NCase::III => (
            [
                [BlockAtom::pos(P), BlockAtom::pos(Q)],
                [BlockAtom::neg(Q), BlockAtom::pos(P)],
            ],
            "case-III-printed",
        ),
        NCase::IV => (
            [
                [BlockAtom::pos(P), BlockAtom::pos(P)],
                [BlockAtom::pos(P), BlockAtom::neg(P)],
            ],
            "case-IV-printed",
        ),
    };
    BlockSpec::new(grid, label)
}

/// `N = K2 (x) A + I2 (x) B = [[B, A], [-A, B]]` for the case's `(A, B)`.
pub fn n_eq4(case: NCase) -> Result<BlockSpec, BlockError> {
    let (a, b) = case.pair().ok_or(BlockError::NoPairForm(case))?;
    Ok(BlockSpec::new(
        [
            [BlockAtom::pos(b), BlockAtom::pos(a)],
            [BlockAtom::neg(a), BlockAtom::pos(b)],
        ],
        format!("case-{case}-pair-form"),
    ))
}

/// The claimed `N N^T = I2 (x) (alpha J_q + beta I_q)` as an explicit matrix.
pub fn gram_claim(case: NCase, q: usize) -> Result<SignMatrix, MatrixError> {
    let (alpha, beta) = case.gram_coefficients(q as i64);
    let (alpha, beta) = (
        i32::try_from(alpha).map_err(|_| MatrixError::Overflow("gram_claim"))?,
        i32::try_from(beta).map_err(|_| MatrixError::Overflow("gram_claim"))?,
    );
    SignMatrix::from_fn(2 * q, 2 * q, |i, j| {
        if i / q != j / q {
            0
        } else {
            alpha + if i == j { beta } else { 0 }
        }
    })
}

/// `K2 (x) A + I2 (x) B` for arbitrary square `A`, `B`.
pub fn n_from_pair(a: &SignMatrix, b: &SignMatrix) -> Result<SignMatrix, MatrixError> {
    let k2 = SignMatrix::rotation2();
    let i2 = SignMatrix::identity(2)?;
    k2.kron(a)?.add(&i2.kron(b)?)
}

/// `I2 (x) (A A^T + B B^T) + K2 (x) (A B^T - B A^T)`.
pub fn pair_gram_expansion(a: &SignMatrix, b: &SignMatrix) -> Result<SignMatrix, MatrixError> {
    let k2 = SignMatrix::rotation2();
    let i2 = SignMatrix::identity(2)?;
    let diag = a.gram()?.add(&b.gram()?)?;
    let cross = a.matmul(&b.transpose())?.sub(&b.matmul(&a.transpose())?)?;
    i2.kron(&diag)?.add(&k2.kron(&cross)?)
}

/// The toggle flags of the variant family, in emission order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flag {
    Sign(usize),
    Transpose(usize),
    Swap,
}

/// Every grid reachable from `base` by per-cell sign flips, per-cell
/// `Q <-> Qt` toggles on `Q`/`Qt` cells, and swapping the two block columns.
///
/// The flags are listed cell-major (row-major cells), each cell's sign flag
/// before its transpose flag, with the column swap last. Variant `k` applies
/// the flags whose bit is set in `k`, with the first listed flag as the most
/// significant bit, so variant 0 is `base` itself and variants come in
/// unswapped/swapped pairs. Size: `2^(4 + t + 1)` for `t` toggleable cells.
pub fn enumerate_variants(base: &BlockSpec) -> Vec<BlockSpec> {
    let mut flags = Vec::new();
    for (cell, atom) in base.cells().enumerate() {
        flags.push(Flag::Sign(cell));
        if atom.base.toggled().is_some() {
            flags.push(Flag::Transpose(cell));
        }
    }
    flags.push(Flag::Swap);
    enumerate_flags(base, &flags, "variant")
}

/// `Q <-> Qt` toggles only, for crossing the `M` grid into the search.
pub fn enumerate_transpose_variants(base: &BlockSpec) -> Vec<BlockSpec> {
    let flags: Vec<Flag> = base
        .cells()
        .enumerate()
        .filter(|(_, a)| a.base.toggled().is_some())
        .map(|(cell, _)| Flag::Transpose(cell))
        .collect();
    enumerate_flags(base, &flags, "m-variant")
}

fn enumerate_flags(base: &BlockSpec, flags: &[Flag], prefix: &str) -> Vec<BlockSpec> {
    let count = 1usize << flags.len();
    (0..count)
        .map(|k| {
            let mut grid = base.grid;
            let mut swap = false;
            for (pos, flag) in flags.iter().enumerate() {
                if k >> (flags.len() - 1 - pos) & 1 == 0 {
                    continue;
                }
                match *flag {
                    Flag::Sign(cell) => {
                        let a = &mut grid[cell / 2][cell % 2];
                        *a = a.flipped();
                    }
                    Flag::Transpose(cell) => {
                        let a = &mut grid[cell / 2][cell % 2];
                        a.base = a.base.toggled().expect("toggle flag only on Q cells");
                    }
                    Flag::Swap => swap = true,
                }
            }
            if swap {
                for row in grid.iter_mut() {
                    row.swap(0, 1);
                }
            }
            let label = if k == 0 {
                base.label.clone()
            } else {
                format!("{prefix}-{k}")
            };
            BlockSpec::new(grid, label)
        })
        .collect()
}
