//! Dense exact integer matrices.
//!
//! Construction-facing matrices hold entries in {-1, 0, +1}; products such as
//! Gram matrices reuse the same type with arbitrary small integers. All
//! arithmetic is checked and overflow is reported, never wrapped.

use std::fmt;

use thiserror::Error;

/// Largest order the Kronecker product will build.
pub const MAX_ORDER: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("result dimension {0} exceeds the cap of {MAX_ORDER}")]
    TooLarge(usize),
    #[error("entry ({row}, {col}) is 0; packed form needs a +-1 matrix")]
    ZeroEntry { row: usize, col: usize },
    #[error("entry ({row}, {col}) = {value} is not a sign")]
    NotSign { row: usize, col: usize, value: i32 },
    #[error("row {row} has length {len}, expected {expected}")]
    RaggedRows {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("index ({0}, {1}) out of range")]
    IndexOutOfRange(usize, usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i32>,
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SignMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl SignMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyDimension);
        }
        Ok(SignMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> i32,
    ) -> Result<Self, MatrixError> {
        let mut m = Self::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                m.entries[i * cols + j] = f(i, j);
            }
        }
        Ok(m)
    }

    pub fn from_rows<R: AsRef<[i32]>>(rows: &[R]) -> Result<Self, MatrixError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut m = Self::zeros(n_rows, n_cols)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(MatrixError::RaggedRows {
                    row: i,
                    len: row.len(),
                    expected: n_cols,
                });
            }
            m.entries[i * n_cols..(i + 1) * n_cols].copy_from_slice(row);
        }
        Ok(m)
    }

    /// I_n.
    pub fn identity(n: usize) -> Result<Self, MatrixError> {
        Self::from_fn(n, n, |i, j| (i == j) as i32)
    }

    /// J_n, the all-ones matrix.
    pub fn all_ones(n: usize) -> Result<Self, MatrixError> {
        Self::from_fn(n, n, |_, _| 1)
    }

    /// R_n with ones on the back diagonal.
    pub fn back_diagonal(n: usize) -> Result<Self, MatrixError> {
        Self::from_fn(n, n, |i, j| (i + j == n - 1) as i32)
    }

    /// K_2 = [[0, 1], [-1, 0]].
    pub fn rotation2() -> Self {
        SignMatrix {
            rows: 2,
            cols: 2,
            entries: vec![0, 1, -1, 0],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.entries[i * self.cols + j]
    }

    pub fn try_get(&self, i: usize, j: usize) -> Result<i32, MatrixError> {
        if i >= self.rows || j >= self.cols {
            return Err(MatrixError::IndexOutOfRange(i, j));
        }
        Ok(self.get(i, j))
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i32) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[i32] {
        &self.entries
    }

    /// True when every entry is -1, 0 or +1.
    pub fn is_ternary(&self) -> bool {
        self.entries.iter().all(|v| (-1..=1).contains(v))
    }

    /// True when every entry is -1 or +1.
    pub fn is_pm_one(&self) -> bool {
        self.entries.iter().all(|&v| v == 1 || v == -1)
    }

    /// First entry (row-major) outside {-1, +1}.
    pub fn first_non_sign(&self) -> Option<(usize, usize, i32)> {
        self.entries
            .iter()
            .position(|&v| v != 1 && v != -1)
            .map(|k| (k / self.cols, k % self.cols, self.entries[k]))
    }

    pub fn transpose(&self) -> Self {
        let mut out = SignMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: vec![0; self.entries.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<(), MatrixError> {
        if self.shape() != other.shape() {
            return Err(MatrixError::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_shape(other, "add")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_add(*b).ok_or(MatrixError::Overflow("add")))
            .collect::<Result<_, _>>()?;
        Ok(SignMatrix { entries, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_shape(other, "sub")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_sub(*b).ok_or(MatrixError::Overflow("sub")))
            .collect::<Result<_, _>>()?;
        Ok(SignMatrix { entries, ..*self })
    }

    pub fn scale(&self, k: i32) -> Result<Self, MatrixError> {
        let entries = self
            .entries
            .iter()
            .map(|a| a.checked_mul(k).ok_or(MatrixError::Overflow("scale")))
            .collect::<Result<_, _>>()?;
        Ok(SignMatrix { entries, ..*self })
    }

    pub fn negate(&self) -> Self {
        SignMatrix {
            entries: self.entries.iter().map(|a| -a).collect(),
            ..*self
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let bt = other.transpose();
        let mut out = SignMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: vec![0; self.rows * other.cols],
        };
        for i in 0..self.rows {
            let a = self.row(i);
            for j in 0..other.cols {
                let b = bt.row(j);
                let mut acc = 0i64;
                for (x, y) in a.iter().zip(b) {
                    acc += *x as i64 * *y as i64;
                }
                out.entries[i * other.cols + j] =
                    i32::try_from(acc).map_err(|_| MatrixError::Overflow("matmul"))?;
            }
        }
        Ok(out)
    }

    /// `self * self^T`.
    pub fn gram(&self) -> Result<Self, MatrixError> {
        self.matmul(&self.transpose())
    }

    /// Kronecker product; block (i, j) of the result is `self[i][j] * other`.
    pub fn kron(&self, other: &Self) -> Result<Self, MatrixError> {
        let rows = self
            .rows
            .checked_mul(other.rows)
            .ok_or(MatrixError::TooLarge(usize::MAX))?;
        let cols = self
            .cols
            .checked_mul(other.cols)
            .ok_or(MatrixError::TooLarge(usize::MAX))?;
        if rows > MAX_ORDER || cols > MAX_ORDER {
            return Err(MatrixError::TooLarge(rows.max(cols)));
        }
        let mut out = SignMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        };
        for bi in 0..self.rows {
            for bj in 0..self.cols {
                let a = self.get(bi, bj);
                if a == 0 {
                    continue;
                }
                for i in 0..other.rows {
                    let dst = (bi * other.rows + i) * cols + bj * other.cols;
                    for (d, b) in out.entries[dst..dst + other.cols]
                        .iter_mut()
                        .zip(other.row(i))
                    {
                        *d = a.checked_mul(*b).ok_or(MatrixError::Overflow("kron"))?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Assembles a 2x2 grid of equally-sized square blocks.
    pub fn block2(blocks: [[&SignMatrix; 2]; 2]) -> Result<Self, MatrixError> {
        let n = blocks[0][0].rows;
        for row in &blocks {
            for b in row {
                if b.shape() != (n, n) {
                    return Err(MatrixError::ShapeMismatch {
                        op: "block2",
                        left: (n, n),
                        right: b.shape(),
                    });
                }
            }
        }
        Self::from_fn(2 * n, 2 * n, |i, j| blocks[i / n][j / n].get(i % n, j % n))
    }

    /// The `n x n` submatrix starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, n: usize) -> Result<Self, MatrixError> {
        if r0 + n > self.rows || c0 + n > self.cols {
            return Err(MatrixError::IndexOutOfRange(r0 + n, c0 + n));
        }
        Self::from_fn(n, n, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..=i).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    /// Each row is the previous row shifted cyclically one place to the right.
    pub fn is_circulant(&self) -> bool {
        let n = self.rows;
        self.is_square()
            && (0..n).all(|i| (0..n).all(|j| self.get(i, j) == self.get(0, (j + n - i) % n)))
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&v| v as i64).sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.cols];
        for i in 0..self.rows {
            for (o, &v) in out.iter_mut().zip(self.row(i)) {
                *o += v as i64;
            }
        }
        out
    }
}
