//! Bit-packed +-1 matrices for fast row inner products.
//!
//! Bit 1 encodes -1 and bit 0 encodes +1. Tail bits past `n` in the last
//! word of a row are kept at zero.

use crate::matrix::{MatrixError, SignMatrix};

const WORD_BITS: usize = u64::BITS as usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl PackedMatrix {
    /// Packs a +-1 matrix. Zero entries are rejected.
    pub fn pack(a: &SignMatrix) -> Result<Self, MatrixError> {
        let (rows, cols) = a.shape();
        let words_per_row = cols.div_ceil(WORD_BITS);
        let mut bits = vec![0u64; rows * words_per_row];
        for i in 0..rows {
            let dst = &mut bits[i * words_per_row..(i + 1) * words_per_row];
            for (j, &v) in a.row(i).iter().enumerate() {
                match v {
                    1 => {}
                    -1 => dst[j / WORD_BITS] |= 1u64 << (j % WORD_BITS),
                    0 => return Err(MatrixError::ZeroEntry { row: i, col: j }),
                    value => {
                        return Err(MatrixError::NotSign {
                            row: i,
                            col: j,
                            value,
                        })
                    }
                }
            }
        }
        Ok(PackedMatrix {
            rows,
            cols,
            words_per_row,
            bits,
        })
    }

    pub fn unpack(&self) -> SignMatrix {
        SignMatrix::from_fn(self.rows, self.cols, |i, j| {
            if self.row_words(i)[j / WORD_BITS] >> (j % WORD_BITS) & 1 == 1 {
                -1
            } else {
                1
            }
        })
        .expect("packed matrices are non-empty")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    /// Exact +-1 inner product of rows `i` and `j`: `n - 2 * popcount(xor)`.
    pub fn dot(&self, i: usize, j: usize) -> Result<i64, MatrixError> {
        if i >= self.rows || j >= self.rows {
            return Err(MatrixError::IndexOutOfRange(i, j));
        }
        Ok(self.dot_unchecked(i, j))
    }

    #[inline]
    pub(crate) fn dot_unchecked(&self, i: usize, j: usize) -> i64 {
        let diff: u32 = self
            .row_words(i)
            .iter()
            .zip(self.row_words(j))
            .map(|(a, b)| (a ^ b).count_ones())
            .sum();
        self.cols as i64 - 2 * diff as i64
    }
}
