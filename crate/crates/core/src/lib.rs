//! Exact construction and verification of Hadamard matrices of order
//! `2q(s + 1)` assembled as `S (x) M + I (x) N`, where `S` is the skew part
//! of a skew Hadamard matrix and `M`, `N` are 2x2 grids of blocks built from
//! a quadratic-character conference matrix of order `q`.
//!
//! All arithmetic is exact integer arithmetic; verification reports the first
//! failing row pair instead of trusting any closed form.

pub mod blocks;
pub mod catalog;
pub mod field;
pub mod hmat;
pub mod manifest;
pub mod matrix;
pub mod packed;
pub mod seeds;
pub mod theorem;
pub mod verify;

pub use field::{FieldElement, PrimePowerField};
pub use matrix::SignMatrix;
pub use packed::PackedMatrix;
