//! Exact linear algebra over `F_ell` and `Q`.

mod complex;
mod field;
mod matrix;

pub use complex::{homology_dims, FiniteChainComplex};
pub use field::{is_prime, FieldSpec, Scalar};
pub use matrix::{intersect_subspaces, kernel_basis, rank, rank_of_rows, Echelon, Matrix, SparseVec};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error("characteristic {0} is neither 0 nor a prime")]
    BadCharacteristic(u64),
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("d_{p} o d_{q} is nonzero", p = .0 - 1, q = .0)]
    NotAComplex(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
}
