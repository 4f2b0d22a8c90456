//! Exact linear algebra over GF(2).
//!
//! Dense matrices are bit-packed row-major with word-level XOR; a sparse
//! row-list form with Markowitz-ordered elimination is provided for very
//! sparse operators. Pivoting is always "first nonzero", so echelon forms
//! and kernel bases are reproducible bit for bit.

mod io;
mod matrix;
mod sparse;
mod vector;

pub use io::{from_alist, from_matrix_market, to_alist, to_matrix_market};
pub use matrix::{BitMatrix, RowSpace};
pub use sparse::SparseBitMatrix;
pub use vector::{weight_and_star, BitVector};
