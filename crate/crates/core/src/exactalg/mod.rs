//! Exact arithmetic: rationals and one simple number field, polynomials,
//! truncated power series and dense matrices.

pub mod matrix;
pub mod poly;
pub mod qpoly;
pub mod scalar;
pub mod series;
pub mod upoly;

pub use matrix::{eval_poly_at_matrices, ExactMatrix};
pub use poly::Poly;
pub use qpoly::Rational;
pub use scalar::{NumberField, Scalar};
pub use series::{Order, Series};
pub use upoly::UPoly;
