//! Exact scalars, small matrices and sparse multivariate polynomials.

pub mod cyclotomic;
pub mod matrix;
pub mod poly;
pub mod scalar;

pub use cyclotomic::Cyclotomic;
pub use matrix::Matrix;
pub use poly::{monomials_up_to, random_sparse, LinearForm, Monomial, MultiPoly};
pub use scalar::{Scalar, ScalarKind};
