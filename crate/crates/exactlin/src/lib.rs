//! Exact linear algebra over Q.
//!
//! [`Rational`] scalars, dense [`Matrix`] values, fraction-free reduced row
//! echelon forms ([`rref`], [`RowReducer`]) and [`Subspace`], a subspace of
//! Qⁿ stored in canonical form so that equality of subspaces is structural.

mod elim;
mod error;
mod matrix;
mod rational;
mod subspace;

pub use elim::{pivot_columns, rank, rref, RowReducer, Rref, SparseRow};
pub use error::{ParseRationalError, ShapeError};
pub use matrix::Matrix;
pub use rational::{q, Rational};
pub use subspace::{nullspace, unit, Subspace};

/// Dense vector of rationals.
pub type Vector = Vec<Rational>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_zero)
}
