//! Semi-associative 3-algebras over the rationals.
//!
//! A semi-associative 3-algebra is a vector space with a trilinear product
//! `{x, y, z}` that is antisymmetric in its first two arguments and obeys
//!
//! ```text
//! {x1, {x2, x3, x4}, x5} = {x1, x2, {x3, x4, x5}}
//! {x1, {x2, x3, x4}, x5} = {x5, {x2, x3, x4}, x1} + {x1, {x5, x3, x4}, x2}
//! ```
//!
//! Everything is computed exactly from structure constants.

pub mod algebra;
pub mod catalog;
pub mod cocycle;
pub mod error;
pub mod json;
pub mod lab;
pub mod lie;
pub mod maps;
pub mod module;
pub mod report;
pub mod sparse;
pub mod structure;

pub use algebra::{ThreeAlgebra, MAX_DIM};
pub use error::{Error, Result};
pub use report::{AxiomReport, Violation};
pub use structure::AlgebraMorphism;
