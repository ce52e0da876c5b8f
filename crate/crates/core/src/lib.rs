//! Finite quandles, their enveloping groups, and exact representation theory
//! over cyclotomic fields.
//!
//! The exact backend ([`scalar::Cyclo`]) decides irreducibility, complete
//! reducibility, unitarizability and equivalence without rounding; the
//! approximate backend ([`scalar::ApproxComplex`]) is used for numerical
//! decomposition into irreducible blocks.

pub mod envgroup;
pub mod matrix;
pub mod qnm;
pub mod quandle;
pub mod rep;
pub mod scalar;

pub use matrix::{Matrix, MatrixError, Polynomial};
pub use quandle::{PermGroup, Permutation, Quandle, QuandleError};
pub use scalar::{ApproxComplex, Cyclo, Rational, Scalar};
pub use rep::{Character, Gram, RepError, Representation};
