//! Exact computer algebra for deciding orbifold equivalence of
//! quasi-homogeneous potentials.

pub mod ansatz;
pub mod equations;
pub mod error;
pub mod feasibility;
pub mod groebner;
pub mod matrix;
pub mod mf;
pub mod residue;
pub mod ring;
pub mod scalar;

#[cfg(test)]
mod testutil;

pub use error::Error;
pub use scalar::{Field, Rational};

/// Polynomial with arbitrary-precision rational coefficients.
pub type Poly = ring::Polynomial<Rational>;
