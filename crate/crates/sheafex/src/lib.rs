//! Weighted simplicial complexes, augmented sheaves on graphs, and exact
//! computation of spectral, Cheeger and coboundary expansion constants.
//!
//! Weights are exact rationals throughout; floating point enters only in
//! the eigensolver. The vertex-function operators are generic over
//! [`Scalar`], the eigensolver over [`Real`].

pub mod buildings;
pub mod catalog;
pub mod codes;
pub mod cohomology;
pub mod complex;
pub mod error;
pub mod ff;
pub mod linalg;
pub mod rng;
pub mod scalar;
pub mod sheaf;
pub mod spectral;
pub mod suite;

pub use error::{Error, Result};
pub use scalar::{Rational, Real, Scalar};
