//! Exact combinatorial geometry of Grassmann and ortho-Grassmann graphs
//! over finite-dimensional complex coordinate spaces.
//!
//! All arithmetic happens in the field of Gaussian rationals, so every
//! predicate in the library — rank, commutativity of projections,
//! intersection dimension — is decided exactly, with no tolerances.

pub mod conjclass;
pub mod dim4;
pub mod error;
pub mod gen;
pub mod grassmann;
pub mod matrix;
pub mod orthograph;
pub mod scalar;
pub mod subspace;

pub use error::{Error, Result};
pub use matrix::ExactMatrix;
pub use scalar::GaussianRational;
pub use subspace::{AngleSignature, OrthoBasis, Subspace};
