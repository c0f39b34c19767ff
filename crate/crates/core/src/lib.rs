//! Newton-polyhedron invariants, monomializing chart atlases, a recursive
//! chart-tree resolution engine, and numerical / number-theoretic growth
//! experiments for multivariate polynomials.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`]: exact sparse polynomials over the rationals, truncated power
//!   series, evaluation over `f64`, `Complex<f64>` and `Z/p^l`.
//! * [`geometry`]: the Newton polyhedron, its compact faces, the Newton
//!   distance, the central face, zero orders of face polynomials and the
//!   resulting growth prediction.
//! * [`fan`]: normal cones, simplicial refinement and the chart atlas of
//!   invertible monomial maps.
//! * [`resolution`]: the recursive chart tree (rotations, quasitranslations,
//!   sub-resolutions, fan charts, localizations) with numeric leaf
//!   certificates.
//! * [`harness`]: divisibility counting mod `p^l`, exponential sums,
//!   sublevel-set volumes, oscillatory integrals and exponent fitting.

pub mod certificate;
pub mod error;
pub mod fan;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod resolution;

pub use error::{Error, Result};
pub use poly::{ExponentVector, Polynomial, ResiduePoint, TruncatedSeries};
pub use rational::Q;
