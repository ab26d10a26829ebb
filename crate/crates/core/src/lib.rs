//! Planted-structure laboratory for the sum-of-squares hierarchy.
//!
//! The crate covers the whole pipeline needed to watch the gap between the
//! exponential-time scan estimator and its convex relaxations:
//!
//! - [`models`]: planted sparse principal submatrix and stochastic block
//!   model instances, generated deterministically from a seed;
//! - [`estimators`]: the scan, average, max and LP estimators of the signal
//!   strength;
//! - [`sos_program`]: the level-ℓ sum-of-squares semidefinite program in
//!   set-indexed (moment matrix) form, plus the basic first-level program;
//! - [`sdp`]: a small dense ADMM solver for those programs;
//! - [`certificate`]: the expansivity-based pseudo-moment construction,
//!   verified in exact rational arithmetic;
//! - [`lab`]: experiment harness, CSV output and the command line front end.
//!
//! Vertex indices are zero-based throughout the API and in every file format.

pub mod certificate;
pub mod combinatorics;
pub mod error;
pub mod estimators;
pub mod lab;
pub mod models;
pub mod rng;
pub mod sdp;
pub mod sos_program;

pub use error::{Error, Result};
