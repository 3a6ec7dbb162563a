//! Numerical laboratory for weighted norms of polynomials on finite-dimensional
//! complex lp spaces.
//!
//! The crate is organized around a pipeline:
//!
//! * [`space`] - vectors, norms, supporting functionals, distance to complex
//!   lines, modulus of convexity, radial weights;
//! * [`polynomial`] - diagonal / functional-power polynomials with a lazy
//!   chain of rank-one precompositions, plus JSON (de)serialization;
//! * [`constants`] - the closed-form constants of the theory and their
//!   derived radii;
//! * [`norms`] - seeded multi-start optimizers for the sup, s- and weighted
//!   v-norms, with cross-checked methods and attainment diagnostics;
//! * [`counterexamples`] - the named polynomial families whose norm-attainment
//!   behavior is probed through truncations;
//! * [`bollobas`] - the iterative correction that moves a near-attaining pair
//!   to an attaining one, with a fully recorded trace.
//!
//! All value types are immutable once constructed and evaluation is pure, so
//! everything here is safe to share across threads. Every stochastic routine
//! takes an explicit seed and is deterministic given it.

pub mod bollobas;
pub mod constants;
pub mod counterexamples;
pub mod error;
pub mod norms;
mod optimize;
pub mod polynomial;
pub mod space;

pub use error::{Error, Result};
pub use space::{
    dist_to_span, duality_functional, lp_norm_slice, modulus_of_convexity, Functional, LpSpace,
    LpVector, Weight,
};
