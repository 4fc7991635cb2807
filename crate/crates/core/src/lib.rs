//! Bipartite entanglement detection with nonlinear witnesses built on
//! two-dimensional subspace projections, and a measurable lower bound on the
//! convex-roof extended negativity.
//!
//! The crate is organised bottom-up:
//!
//! - [`qstate`]: validated density matrices, pure states and spectral
//!   primitives (partial transpose, trace norm, negativity, Schmidt form,
//!   realignment).
//! - [`generators`]: the antisymmetric SO(d) generators, embedded qubit
//!   observables and the conjugated ("tilde") operators.
//! - [`witness`]: subspace projection, Bell and nonlinear witnesses, their
//!   closed-form maxima, a numeric settings optimizer and a shot-noise
//!   estimator.
//! - [`cren`]: the lower bound on the convex-roof extended negativity.
//! - [`states`]: constructors for every state family used in the examples.
//! - [`cli`]: the `entwit` command-line front end.

pub mod cli;
pub mod cren;
pub mod error;
pub mod generators;
pub mod qstate;
pub mod states;
pub mod tolerance;
pub mod witness;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
