//! Numerical tolerances shared by every module.
//!
//! All eigensolves in this crate run on matrices of side at most a few
//! dozen, so double precision loses no more than about three digits.

/// Maximum entrywise deviation from Hermiticity accepted on input.
pub const HERMITIAN: f64 = 1e-10;
/// Maximum deviation of a density matrix trace from one.
pub const TRACE: f64 = 1e-10;
/// Maximum deviation of a state-vector norm from one.
pub const NORM: f64 = 1e-10;
/// Most negative eigenvalue still accepted as positive semidefinite.
pub const PSD: f64 = 1e-9;
/// Generic equality tolerance for derived quantities.
pub const EQ: f64 = 1e-9;
/// Subspace weights at or below this are treated as empty.
pub const EMPTY_SUBSPACE: f64 = 1e-12;
/// A witness value must exceed its bound by this much to count as a violation.
pub const DETECT: f64 = 1e-8;
/// Orthonormality tolerance for observable triads and unit vectors.
pub const ORTHONORMAL: f64 = 1e-10;
