//! Spin operators for a massive spin-1/2 particle and the covariant
//! Stern-Gerlach experiment.
//!
//! Two candidate spin three-vectors are built side by side:
//!
//! * the *relativistic spin*, obtained from the classical dipole-moment
//!   tensor (2×2 Pauli representation), and
//! * the *Dirac spin*, obtained by boosting the rest-frame spin tensor in the
//!   4-dimensional Dirac spinor representation.
//!
//! The [`experiment`] module runs the Stern-Gerlach setup in the laboratory
//! frame and in the particle rest frame for either model and reports whether
//! the two observers agree ([`experiment::run_experiment`]).
//!
//! Conventions: natural units (ħ = c = 1), metric diag(+,−,−,−), particle
//! mass m = 1. Expectation values use the covariant normalization
//! ψ†γ⁰ψ = 2m, see [`COVARIANT_NORM`].

#![forbid(unsafe_code)]

pub mod classical_spin;
pub mod dirac;
pub mod error;
pub mod experiment;
pub mod fields;
pub mod operators;
pub mod tensor;
pub mod verify;

pub use error::{Result, SpinError};

/// Particle rest mass in natural units.
pub const MASS: f64 = 1.0;

/// Norm of every state used for expectation values: ψ†γ⁰ψ = 2m for Dirac
/// spinors, and 2⟨u|O|u⟩ for unit two-component states so that both spin
/// models report in the same units.
pub const COVARIANT_NORM: f64 = 2.0 * MASS;

/// Default absolute tolerance for structural checks.
pub const ABS_TOL: f64 = 1e-12;

/// Default relative tolerance for value comparisons.
pub const REL_TOL: f64 = 1e-10;

/// Absolute-or-relative closeness with the crate defaults.
pub fn approx_eq(a: f64, b: f64) -> bool {
    approx_eq_tol(a, b, ABS_TOL, REL_TOL)
}

pub fn approx_eq_tol(a: f64, b: f64, abs: f64, rel: f64) -> bool {
    let diff = (a - b).abs();
    diff <= abs || diff <= rel * a.abs().max(b.abs())
}
