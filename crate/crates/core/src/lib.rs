//! Numerical laboratory for observability of the free Schrödinger equation on
//! the standard torus `T^2 = R^2 / Z^2` from a small ball `B(0, eps)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: eps-rational directions, rational approximation, sums of two
//!   squares and the angular windows of the rational/irrational split.
//! * [`geodesics`]: straight-line flow on the torus and exact first-hitting
//!   times into a ball.
//! * [`spectral`]: finitely supported Fourier fields, the diagonal Schrödinger
//!   propagator, and closed-form Fourier coefficients of the ball indicator.
//! * [`observability`]: eigenspace Gramians, the truncated observability
//!   constant, Nazarov–Turán extremal ratios and the 1-D Helmholtz constant.
//! * [`linalg`]: the small dense symmetric eigensolver everything above uses.

pub mod error;
pub mod geodesics;
pub mod lattice;
pub mod linalg;
pub mod observability;
pub mod spectral;

pub use error::{Error, Result};

/// Period of `e^{it Delta}` on the unit torus.
pub const PERIOD: f64 = 1.0 / (2.0 * std::f64::consts::PI);
