//! Dynamical-Casimir phonon generation in an amplitude-modulated, far-detuned
//! optomechanical cavity.
//!
//! The crate is organised along the computational pipeline:
//!
//! * [`params`] turns raw experimental inputs into the dimensionless control
//!   set (`s_ε`, `ξ`, `C`, ...) and audits the dispersive-regime inequalities.
//! * [`rwa`] holds the closed-form rotating-wave solutions: quadrature
//!   covariances, phonon numbers, squeezing and the critical occupation.
//! * [`lyapunov`] integrates the covariance equation `dV/dt = AV + VAᵀ + D`
//!   with fixed-step RK4, both for the RWA drift and for the full modulated
//!   drift with counter-rotating terms.
//! * [`stats`] evaluates two-time correlators, `g²(τ)` and the Mandel
//!   parameter.
//! * [`spectrum`] evaluates the symmetrized displacement spectrum and its
//!   linewidth.
//! * [`stochastic`] is a Monte-Carlo (Euler–Maruyama) ensemble of the linear
//!   quadrature Langevin equations, used as an independent statistical check.
//!
//! All frequencies are angular (rad/s) and all times are seconds.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod lyapunov;
pub mod params;
pub mod rwa;
pub mod spectrum;
pub mod stats;
pub mod stochastic;

pub use error::{Error, Result};
pub use params::{Bath, DerivedParams, PhysicalParams};
pub use rwa::RwaInputs;
