//! Numerical laboratory for the 2D generalized Zakharov–Kuznetsov–Burgers equation
//!
//! ```text
//! u_t + u_xxx + u_yyx − μ u_xx + β u^p u_x = 0,   (x, y) ∈ ℝ², t > 0.
//! ```
//!
//! The crate evaluates the linear fundamental solutions U and V, evolves the
//! nonlinear equation with a pseudospectral ETDRK4 integrator, builds the
//! asymptotic profiles, and checks decay rates and explicit constants.
//!
//! Modules:
//! - [`field`]: grids, transforms, spectral calculus, norms and inequalities.
//! - [`kernels`]: U, V, V* by quadrature and FFT routes; Γ-constants.
//! - [`solver`]: linear propagators, nonlinear term, ETDRK4, diagnostics.
//! - [`profiles`]: marginals, 𝒱_j, the M-functional, ψ and the W/R split.
//! - [`harness`]: rate fits and end-to-end verification experiments.
//! - [`config`] and [`cli`]: TOML configuration and the command-line front end.

pub mod cli;
pub mod config;
pub mod error;
pub mod field;
pub mod harness;
pub mod kernels;
pub mod profiles;
pub mod solver;

pub use error::{Error, Result};
pub use field::{Axis, Field, Grid, NormKind, SpecField};
pub use num_complex::Complex64;
