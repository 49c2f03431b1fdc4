//! Periodic-box evolution of u_t + u_xxx + u_yyx − μu_xx + βu^p u_x = 0.
//!
//! In Fourier space û_t = λû + 𝓝̂(u) with λ = −μξ² + i(ξ³ + ξη²) and
//! 𝓝(u) = −β/(p+1)·∂_x(u^{p+1}). The linear part is integrated exactly and
//! the nonlinearity by ETDRK4; products are de-aliased by zero padding.

mod diagnostics;
mod etdrk4;
mod linear;
mod nonlinear;
pub(crate) mod phi;
mod residuals;

pub use diagnostics::{Diagnostics, DiagnosticsRow, StepRecord};
pub use etdrk4::{advance, run, Stepper, Trajectory};
pub use linear::{linear_propagate, linear_propagate_unbounded};
pub use nonlinear::{nonlinear_term, Nonlinear};
pub use residuals::{dissipation_residual, duhamel_residual, duhamel_residual_with, TauRule};

use crate::error::{invalid, Result};
use crate::field::Grid;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Equation coefficients μ, β, p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equation {
    pub mu: f64,
    pub beta: f64,
    pub p: u32,
}

impl Equation {
    pub fn new(mu: f64, beta: f64, p: u32) -> Result<Self> {
        let e = Equation { mu, beta, p };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0) {
            return Err(invalid("equation.mu", format!("must be positive, got {}", self.mu)));
        }
        if self.p < 1 {
            return Err(invalid("equation.p", "must be >= 1"));
        }
        if !self.beta.is_finite() {
            return Err(invalid("equation.beta", "must be finite"));
        }
        Ok(())
    }

    /// Smallest padding factor that de-aliases u^{p+1}: ⌈(p+2)/2⌉.
    pub fn default_pad(&self) -> f64 {
        ((self.p as f64 + 2.0) / 2.0).ceil()
    }
}

/// Everything a run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub equation: Equation,
    pub grid: Arc<Grid>,
    pub dt: f64,
    pub t_end: f64,
    /// Sorted, within [0, t_end]; hit exactly by shortening the step.
    pub snapshot_times: Vec<f64>,
    /// Padded transform size is ⌈pad·N⌉ per axis; must be ≥ (p+2)/2.
    pub dealias_pad: f64,
    /// Largest allowed edge-to-sup ratio; `f64::INFINITY` disables the check.
    pub boundary_guard: f64,
}

impl SimConfig {
    /// Config with the default padding and the strict 1e−6 guard.
    pub fn new(equation: Equation, grid: Arc<Grid>, dt: f64, t_end: f64) -> Self {
        SimConfig {
            dealias_pad: equation.default_pad(),
            equation,
            grid,
            dt,
            t_end,
            snapshot_times: Vec::new(),
            boundary_guard: crate::field::BOUNDARY_GUARD,
        }
    }

    pub fn with_snapshots(mut self, times: Vec<f64>) -> Self {
        self.snapshot_times = times;
        self
    }

    pub fn with_guard(mut self, guard: f64) -> Self {
        self.boundary_guard = guard;
        self
    }

    /// `n` equally spaced snapshots on [0, t_end].
    pub fn uniform_snapshots(mut self, n: usize) -> Self {
        self.snapshot_times =
            (0..n).map(|k| self.t_end * k as f64 / (n.max(2) - 1) as f64).collect();
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.equation.validate()?;
        if !(self.dt > 0.0) {
            return Err(invalid("time.dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0) {
            return Err(invalid("time.t_end", "must be non-negative"));
        }
        let mut prev = f64::NEG_INFINITY;
        for &t in &self.snapshot_times {
            if !(t > prev) || t < 0.0 || t > self.t_end + 1e-12 {
                return Err(invalid(
                    "time.snapshots",
                    "must be strictly increasing within [0, t_end]",
                ));
            }
            prev = t;
        }
        let need = (self.equation.p as f64 + 2.0) / 2.0;
        if self.dealias_pad < need {
            return Err(invalid(
                "grid.dealias_pad",
                format!("{} < (p+2)/2 = {need}", self.dealias_pad),
            ));
        }
        if !(self.boundary_guard > 0.0) {
            return Err(invalid("output.boundary_guard", "must be positive"));
        }
        Ok(())
    }
}
