//! Linear fundamental solutions and their explicit constants.
//!
//! U(x,y,t) = (1/2π)𝓕⁻¹[e^{tλ}] with λ(ξ,η) = −μξ² + i(ξ³ + ξη²), and V is
//! the same without the ξ³ term. V is self-similar:
//! V(x,y,t) = t^{−3/4} V*(x t^{−1/2}, y t^{−1/4}).
//!
//! Two independent routes:
//! - quadrature: the η-integral is done in closed form (Fresnel), leaving a
//!   1D oscillatory ξ-integral ([`eval_u`], [`eval_vstar`], [`eval_v`]);
//! - FFT: whole-line-in-x spectral evolution of a discrete delta
//!   ([`eval_u_grid`], [`eval_v_grid`]).

mod grid;
pub mod quad;
mod reduced;

pub use grid::{
    eval_u_grid, eval_u_grid_dx, eval_v_grid, open_x_l2, propagate_open_x, OpenFlow,
};

use crate::error::{invalid, Error, Result};
use num_complex::Complex64;
use reduced::Reduced;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use std::f64::consts::{FRAC_PI_4, PI};

/// The symbol λ(ξ,η) = −μξ² + i(ξ³ + ξη²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearSymbol {
    pub mu: f64,
}

impl LinearSymbol {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(invalid("mu", format!("must be positive, got {mu}")));
        }
        Ok(LinearSymbol { mu })
    }

    pub fn lambda(&self, xi: f64, eta: f64) -> Complex64 {
        Complex64::new(-self.mu * xi * xi, xi * xi * xi + xi * eta * eta)
    }
}

/// Tolerances and splitting parameters of the quadrature route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Absolute tolerance on the returned kernel value.
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum panels per adaptive sub-integral.
    pub max_subdivisions: usize,
    /// Minimum split δ between the straight piece and the ray near ξ = 0.
    pub singularity_split: f64,
    /// Exponent c with Ξ = √(c/(μt)), so e^{−μtΞ²} = e^{−c}.
    pub gaussian_cutoff: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            max_subdivisions: 200,
            singularity_split: 1e-3,
            gaussian_cutoff: 37.0,
        }
    }
}

/// Which route produced a kernel value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Quadrature,
    Fft2d,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Quadrature => "quadrature",
            Route::Fft2d => "fft2d",
        }
    }
}

/// A kernel sample with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    pub est_error: f64,
    pub route: Route,
}

/// e^{−μtξ² + itξ³ + itξη²}.
pub fn symbol_exp(xi: f64, eta: f64, t: f64, mu: f64) -> Complex64 {
    Complex64::from_polar((-mu * t * xi * xi).exp(), t * (xi * xi * xi + xi * eta * eta))
}

/// 𝓕⁻¹_η[e^{itξη²}](y) = e^{−iy²/(4tξ) + i(π/4)sgn ξ}/√(2t|ξ|).
pub fn fresnel_slice(xi: f64, y: f64, t: f64) -> Result<Complex64> {
    if xi == 0.0 {
        return Err(invalid("xi", "Fresnel slice undefined at ξ=0"));
    }
    if !(t > 0.0) {
        return Err(invalid("t", "must be positive"));
    }
    let phase = -y * y / (4.0 * t * xi) + FRAC_PI_4 * xi.signum();
    Ok(Complex64::from_polar(1.0 / (2.0 * t * xi.abs()).sqrt(), phase))
}

/// e^{−μtξ² + iy²/(4ξt) − i(π/4)sgn ξ}/√(2t|ξ|) = 2π𝓕_x[V(−x, y, t)](ξ).
pub fn v_fourier_slice(xi: f64, y: f64, t: f64, mu: f64) -> Result<Complex64> {
    Ok(fresnel_slice(xi, y, t)?.conj() * (-mu * t * xi * xi).exp())
}

fn check_l(l: u32) -> Result<()> {
    if l > 2 {
        return Err(invalid("l", format!("derivative order {l} > 2 unsupported")));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid(name, format!("must be positive, got {v}")));
    }
    Ok(())
}

/// Runs the reduced integral and applies 2·Re with the given prefactor.
fn reduced_value(r: Reduced, pre: f64, spec: &QuadratureSpec) -> Result<KernelValue> {
    let q = r.integrate(spec, spec.abs_tol / (2.0 * pre));
    let value = 2.0 * pre * q.value.re;
    let est_error = 2.0 * pre * q.error;
    if !q.converged || !value.is_finite() {
        return Err(Error::Quadrature { best: value, est_error });
    }
    Ok(KernelValue { value, est_error, route: Route::Quadrature })
}

/// ∂_x^l U(x,y,t) from the Fresnel-reduced 1D integral
/// (t^{−1/2}/4π^{3/2}) ∫ (iξ)^l |ξ|^{−1/2} e^{−μtξ² + itξ³ − iy²/(4tξ) + i(π/4)sgn ξ + ixξ} dξ.
pub fn eval_u(x: f64, y: f64, t: f64, mu: f64, l: u32, spec: &QuadratureSpec) -> Result<KernelValue> {
    check_positive("t", t)?;
    check_positive("mu", mu)?;
    check_l(l)?;
    let r = Reduced { damp: mu * t, cubic: t, x, a: y * y / (4.0 * t), l };
    reduced_value(r, 1.0 / (4.0 * PI.powf(1.5) * t.sqrt()), spec)
}

/// ∂_X^l V*(X,Y) = (1/4π^{3/2}μ^{1/4}) ∫₀^∞ r^{−3/4}e^{−r}(∂_X^l)cos(X√(r/μ) − (Y²/4)√(μ/r) + π/4) dr.
///
/// With r = μξ² (i.e. r = μs⁴ in the panel variable) this is
/// (1/2π^{3/2}) Re ∫₀^∞ (iξ)^l ξ^{−1/2} e^{−μξ² + i(Xξ − Y²/(4ξ) + π/4)} dξ.
pub fn eval_vstar(x: f64, y: f64, mu: f64, l: u32, spec: &QuadratureSpec) -> Result<KernelValue> {
    check_positive("mu", mu)?;
    check_l(l)?;
    let r = Reduced { damp: mu, cubic: 0.0, x, a: y * y / 4.0, l };
    reduced_value(r, 1.0 / (4.0 * PI.powf(1.5)), spec)
}

/// ∂_x^l V(x,y,t) = t^{−3/4−l/2} ∂_X^l V*(x t^{−1/2}, y t^{−1/4}).
pub fn eval_v(x: f64, y: f64, t: f64, mu: f64, l: u32, spec: &QuadratureSpec) -> Result<KernelValue> {
    check_positive("t", t)?;
    let scale = t.powf(-0.75 - 0.5 * l as f64);
    let mut inner = *spec;
    inner.abs_tol = spec.abs_tol / scale;
    let v = eval_vstar(x / t.sqrt(), y / t.powf(0.25), mu, l, &inner)?;
    Ok(KernelValue { value: scale * v.value, est_error: scale * v.est_error, route: v.route })
}

/// Γ((1+2l)/4)/(4π^{3/2}μ^{(1+2l)/4}) · t^{−3/4−l/2}: sup bound on |∂_x^l U|.
pub fn decay_bound(l: u32, mu: f64, t: f64) -> f64 {
    let e = (1.0 + 2.0 * l as f64) / 4.0;
    gamma(e) / (4.0 * PI.powf(1.5) * mu.powf(e)) * t.powf(-0.75 - 0.5 * l as f64)
}

/// Γ((7+2l)/4)/(4π^{3/2}μ^{(7+2l)/4}) · t^{−5/4−l/2}: sup bound on |∂_x^l(U−V)|.
pub fn remainder_bound(l: u32, mu: f64, t: f64) -> f64 {
    let e = (7.0 + 2.0 * l as f64) / 4.0;
    gamma(e) / (4.0 * PI.powf(1.5) * mu.powf(e)) * t.powf(-1.25 - 0.5 * l as f64)
}

/// c₀(l,μ) = Γ((1+2l)/4)/(2^{5/2}π^{3/2}μ^{(1+2l)/4}), the lower-bound constant.
pub fn lower_bound_constant(l: u32, mu: f64) -> f64 {
    let e = (1.0 + 2.0 * l as f64) / 4.0;
    gamma(e) / (2f64.powf(2.5) * PI.powf(1.5) * mu.powf(e))
}

/// Limit of t^{3/4+l/2}(∂_x^l 𝒱)(0,0,t) per unit marginal mass:
/// Γ((1+2l)/4)cos((1+2l)π/4)/(4π^{3/2}μ^{(1+2l)/4}).
pub fn origin_profile_constant(l: u32, mu: f64) -> f64 {
    let e = (1.0 + 2.0 * l as f64) / 4.0;
    gamma(e) * (e * PI).cos() / (4.0 * PI.powf(1.5) * mu.powf(e))
}
