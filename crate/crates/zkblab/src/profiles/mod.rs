//! Asymptotic profiles of the linear and nonlinear flows.
//!
//! - marginals M_j(y) = ∫∂_y^j u₀(x, y)dx;
//! - 𝒱_j(x,y,t) = ∫V(x, y−w, t)M_j(w)dw, the V-flow of M_j(y)δ(x);
//! - the slice functional M[∂_y^j u₀](w) ([`MFunctional`]);
//! - ψ_j(x,y,t) = M[∂_y^j u₀](−y/t)·V(x,y,t);
//! - the W/R split of v = V ∗ u₀ ([`wj_rj_split`]).

mod mfunc;
mod split;

pub use mfunc::{eval_m_functional, MFunctional, MValue, DEFAULT_PAD};
pub use split::{r_bound, wj_rj_split, wr_split_grid, WrGrid, WrSplit, SPLIT_PAD};

use crate::error::{invalid, Result};
use crate::field::{require_boundary_clean, spectral_derivative, Axis, Field, Grid};
use std::sync::Arc;
use crate::kernels::{eval_v, eval_v_grid, propagate_open_x, OpenFlow, QuadratureSpec};

/// Default exponent α > 1/2 in the l = 0 weight hypothesis.
pub const DEFAULT_ALPHA: f64 = 0.6;

/// M_j(y) sampled on the grid's y axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal {
    pub y: Vec<f64>,
    pub values: Vec<f64>,
    pub j: u32,
}

impl Marginal {
    /// dy·Σ M_j.
    pub fn integral(&self) -> f64 {
        let dy = if self.y.len() > 1 { self.y[1] - self.y[0] } else { 0.0 };
        self.values.iter().sum::<f64>() * dy
    }
}

/// M_j(y) = dx·Σ_x ∂_y^j u₀(x, y) for j ≤ 2.
pub fn marginal(u0: &Field, j: u32) -> Result<Marginal> {
    if j > 2 {
        return Err(invalid("j", format!("must be <= 2, got {j}")));
    }
    require_boundary_clean(u0)?;
    let g = &u0.grid;
    let d = spectral_derivative(u0, Axis::Y, j);
    let mut values = vec![0.0; g.ny];
    for i in 0..g.nx {
        for (jy, m) in values.iter_mut().enumerate() {
            *m += d.at(i, jy) * g.dx;
        }
    }
    Ok(Marginal { y: g.y.clone(), values, j })
}

/// ∂_x^l 𝒱_j(x,y,t) by quadrature over the marginal's samples against
/// pointwise V values.
#[allow(clippy::too_many_arguments)]
pub fn eval_math_v(
    u0: &Field,
    j: u32,
    x: f64,
    y: f64,
    t: f64,
    mu: f64,
    l: u32,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let m = marginal(u0, j)?;
    math_v_from_marginal(&m, x, y, t, mu, l, spec)
}

/// As [`eval_math_v`] for a precomputed marginal.
pub fn math_v_from_marginal(
    m: &Marginal,
    x: f64,
    y: f64,
    t: f64,
    mu: f64,
    l: u32,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let dy = if m.y.len() > 1 { m.y[1] - m.y[0] } else { return Ok(0.0) };
    let peak = m.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut sum = 0.0;
    for (&w, &mv) in m.y.iter().zip(&m.values) {
        if mv.abs() <= 1e-15 * peak || mv == 0.0 {
            continue;
        }
        sum += eval_v(x, y - w, t, mu, l, spec)?.value * mv;
    }
    Ok(sum * dy)
}

/// ∂_x^l 𝒱_j on the grid: the whole-line-in-x V-flow of M_j(y)δ(x).
pub fn math_v_grid(u0: &Field, j: u32, t: f64, mu: f64, l: u32) -> Result<Field> {
    let m = marginal(u0, j)?;
    let g = &u0.grid;
    let mut src = Field::zeros(g);
    let i0 = g.x_origin();
    for (jy, v) in m.values.iter().enumerate() {
        src.values[i0 * g.ny + jy] = v / g.dx;
    }
    propagate_open_x(&src, t, OpenFlow::v(mu).dx(l))
}

/// ψ_j at one point with its two factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileEval {
    pub value: f64,
    /// M[∂_y^j u₀](−y/t).
    pub amplitude: f64,
    /// ∂_x^l V(x, y, t).
    pub kernel: f64,
    pub t: f64,
}

impl MFunctional {
    /// ∂_x^l ψ_j(x,y,t) = M[∂_y^j u₀](−y/t)·∂_x^l V(x,y,t).
    pub fn psi(&self, x: f64, y: f64, t: f64, mu: f64, l: u32, spec: &QuadratureSpec) -> Result<ProfileEval> {
        if !(t > 0.0) {
            return Err(invalid("t", "must be positive"));
        }
        let amplitude = self.eval(-y / t).value;
        let kernel = eval_v(x, y, t, mu, l, spec)?.value;
        Ok(ProfileEval { value: amplitude * kernel, amplitude, kernel, t })
    }

    /// ∂_x^l ψ_j on the grid, with V from the FFT route.
    pub fn psi_grid(&self, grid: &Arc<Grid>, t: f64, mu: f64, l: u32) -> Result<Field> {
        let g = grid;
        let v = eval_v_grid(g, t, mu, l)?;
        let amp: Vec<f64> = g.y.iter().map(|&y| self.eval(-y / t).value).collect();
        let mut out = v;
        for i in 0..g.nx {
            for (jy, a) in amp.iter().enumerate() {
                out.values[i * g.ny + jy] *= a;
            }
        }
        Ok(out)
    }
}

/// One-shot ∂_x^l ψ_j(x,y,t).
#[allow(clippy::too_many_arguments)]
pub fn eval_psi(
    u0: &Field,
    j: u32,
    x: f64,
    y: f64,
    t: f64,
    mu: f64,
    l: u32,
    spec: &QuadratureSpec,
) -> Result<ProfileEval> {
    MFunctional::new(u0, j)?.psi(x, y, t, mu, l, spec)
}
