//! Stationary-phase split of the non-dispersive solution v = V ∗ u₀ at fixed y:
//! ∂_y^j v = W_j + R_j with
//!
//! ```text
//! 𝓕_x[W_j](ξ) = e^{−μtξ²} e^{−iy²/(4tξ) + i(π/4)sgn ξ}/√(2t|ξ|) · 𝓕[∂_y^j u₀](ξ, −y/(2tξ)),
//! ```
//!
//! the leading term of the η-integral at its stationary point, and R_j the rest.

use crate::error::{invalid, Error, Result};
use crate::field::fft::fft1;
use crate::field::{fractional_dx, spectral_derivative, Axis, Field, ZeroModePolicy};
use crate::kernels::{fresnel_slice, propagate_open_x, OpenFlow};
use crate::profiles::MFunctional;
use num_complex::Complex64;
use statrs::function::gamma::gamma;
use std::f64::consts::{FRAC_PI_4, PI};

type C = Complex64;

/// x-line padding for W: the slice has a |ξ|^{−1/2} singularity, so W and
/// V carry |x|^{−1/2} tails and need a long period.
pub const SPLIT_PAD: usize = 16;

/// ζ(1/2).
const ZETA_HALF: f64 = -1.460_354_508_809_586_8;

/// W and R along one x-row.
#[derive(Debug, Clone, PartialEq)]
pub struct WrSplit {
    /// Grid row actually used (the requested y snapped to the grid).
    pub y: f64,
    pub t: f64,
    pub x: Vec<f64>,
    pub w: Vec<f64>,
    pub r: Vec<f64>,
    /// ∂_x^l ∂_y^j v on the row.
    pub v: Vec<f64>,
}

/// W and R on the whole grid.
#[derive(Debug, Clone)]
pub struct WrGrid {
    pub t: f64,
    pub w: Field,
    pub r: Field,
    pub v: Field,
}

/// ∂_x^l ∂_y^j v by the whole-line-in-x flow without the ξ³ term.
fn v_field(u0: &Field, j: u32, t: f64, mu: f64, l: u32) -> Result<Field> {
    let src = spectral_derivative(u0, Axis::Y, j);
    propagate_open_x(&src, t, OpenFlow::v(mu).dx(l))
}

/// ∂_x^l W_j along the row y from the padded spectrum.
fn w_row(mf: &MFunctional, y: f64, t: f64, mu: f64, l: u32, lx: f64, nx: usize) -> Vec<f64> {
    let (xi, dxi) = mf.xi_axis();
    let n = xi.len();
    let mut line: Vec<C> = (0..n)
        .map(|k| {
            let q = xi[k];
            if q == 0.0 {
                // The integrand is |ξ|^{−1/2}h(ξ) with h(0±) = e^{±iπ/4}h₀.
                // Generalized Euler–Maclaurin: dξΣ_{k≥1}(kdξ)^{−1/2}h(kdξ)
                // − ∫₀^∞ξ^{−1/2}h = ζ(1/2)√dξ·h(0) + O(dξ^{3/2}), so the ξ = 0
                // sample carries −ζ(1/2)√dξ per side. Only the y = 0, l = 0
                // slice is nonzero here.
                if y != 0.0 || l > 0 {
                    return C::default();
                }
                let weight = -2.0 * ZETA_HALF * FRAC_PI_4.cos() / dxi.sqrt();
                return mf.at(0, 0.0) * weight / (2.0 * t).sqrt();
            }
            let slice = fresnel_slice(q, y, t).expect("ξ ≠ 0, t > 0");
            let d = C::new(0.0, q).powu(l);
            d * slice * (-mu * t * q * q).exp() * mf.at(k, -y / (2.0 * t * q))
        })
        .collect();
    // W(x_i) = (1/√2π) Σ_k F_k e^{iξ_k x_i} dξ with x_i = −Lx + i·dx.
    for (c, &q) in line.iter_mut().zip(xi) {
        *c *= C::from_polar(dxi / (2.0 * PI).sqrt(), -q * lx);
    }
    fft1(&mut line, true);
    line.iter().take(nx).map(|c| c.re).collect()
}

/// W_j and R_j = ∂_y^j v − W_j along the grid row nearest to `y`.
pub fn wj_rj_split(u0: &Field, j: u32, y: f64, t: f64, mu: f64) -> Result<WrSplit> {
    if !(t > 0.0) {
        return Err(invalid("t", "must be positive"));
    }
    let g = &u0.grid;
    let row = ((y + g.ly) / g.dy).round().clamp(0.0, (g.ny - 1) as f64) as usize;
    let v = v_field(u0, j, t, mu, 0)?.row_at_y(row);
    let mf = MFunctional::with_padding(u0, j, SPLIT_PAD)?;
    let yr = g.y[row];
    let w = w_row(&mf, yr, t, mu, 0, g.lx, g.nx);
    let r = v.iter().zip(&w).map(|(a, b)| a - b).collect();
    Ok(WrSplit { y: yr, t, x: g.x.clone(), w, r, v })
}

/// ∂_x^l W_j and ∂_x^l R_j on every grid row.
pub fn wr_split_grid(u0: &Field, j: u32, t: f64, mu: f64, l: u32) -> Result<WrGrid> {
    if !(t > 0.0) {
        return Err(invalid("t", "must be positive"));
    }
    let g = &u0.grid;
    let v = v_field(u0, j, t, mu, l)?;
    let mf = MFunctional::with_padding(u0, j, SPLIT_PAD)?;
    let mut w = Field::zeros(g);
    for (jy, &y) in g.y.iter().enumerate() {
        for (i, val) in w_row(&mf, y, t, mu, l, g.lx, g.nx).into_iter().enumerate() {
            w.values[i * g.ny + jy] = val;
        }
    }
    let r = v.sub(&w);
    Ok(WrGrid { t, w, r, v })
}

/// Explicit bound on sup|∂_x^l R_j(·,·,t)|:
///
/// - l = 0: Γ((2α−1)/4)/(16π^{3/2}μ^{(2α−1)/4}) ‖y²D_x^{−α}∂_y^j u₀‖_{L¹} t^{−5/4−α/2};
/// - l ≥ 1: Γ((2l−1)/4)/(16π^{3/2}μ^{(2l−1)/4}) ‖y²∂_y^j u₀‖_{L¹} t^{−5/4−l/2}.
///
/// For t ≥ 1 both are ≤ C·t^{−5/4−l/2}. Fails with a hypothesis error when
/// the weighted norm is not finite (for l = 0: data with nonzero x-mean).
pub fn r_bound(u0: &Field, j: u32, t: f64, mu: f64, l: u32, alpha: f64) -> Result<f64> {
    if l == 0 && !(alpha > 0.5) {
        return Err(invalid("alpha", format!("must exceed 1/2, got {alpha}")));
    }
    let dj = spectral_derivative(u0, Axis::Y, j);
    let (weighted, e) = if l == 0 {
        let d = fractional_dx(&dj, -alpha, ZeroModePolicy::Strict).map_err(|err| match err {
            Error::NonintegrableZeroMode { ratio } => Error::Hypothesis(format!(
                "weight hypothesis: y²D_x^(-{alpha})∂_y^{j}u₀ not in L¹ (x-mean ratio {ratio:.3e})"
            )),
            other => other,
        })?;
        (d, (2.0 * alpha - 1.0) / 4.0)
    } else {
        (dj, (2.0 * l as f64 - 1.0) / 4.0)
    };
    let g = &u0.grid;
    let mut norm = 0.0;
    for i in 0..g.nx {
        for (jy, &y) in g.y.iter().enumerate() {
            norm += y * y * weighted.at(i, jy).abs();
        }
    }
    norm *= g.cell();
    let rate = if l == 0 { -1.25 - alpha / 2.0 } else { -1.25 - l as f64 / 2.0 };
    Ok(gamma(e) / (16.0 * PI.powf(1.5) * mu.powf(e)) * norm * t.powf(rate))
}
