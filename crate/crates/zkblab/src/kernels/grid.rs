//! FFT route: linear evolution that is periodic in y but whole-line in x.
//!
//! On a periodic box the ξ = 0 column is conserved, so the x-mean of every
//! y-line stays in the box forever and sits on top of the true ℝ² solution as
//! a floor of size ~∫u dx/(2Lx). Here each η-row is instead evolved on an
//! x-line several box-lengths long: the symbol's factor e^{itξη²} is an exact
//! shift by tη², and the line is long enough that nothing wraps back into the
//! window. The window then holds samples of the ℝ² evolution. Rows shifted
//! entirely past the window are skipped.
//!
//! The kernel grids U and V are the same evolution applied to a discrete delta.

use crate::error::{Error, Result};
use crate::field::fft::{fft1, fft_rows, wavenumbers};
use crate::field::Field;
use crate::field::Grid;
use num_complex::Complex64;
use std::sync::Arc;

/// Linear flow parameters for [`propagate_open_x`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenFlow {
    pub mu: f64,
    /// Include the e^{itξ³} factor (U) or not (V).
    pub dispersive: bool,
    /// Apply ∂_x^l to the result.
    pub dx_order: u32,
}

impl OpenFlow {
    pub fn u(mu: f64) -> Self {
        OpenFlow { mu, dispersive: true, dx_order: 0 }
    }

    pub fn v(mu: f64) -> Self {
        OpenFlow { mu, dispersive: false, dx_order: 0 }
    }

    pub fn dx(self, l: u32) -> Self {
        OpenFlow { dx_order: l, ..self }
    }
}

/// Extent of the 1D kernel G_t(k) = ∫e^{−μtξ²+itξ³+ikξ}dξ to the right and left.
///
/// Right: Gaussian/Airy decay. Left (dispersive): the stationary point gives
/// e^{−μ|k|/3}, which reaches 1e−17 at |k| ≈ 117/μ.
pub(crate) fn kernel_extent(t: f64, mu: f64, dispersive: bool) -> (f64, f64) {
    let diff = 12.0 * (mu * t).sqrt() + 2.0;
    let kpos = diff + if dispersive { 8.0 * t.cbrt() } else { 0.0 };
    let kneg = diff + if dispersive { 120.0 / mu } else { 0.0 };
    (kpos, kneg)
}

/// Evolves compactly supported data by the whole-line-in-x linear flow.
pub fn propagate_open_x(src: &Field, t: f64, flow: OpenFlow) -> Result<Field> {
    if !(flow.mu > 0.0) {
        return Err(crate::error::invalid("mu", "must be positive"));
    }
    if t < 0.0 {
        return Err(crate::error::invalid("t", "must be non-negative"));
    }
    if t == 0.0 && flow.dx_order == 0 {
        return Ok(src.clone());
    }
    let g = &src.grid;
    let (nx, ny) = (g.nx, g.ny);
    let (kpos, kneg) = kernel_extent(t, flow.mu, flow.dispersive);
    let period = 4.0 * g.lx + kpos + kneg;
    let n = ((period / g.dx).ceil() as usize).next_power_of_two().max(nx);
    let xi = wavenumbers(n, g.dx);

    let mut ysp: Vec<Complex64> = src.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_rows(&mut ysp, ny, false);

    let mut out = vec![Complex64::default(); nx * ny];
    let mut line = vec![Complex64::default(); n];
    let disp = if flow.dispersive { 1.0 } else { 0.0 };
    for m in 0..ny {
        let eta = g.eta[m];
        let shift = t * eta * eta;
        if shift > 2.0 * g.lx + kpos {
            continue;
        }
        line.iter_mut().for_each(|c| *c = Complex64::default());
        for i in 0..nx {
            line[i] = ysp[i * ny + m];
        }
        fft1(&mut line, false);
        for (k, c) in line.iter_mut().enumerate() {
            if k == n / 2 {
                *c = Complex64::default();
                continue;
            }
            let q = xi[k];
            let sym = Complex64::from_polar(
                (-flow.mu * t * q * q).exp(),
                t * q * eta * eta + disp * t * q * q * q,
            );
            *c *= sym * Complex64::new(0.0, q).powu(flow.dx_order);
        }
        fft1(&mut line, true);
        for i in 0..nx {
            out[i * ny + m] = line[i] / n as f64;
        }
    }
    fft_rows(&mut out, ny, true);
    let values = out.iter().map(|c| c.re / ny as f64).collect();
    Ok(Field { grid: g.clone(), values })
}

/// ‖∂_x^l S(t)src‖_{L²} over ℝ_x × [−Ly, Ly] by Parseval on the long line.
///
/// |e^{tλ}| does not depend on the dispersive phases, so the norm is the
/// ξ-sum of e^{−2μtξ²}ξ^{2l}|û|² on the same long line
/// [`propagate_open_x`] uses; rows shifted out of the window still count.
pub fn open_x_l2(src: &Field, t: f64, mu: f64, l: u32) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(crate::error::invalid("mu", "must be positive"));
    }
    if t < 0.0 {
        return Err(crate::error::invalid("t", "must be non-negative"));
    }
    let g = &src.grid;
    let (nx, ny) = (g.nx, g.ny);
    let (kpos, kneg) = kernel_extent(t, mu, true);
    let period = 4.0 * g.lx + kpos + kneg;
    let n = ((period / g.dx).ceil() as usize).next_power_of_two().max(nx);
    let xi = wavenumbers(n, g.dx);
    let mut ysp: Vec<Complex64> = src.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_rows(&mut ysp, ny, false);
    let mut line = vec![Complex64::default(); n];
    let mut sum = 0.0;
    for m in 0..ny {
        line.iter_mut().for_each(|c| *c = Complex64::default());
        for i in 0..nx {
            line[i] = ysp[i * ny + m];
        }
        fft1(&mut line, false);
        for (k, c) in line.iter().enumerate() {
            if k == n / 2 {
                continue;
            }
            let q = xi[k];
            sum += c.norm_sqr() * (-2.0 * mu * t * q * q).exp() * (q * q).powi(l as i32);
        }
    }
    Ok((sum * g.cell() / (n * ny) as f64).sqrt())
}

/// Discrete delta of unit mass at the origin.
pub(crate) fn delta(grid: &Arc<Grid>) -> Field {
    let mut f = Field::zeros(grid);
    let (i, j) = (grid.x_origin(), grid.y_origin());
    f.values[i * grid.ny + j] = 1.0 / grid.cell();
    f
}

/// Checks that the grid resolves the kernel symbol and its η-truncation.
pub(crate) fn check_kernel_grid(grid: &Grid, t: f64, mu: f64, dispersive: bool) -> Result<()> {
    if !(t > 0.0) {
        return Err(crate::error::invalid("t", "must be positive"));
    }
    if !(mu > 0.0) {
        return Err(crate::error::invalid("mu", "must be positive"));
    }
    let pi = std::f64::consts::PI;
    // e^{−μt(π/dx)²} < 1e−12.
    let need = 27.7;
    if mu * t * (pi / grid.dx).powi(2) < need {
        let dx = pi / (need / (mu * t)).sqrt();
        let required = even_ceil(2.0 * grid.lx / dx);
        return Err(Error::UnresolvedGrid {
            reason: format!("symbol not damped at max|ξ| for μt = {}", mu * t),
            axis: "Nx",
            required,
        });
    }
    // Rows beyond max|η| must be shifted out of the window.
    let (kpos, _) = kernel_extent(t, mu, dispersive);
    let reach = grid.lx + kpos;
    if t * (pi / grid.dy).powi(2) < reach {
        let dy = pi * (t / reach).sqrt();
        let required = even_ceil(2.0 * grid.ly / dy);
        return Err(Error::UnresolvedGrid {
            reason: format!("η-truncation visible in window at t = {t}"),
            axis: "Ny",
            required,
        });
    }
    Ok(())
}

fn even_ceil(v: f64) -> usize {
    let n = v.ceil() as usize;
    (n + n % 2).max(8)
}

/// ∂_x^l U on the grid by the FFT route.
pub fn eval_u_grid_dx(grid: &Arc<Grid>, t: f64, mu: f64, l: u32) -> Result<Field> {
    check_kernel_grid(grid, t, mu, true)?;
    propagate_open_x(&delta(grid), t, OpenFlow::u(mu).dx(l))
}

/// U(·,·,t) on the grid by the FFT route.
pub fn eval_u_grid(grid: &Arc<Grid>, t: f64, mu: f64) -> Result<Field> {
    eval_u_grid_dx(grid, t, mu, 0)
}

/// ∂_x^l V on the grid by the FFT route.
pub fn eval_v_grid(grid: &Arc<Grid>, t: f64, mu: f64, l: u32) -> Result<Field> {
    check_kernel_grid(grid, t, mu, false)?;
    propagate_open_x(&delta(grid), t, OpenFlow::v(mu).dx(l))
}
