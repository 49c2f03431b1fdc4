use crate::error::{Error, Result};
use crate::field::fft::fft2;
use crate::field::grid::{Field, Grid};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Coordinate direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Continuum-scaled Fourier coefficients û(ξ_k, η_m), x-major like [`Field`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpecField {
    pub grid: Arc<Grid>,
    pub coeffs: Vec<Complex64>,
}

/// How a negative-order fractional derivative treats the ξ = 0 column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroModePolicy {
    /// Zero the column and log a warning.
    #[default]
    ZeroOut,
    /// Refuse data whose x-mean is not negligible.
    Strict,
}

#[inline]
fn parity(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Unnormalized DFT of the samples (index-based phases).
pub(crate) fn raw_forward(f: &Field) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2(&mut data, f.grid.nx, f.grid.ny, false);
    data
}

/// Inverse of [`raw_forward`]; returns the real part and the largest |imag|.
pub(crate) fn raw_inverse(grid: &Arc<Grid>, mut data: Vec<Complex64>) -> (Field, f64) {
    fft2(&mut data, grid.nx, grid.ny, true);
    let norm = 1.0 / grid.len() as f64;
    let mut imag = 0.0f64;
    let values = data
        .iter()
        .map(|c| {
            imag = imag.max((c.im * norm).abs());
            c.re * norm
        })
        .collect();
    (Field { grid: grid.clone(), values }, imag)
}

/// Forward transform in the continuum convention.
pub fn to_spectral(f: &Field) -> SpecField {
    let g = &f.grid;
    let mut c = raw_forward(f);
    let s = g.cell() / (2.0 * PI);
    for k in 0..g.nx {
        for m in 0..g.ny {
            c[k * g.ny + m] *= s * parity(k + m);
        }
    }
    SpecField { grid: g.clone(), coeffs: c }
}

/// Inverse transform; the imaginary residue is discarded.
pub fn to_physical(f: &SpecField) -> Result<Field> {
    let g = &f.grid;
    if f.coeffs.len() != g.len() {
        return Err(Error::ShapeMismatch { expected: g.len(), got: f.coeffs.len() });
    }
    let s = 2.0 * PI / g.cell();
    let mut raw = f.coeffs.clone();
    for k in 0..g.nx {
        for m in 0..g.ny {
            raw[k * g.ny + m] *= s * parity(k + m);
        }
    }
    Ok(raw_inverse(g, raw).0)
}

impl SpecField {
    /// dξ·dη·Σ|û|², equal to ‖u‖²_{L²} by Parseval.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.dxi() * self.grid.deta()
    }

    #[inline]
    pub fn at(&self, k: usize, m: usize) -> Complex64 {
        self.coeffs[k * self.grid.ny + m]
    }
}

/// Applies a multiplier m(ξ_k, η_m) to the raw spectrum in place.
pub(crate) fn apply_multiplier(
    grid: &Grid,
    raw: &mut [Complex64],
    mult: impl Fn(usize, usize) -> Complex64,
) {
    for k in 0..grid.nx {
        for m in 0..grid.ny {
            raw[k * grid.ny + m] *= mult(k, m);
        }
    }
}

/// (i·k)^order for a real wavenumber.
pub(crate) fn ik_pow(k: f64, order: u32) -> Complex64 {
    Complex64::new(0.0, k).powu(order)
}

/// ∂_x^order or ∂_y^order by spectral multiplication.
///
/// Odd orders zero the Nyquist line of the differentiated axis so the result
/// stays real.
pub fn spectral_derivative(f: &Field, axis: Axis, order: u32) -> Field {
    if order == 0 {
        return f.clone();
    }
    let g = &f.grid;
    let mut raw = raw_forward(f);
    let odd = order % 2 == 1;
    apply_multiplier(g, &mut raw, |k, m| match axis {
        Axis::X if odd && k == g.nx / 2 => Complex64::default(),
        Axis::Y if odd && m == g.ny / 2 => Complex64::default(),
        Axis::X => ik_pow(g.xi[k], order),
        Axis::Y => ik_pow(g.eta[m], order),
    });
    let (out, imag) = raw_inverse(g, raw);
    debug_assert!(imag <= 1e-10 * out.max_abs().max(1.0), "imaginary residue {imag}");
    out
}

/// Mixed derivative ∂_x^a ∂_y^b.
pub(crate) fn mixed_derivative(f: &Field, a: u32, b: u32) -> Field {
    let g = &f.grid;
    let mut raw = raw_forward(f);
    apply_multiplier(g, &mut raw, |k, m| {
        if (a % 2 == 1 && k == g.nx / 2) || (b % 2 == 1 && m == g.ny / 2) {
            return Complex64::default();
        }
        ik_pow(g.xi[k], a) * ik_pow(g.eta[m], b)
    });
    raw_inverse(g, raw).0
}

/// Fractional derivative D_x^γ = 𝓕⁻¹|ξ|^γ𝓕 along x.
pub fn fractional_dx(f: &Field, gamma: f64, policy: ZeroModePolicy) -> Result<Field> {
    if gamma == 0.0 {
        return Ok(f.clone());
    }
    let g = &f.grid;
    let mut raw = raw_forward(f);
    if gamma < 0.0 {
        let zero: f64 = (0..g.ny).map(|m| raw[m].norm_sqr()).sum();
        let total: f64 = raw.iter().map(|c| c.norm_sqr()).sum();
        let ratio = if total > 0.0 { (zero / total).sqrt() } else { 0.0 };
        if ratio > 1e-10 {
            match policy {
                ZeroModePolicy::Strict => return Err(Error::NonintegrableZeroMode { ratio }),
                ZeroModePolicy::ZeroOut => {
                    log::warn!("D_x^{gamma}: zeroing x-mean column (ratio {ratio:.3e})")
                }
            }
        }
    }
    apply_multiplier(g, &mut raw, |k, _| {
        let a = g.xi[k].abs();
        Complex64::new(if a == 0.0 { 0.0 } else { a.powf(gamma) }, 0.0)
    });
    Ok(raw_inverse(g, raw).0)
}
