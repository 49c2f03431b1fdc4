//! The slice functional M[∂_y^j u₀](w) = √(2π)∫𝓕_ξ⁻¹[𝓕[∂_y^j u₀](ξ, w/(2ξ))](x)dx.
//!
//! The 2D spectrum is taken on an x-line zero-padded to sixteen box lengths so
//! that the ξ-grid resolves the box-width Dirichlet kernel. Each ξ column is
//! interpolated cubically in η at η* = w/(2ξ) (zero outside the resolved
//! band), and the x-integral runs over the data box only, which mollifies the
//! slice near ξ = 0 at scale ~1/Lx. The x-integral reduces to
//! Σ_k S(ξ_k)D(ξ_k)dξ with the discrete Dirichlet kernel D(ξ) = dx Σ_i e^{iξx_i}.

use crate::error::{invalid, Result};
use crate::field::fft::{fft1, fft_rows, wavenumbers};
use crate::field::Field;
use num_complex::Complex64;
use std::f64::consts::PI;

type C = Complex64;

/// Default padding factor of the x-line.
pub const DEFAULT_PAD: usize = 16;

/// One evaluation of the functional with its quality metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MValue {
    pub value: f64,
    /// Fraction of ∫|g|dx in the outer 10% of the box, g the slice's inverse
    /// transform; large values mean the box truncation is visible.
    pub quality: f64,
}

/// Precomputed padded spectrum of ∂_y^j u₀.
#[derive(Debug, Clone)]
pub struct MFunctional {
    pub j: u32,
    lx: f64,
    nx: usize,
    ny: usize,
    deta: f64,
    /// Padded ξ axis in DFT order.
    xi: Vec<f64>,
    dxi: f64,
    /// 𝓕[u₀](ξ_k, η_s) with η ascending, η_s = (s − ny/2)·dη; `k * ny + s`.
    spec: Vec<C>,
    dirichlet: Vec<C>,
}

impl MFunctional {
    pub fn new(u0: &Field, j: u32) -> Result<Self> {
        Self::with_padding(u0, j, DEFAULT_PAD)
    }

    /// As [`MFunctional::new`] with the x-line padded to `pad` box lengths.
    pub fn with_padding(u0: &Field, j: u32, pad: usize) -> Result<Self> {
        if pad < 1 {
            return Err(invalid("pad", "must be >= 1"));
        }
        if j > 1 {
            return Err(invalid("j", format!("M-functional supports j <= 1, got {j}")));
        }
        let g = &u0.grid;
        let (nx, ny) = (g.nx, g.ny);
        let n = pad * nx;
        let xi = wavenumbers(n, g.dx);
        let dxi = 2.0 * PI / (n as f64 * g.dx);

        let mut ysp: Vec<C> = u0.values.iter().map(|&v| C::new(v, 0.0)).collect();
        fft_rows(&mut ysp, ny, false);
        let scale = g.cell() / (2.0 * PI);
        let mut spec = vec![C::default(); n * ny];
        let mut line = vec![C::default(); n];
        for s in 0..ny {
            let m = (s + ny / 2) % ny;
            if m == ny / 2 {
                continue; // Nyquist row: outside the symmetric resolved band
            }
            let ephase = C::from_polar(1.0, g.eta[m] * g.ly);
            line.iter_mut().for_each(|c| *c = C::default());
            for i in 0..nx {
                line[i] = ysp[i * ny + m];
            }
            fft1(&mut line, false);
            for k in 0..n {
                let xphase = C::from_polar(1.0, xi[k] * g.lx);
                spec[k * ny + s] = line[k] * xphase * ephase * scale;
            }
        }
        let dirichlet = xi
            .iter()
            .map(|&q| g.x.iter().map(|&x| C::from_polar(g.dx, q * x)).sum())
            .collect();
        Ok(MFunctional { j, lx: g.lx, nx, ny, deta: g.deta(), xi, dxi, spec, dirichlet })
    }

    /// Cubic interpolation of column k at η; zero outside the resolved band.
    fn interp(&self, k: usize, eta: f64) -> C {
        let ny = self.ny;
        let p = eta / self.deta + (ny / 2) as f64;
        if !(p > 0.0 && p < (ny - 1) as f64) {
            return C::default();
        }
        let i0 = p.floor() as isize;
        let f = p - i0 as f64;
        let at = |i: isize| {
            if i < 0 || i >= ny as isize {
                C::default()
            } else {
                self.spec[k * ny + i as usize]
            }
        };
        // Lagrange weights on nodes −1, 0, 1, 2.
        let w = [
            -f * (f - 1.0) * (f - 2.0) / 6.0,
            (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
            -(f + 1.0) * f * (f - 2.0) / 2.0,
            (f + 1.0) * f * (f - 1.0) / 6.0,
        ];
        at(i0 - 1) * w[0] + at(i0) * w[1] + at(i0 + 1) * w[2] + at(i0 + 2) * w[3]
    }

    /// 𝓕[∂_y^j u₀](ξ_k, η) on the padded ξ-grid.
    pub(crate) fn at(&self, k: usize, eta: f64) -> C {
        let v = self.interp(k, eta);
        if self.j == 1 {
            C::new(0.0, eta) * v
        } else {
            v
        }
    }

    /// Padded ξ-grid (DFT order) and its spacing.
    pub(crate) fn xi_axis(&self) -> (&[f64], f64) {
        (&self.xi, self.dxi)
    }

    /// The slice S(ξ_k) = 𝓕[∂_y^j u₀](ξ_k, w/(2ξ_k)); at ξ = 0 the limit is
    /// 𝓕[∂_y^j u₀](0, 0) for w = 0 and 0 otherwise.
    pub fn slice(&self, w: f64) -> Vec<C> {
        (0..self.xi.len())
            .map(|k| {
                let q = self.xi[k];
                if q == 0.0 {
                    if w == 0.0 {
                        self.at(0, 0.0)
                    } else {
                        C::default()
                    }
                } else {
                    self.at(k, w / (2.0 * q))
                }
            })
            .collect()
    }

    /// M[∂_y^j u₀](w) with its quality metric.
    pub fn eval(&self, w: f64) -> MValue {
        let s = self.slice(w);
        let value = s.iter().zip(&self.dirichlet).map(|(a, d)| a * d).sum::<C>().re * self.dxi;
        // g(x_i) on the data box, up to a constant factor.
        let mut g: Vec<C> =
            s.iter().zip(&self.xi).map(|(a, &q)| a * C::from_polar(1.0, -q * self.lx)).collect();
        fft1(&mut g, true);
        let edge = 0.9 * self.lx;
        let dx = 2.0 * self.lx / self.nx as f64;
        let (mut outer, mut total) = (0.0, 0.0);
        for (i, c) in g.iter().take(self.nx).enumerate() {
            let a = c.norm();
            total += a;
            if (-self.lx + i as f64 * dx).abs() > edge {
                outer += a;
            }
        }
        MValue { value, quality: if total > 0.0 { outer / total } else { 0.0 } }
    }
}

/// One-shot M[∂_y^j u₀](w); build an [`MFunctional`] for repeated use.
pub fn eval_m_functional(u0: &Field, j: u32, w: f64) -> Result<MValue> {
    Ok(MFunctional::new(u0, j)?.eval(w))
}
