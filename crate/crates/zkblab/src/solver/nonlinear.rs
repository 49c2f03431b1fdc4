use crate::error::{Error, Result};
use crate::field::fft::fft2;
use crate::field::spectral::{raw_forward, raw_inverse};
use crate::field::{Field, Grid};
use crate::solver::Equation;
use num_complex::Complex64;
use std::sync::Arc;

/// De-aliased evaluation of 𝓝̂(u) = −β/(p+1)·iξ·(u^{p+1})^ in raw DFT layout.
pub struct Nonlinear {
    grid: Arc<Grid>,
    eq: Equation,
    mx: usize,
    my: usize,
    buf: Vec<Complex64>,
}

/// Maps an index of an n-point spectrum into an m-point one; Nyquist → None.
#[inline]
fn embed(k: usize, n: usize, m: usize) -> Option<usize> {
    if k < n / 2 {
        Some(k)
    } else if k > n / 2 {
        Some(k + m - n)
    } else {
        None
    }
}

impl Nonlinear {
    pub fn new(grid: &Arc<Grid>, eq: Equation, pad: f64) -> Self {
        let size = |n: usize| {
            let m = (pad * n as f64).ceil() as usize;
            m + m % 2
        };
        let (mx, my) = (size(grid.nx), size(grid.ny));
        Nonlinear { grid: grid.clone(), eq, mx, my, buf: vec![Complex64::default(); mx * my] }
    }

    /// Padded transform sizes.
    pub fn padded(&self) -> (usize, usize) {
        (self.mx, self.my)
    }

    /// Writes 𝓝̂ of the raw spectrum `uhat` into `out`.
    pub fn eval(&mut self, uhat: &[Complex64], out: &mut [Complex64], t: f64) -> Result<()> {
        let g = &self.grid;
        let (nx, ny, mx, my) = (g.nx, g.ny, self.mx, self.my);
        out.iter_mut().for_each(|c| *c = Complex64::default());
        if self.eq.beta == 0.0 {
            return Ok(());
        }
        self.buf.iter_mut().for_each(|c| *c = Complex64::default());
        for k in 0..nx {
            let Some(kp) = embed(k, nx, mx) else { continue };
            for m in 0..ny {
                let Some(mp) = embed(m, ny, my) else { continue };
                self.buf[kp * my + mp] = uhat[k * ny + m];
            }
        }
        fft2(&mut self.buf, mx, my, true);
        let inv = 1.0 / (nx * ny) as f64;
        let e = self.eq.p as i32 + 1;
        for c in self.buf.iter_mut() {
            let v = (c.re * inv).powi(e);
            if !v.is_finite() {
                return Err(Error::AmplitudeBlowup { t });
            }
            *c = Complex64::new(v, 0.0);
        }
        fft2(&mut self.buf, mx, my, false);
        let back = (nx * ny) as f64 / (mx * my) as f64;
        let coef = -self.eq.beta / (self.eq.p as f64 + 1.0) * back;
        for k in 0..nx {
            let Some(kp) = embed(k, nx, mx) else { continue };
            let ik = Complex64::new(0.0, g.xi[k] * coef);
            for m in 0..ny {
                let Some(mp) = embed(m, ny, my) else { continue };
                out[k * ny + m] = ik * self.buf[kp * my + mp];
            }
        }
        Ok(())
    }
}

/// −β/(p+1)·∂_x(u^{p+1}) with de-aliasing at padding factor `pad`.
pub fn nonlinear_term(u: &Field, eq: &Equation, pad: f64) -> Result<Field> {
    let mut nl = Nonlinear::new(&u.grid, *eq, pad);
    let uhat = raw_forward(u);
    let mut out = vec![Complex64::default(); uhat.len()];
    nl.eval(&uhat, &mut out, 0.0)?;
    Ok(raw_inverse(&u.grid, out).0)
}
