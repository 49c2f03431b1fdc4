use crate::error::Result;
use crate::field::spectral::{raw_forward, raw_inverse};
use crate::field::{Field, Grid};
use crate::kernels::{propagate_open_x, OpenFlow};
use num_complex::Complex64;

/// e^{tλ} on the grid in raw DFT layout; the x-Nyquist column is zeroed
/// because the symbol there is complex and would break realness.
pub(crate) fn propagator(grid: &Grid, t: f64, mu: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(grid.len());
    for k in 0..grid.nx {
        let xi = grid.xi[k];
        for m in 0..grid.ny {
            let eta = grid.eta[m];
            out.push(if k == grid.nx / 2 {
                Complex64::default()
            } else {
                Complex64::from_polar(
                    (-mu * t * xi * xi).exp(),
                    t * (xi * xi * xi + xi * eta * eta),
                )
            });
        }
    }
    out
}

/// Exact discrete semigroup S(t) on the periodic box.
pub fn linear_propagate(u0: &Field, t: f64, mu: f64) -> Field {
    if t == 0.0 {
        return u0.clone();
    }
    let mut raw = raw_forward(u0);
    for (c, e) in raw.iter_mut().zip(propagator(&u0.grid, t, mu)) {
        *c *= e;
    }
    raw_inverse(&u0.grid, raw).0
}

/// S(t)u₀ evaluated as on ℝ² in x (see [`propagate_open_x`]); use for decay
/// studies where the periodic x-mean floor would dominate.
pub fn linear_propagate_unbounded(u0: &Field, t: f64, flow: OpenFlow) -> Result<Field> {
    propagate_open_x(u0, t, flow)
}
