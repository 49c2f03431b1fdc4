use crate::field::grid::Field;
use crate::field::spectral::to_spectral;

/// Which norm to measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    L2,
    Lq(u32),
    Linf,
    /// Isotropic H^s with weight (1+ξ²+η²)^{s/2}.
    Hs(f64),
    /// Anisotropic H^{s1,s2} with weight (1+ξ²)^{s1/2}(1+η²)^{s2/2}.
    Hs1s2(f64, f64),
}

/// A norm value plus the resolution flag for Sobolev kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormValue {
    pub value: f64,
    /// False when more than 1e−8 of the energy sits in the outer third of
    /// the spectrum (Sobolev kinds only).
    pub resolved: bool,
}

/// Quadrature-weighted discrete norm.
pub fn norm(f: &Field, kind: NormKind) -> NormValue {
    let g = &f.grid;
    let exact = |value| NormValue { value, resolved: true };
    match kind {
        NormKind::L2 => exact((f.values.iter().map(|v| v * v).sum::<f64>() * g.cell()).sqrt()),
        NormKind::Lq(q) => {
            let q = q.max(1) as i32;
            let s: f64 = f.values.iter().map(|v| v.abs().powi(q)).sum::<f64>() * g.cell();
            exact(s.powf(1.0 / q as f64))
        }
        NormKind::Linf => exact(f.max_abs()),
        NormKind::Hs(s) => sobolev(f, |xi, eta| (1.0 + xi * xi + eta * eta).powf(s)),
        NormKind::Hs1s2(s1, s2) => {
            sobolev(f, |xi, eta| (1.0 + xi * xi).powf(s1) * (1.0 + eta * eta).powf(s2))
        }
    }
}

fn sobolev(f: &Field, weight2: impl Fn(f64, f64) -> f64) -> NormValue {
    let g = &f.grid;
    let spec = to_spectral(f);
    let (xcut, ycut) = (2.0 / 3.0 * g.xi[g.nx / 2].abs(), 2.0 / 3.0 * g.eta[g.ny / 2].abs());
    let (mut sum, mut total, mut tail) = (0.0, 0.0, 0.0);
    for k in 0..g.nx {
        for m in 0..g.ny {
            let e = spec.at(k, m).norm_sqr();
            sum += weight2(g.xi[k], g.eta[m]) * e;
            total += e;
            if g.xi[k].abs() > xcut || g.eta[m].abs() > ycut {
                tail += e;
            }
        }
    }
    let value = (sum * g.dxi() * g.deta()).sqrt();
    NormValue { value, resolved: total == 0.0 || tail <= 1e-8 * total }
}

impl Field {
    pub fn l2(&self) -> f64 {
        norm(self, NormKind::L2).value
    }

    pub fn l1(&self) -> f64 {
        norm(self, NormKind::Lq(1)).value
    }
}
