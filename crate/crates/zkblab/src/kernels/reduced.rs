//! The one-sided reduced integral shared by U and V*:
//!
//! ```text
//! I = ∫₀^∞ (iξ)^l ξ^{−1/2} exp(−Dξ² + i(Cξ³ − a/ξ + xξ + π/4)) dξ.
//! ```
//!
//! The negative half-line is the complex conjugate, so kernels are 2·Re I
//! times a prefactor. Two pieces:
//!
//! - ξ ∈ [δ, Ξ] with ξ = s², which removes ξ^{−1/2}; panels are sized so each
//!   holds about one oscillation of the phase.
//! - ξ ∈ (0, δ) where e^{−ia/ξ} oscillates without bound. With w = 1/ξ it
//!   becomes ∫_W^∞ w^{−3/2} h(1/w) e^{−iaw} dw, and the contour is turned onto
//!   the ray w = W − iτ, on which e^{−iaw} decays like e^{−aτ}.

use super::quad::{integrate, QuadResult};
use super::QuadratureSpec;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Reduced {
    /// Damping D (μt for U, μ for V*).
    pub damp: f64,
    /// Cubic phase C (t for U, 0 for V).
    pub cubic: f64,
    pub x: f64,
    /// Fresnel phase a = y²/(4t).
    pub a: f64,
    pub l: u32,
}

#[inline]
fn i_pow(l: u32) -> Complex64 {
    match l % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl Reduced {
    /// Upper cutoff Ξ with e^{−DΞ²} = e^{−cutoff}.
    fn xi_max(&self, spec: &QuadratureSpec) -> f64 {
        (spec.gaussian_cutoff / self.damp).sqrt()
    }

    /// Split point δ: at least the configured split, pushed up to `a` so the
    /// straight piece starts with O(1) Fresnel phase, and capped so that the
    /// analytic factors stay O(1) on the disk |ξ| ≤ δ used by the ray.
    fn split(&self, spec: &QuadratureSpec) -> f64 {
        let mut cap = 0.5 / self.damp.sqrt();
        if self.x != 0.0 {
            cap = cap.min(2.0 / self.x.abs());
        }
        if self.cubic > 0.0 {
            cap = cap.min(0.5 / self.cubic.cbrt());
        }
        cap = cap.min(0.5 * self.xi_max(spec));
        self.a.max(spec.singularity_split).min(cap)
    }

    /// Straight piece in s = √ξ over [s0, s1].
    fn straight(&self, s0: f64, s1: f64, spec: &QuadratureSpec, abs_tol: f64) -> QuadResult {
        let Reduced { damp, cubic, x, a, l } = *self;
        let pre = 2.0 * i_pow(l);
        let f = move |s: f64| {
            let s2 = s * s;
            let s4 = s2 * s2;
            let phase = cubic * s4 * s2 - a / s2 + x * s2 + FRAC_PI_4;
            pre * s2.powi(l as i32) * Complex64::from_polar((-damp * s4).exp(), phase)
        };
        // Local oscillation rate in s: |φ′| and √|φ″|, plus the damping rate.
        let rate = |s: f64| {
            let s2 = s * s;
            let d1 = 6.0 * cubic * s2 * s2 * s + 2.0 * a / (s2 * s) + 2.0 * x * s;
            let d2 = 30.0 * cubic * s2 * s2 - 6.0 * a / (s2 * s2) + 2.0 * x;
            d1.abs() / (2.0 * PI) + (d2.abs() / (2.0 * PI)).sqrt() + 4.0 * damp * s2 * s
        };
        let hmax = (s1 - s0) / 4.0;
        let hmin = (s1 - s0) * 1e-9;
        let width = |s: f64| (1.0 / rate(s).max(1e-300)).clamp(hmin, hmax);
        let mut edges = vec![s0];
        let mut s = s0;
        while s < s1 {
            let h = width(s).min(width((s + width(s)).min(s1)));
            s = (s + h).min(s1);
            edges.push(s);
        }
        let n = (edges.len() - 1) as f64;
        edges.windows(2).fold(QuadResult::zero(), |acc, w| {
            acc.add(integrate(&f, w[0], w[1], abs_tol / n, spec.rel_tol, spec.max_subdivisions))
        })
    }

    /// Piece ξ ∈ (0, δ) along the ray w = W − iτ, τ ∈ [0, T].
    fn ray(&self, delta: f64, spec: &QuadratureSpec, abs_tol: f64) -> QuadResult {
        let Reduced { damp, cubic, x, a, l } = *self;
        let big_w = 1.0 / delta;
        let front = Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, -a * big_w);
        let f = move |tau: f64| {
            let w = Complex64::new(big_w, -tau);
            let xi = w.inv();
            let expo = -damp * xi * xi
                + Complex64::i() * (cubic * xi * xi * xi + x * xi + FRAC_PI_4);
            front * (Complex64::i() * xi).powu(l) * w.powf(-1.5) * expo.exp() * (-a * tau).exp()
        };
        let t_end = if a > 0.0 { (40.0 / a).min(big_w * 1e30) } else { big_w * 1e30 };
        let mut edges = vec![0.0];
        let mut e = big_w.min(t_end);
        edges.push(e);
        while e < t_end {
            e = (2.0 * e).min(t_end);
            edges.push(e);
        }
        let n = (edges.len() - 1) as f64;
        edges.windows(2).fold(QuadResult::zero(), |acc, w| {
            acc.add(integrate(&f, w[0], w[1], abs_tol / n, spec.rel_tol, spec.max_subdivisions))
        })
    }

    /// Evaluates I; `abs_tol` applies to I itself.
    pub fn integrate(&self, spec: &QuadratureSpec, abs_tol: f64) -> QuadResult {
        let s_max = self.xi_max(spec).sqrt();
        if self.a == 0.0 {
            return self.straight(0.0, s_max, spec, abs_tol);
        }
        let delta = self.split(spec);
        let straight = self.straight(delta.sqrt(), s_max, spec, 0.5 * abs_tol);
        straight.add(self.ray(delta, spec, 0.5 * abs_tol))
    }
}
