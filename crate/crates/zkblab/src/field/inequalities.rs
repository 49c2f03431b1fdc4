use crate::error::{invalid, Error, Result};
use crate::field::grid::Field;
use crate::field::norms::{norm, NormKind};
use crate::field::spectral::{mixed_derivative, spectral_derivative, Axis};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// Relative sup over the outer ring below which a field counts as decayed.
pub const BOUNDARY_GUARD: f64 = 1e-6;

/// Both sides of an inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl InequalityCheck {
    /// Holds up to a relative rounding slack of 1e−12.
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + 1e-12) + 1e-300
    }

    /// rhs/lhs, infinite for a zero lhs.
    pub fn margin(&self) -> f64 {
        if self.lhs == 0.0 {
            f64::INFINITY
        } else {
            self.rhs / self.lhs
        }
    }
}

/// sup over the outermost two rows and columns divided by ‖f‖_∞.
pub fn boundary_ratio(f: &Field) -> f64 {
    let g = &f.grid;
    let sup = f.max_abs();
    if sup == 0.0 {
        return 0.0;
    }
    let mut edge = 0.0f64;
    for i in 0..g.nx {
        for j in 0..g.ny {
            if i < 2 || i >= g.nx - 2 || j < 2 || j >= g.ny - 2 {
                edge = edge.max(f.at(i, j).abs());
            }
        }
    }
    edge / sup
}

/// Rejects fields that have not decayed at the box edge.
pub fn require_boundary_clean(f: &Field) -> Result<()> {
    let ratio = boundary_ratio(f);
    if ratio >= BOUNDARY_GUARD {
        return Err(Error::DecayHypothesis { ratio, threshold: BOUNDARY_GUARD });
    }
    Ok(())
}

/// ‖f‖²_∞ ≤ 2(‖f_x‖‖f_y‖ + ‖f‖‖f_xy‖).
pub fn gn_linf_check(f: &Field) -> Result<InequalityCheck> {
    require_boundary_clean(f)?;
    let fx = spectral_derivative(f, Axis::X, 1);
    let fy = spectral_derivative(f, Axis::Y, 1);
    let fxy = mixed_derivative(f, 1, 1);
    let lhs = f.max_abs().powi(2);
    let rhs = 2.0 * (fx.l2() * fy.l2() + f.l2() * fxy.l2());
    Ok(InequalityCheck { lhs, rhs })
}

/// ‖f‖^{2q}_{L^{2q}} ≤ (q!)²‖f‖²‖f_x‖^{q−1}‖f_y‖^{q−1}.
pub fn gn_l2q_check(f: &Field, q: u32) -> Result<InequalityCheck> {
    if q < 1 {
        return Err(invalid("q", "must be >= 1"));
    }
    require_boundary_clean(f)?;
    let lhs = norm(f, NormKind::Lq(2 * q)).value.powi(2 * q as i32);
    let fact: f64 = (1..=q).map(|k| k as f64).product();
    let rhs = if q == 1 {
        f.l2().powi(2)
    } else {
        let fx = spectral_derivative(f, Axis::X, 1).l2();
        let fy = spectral_derivative(f, Axis::Y, 1).l2();
        fact * fact * f.l2().powi(2) * (fx * fy).powi(q as i32 - 1)
    };
    Ok(InequalityCheck { lhs, rhs })
}

/// C(s1,s2) = (1/2π)‖(1+ξ²)^{−s1/2}‖_{L²}‖(1+η²)^{−s2/2}‖_{L²}, using
/// ∫(1+ξ²)^{−s}dξ = √π Γ(s−1/2)/Γ(s).
pub fn product_constant(s1: f64, s2: f64) -> Result<f64> {
    for (name, s) in [("s1", s1), ("s2", s2)] {
        if !(s > 0.5) {
            return Err(invalid(name, format!("must exceed 1/2, got {s}")));
        }
    }
    let l2sq = |s: f64| PI.sqrt() * gamma(s - 0.5) / gamma(s);
    Ok((l2sq(s1) * l2sq(s2)).sqrt() / (2.0 * PI))
}

/// ‖FG‖_{L²} ≤ C(s1,s2)‖F‖_{H^{s1,0}}‖G‖_{H^{0,s2}}.
pub fn product_l2_check(f: &Field, g: &Field, s1: f64, s2: f64) -> Result<InequalityCheck> {
    let c = product_constant(s1, s2)?;
    if f.values.len() != g.values.len() {
        return Err(Error::ShapeMismatch { expected: f.values.len(), got: g.values.len() });
    }
    let lhs = f.zip_with(g, |a, b| a * b).l2();
    let rhs = c
        * norm(f, NormKind::Hs1s2(s1, 0.0)).value
        * norm(g, NormKind::Hs1s2(0.0, s2)).value;
    Ok(InequalityCheck { lhs, rhs })
}

/// sup_ξ (1+ξ²)^{a/2} e^{−μtξ²} in closed form.
pub fn smoothing_factor(a: f64, mu: f64, t: f64) -> Result<f64> {
    for (name, v) in [("a", a), ("mu", mu), ("t", t)] {
        if !(v > 0.0) {
            return Err(invalid(name, format!("must be positive, got {v}")));
        }
    }
    let r = a / (2.0 * mu * t);
    Ok(if r <= 1.0 { 1.0 } else { r.powf(a / 2.0) * (-mu * t * (r - 1.0)).exp() })
}
