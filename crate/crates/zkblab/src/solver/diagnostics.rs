use crate::field::{boundary_ratio, norm, spectral_derivative, Axis, Field, NormKind};
use serde::Serialize;

/// Per-step spectral quantities used by the time-integrated identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRecord {
    pub t: f64,
    /// ‖u‖²_{L²}.
    pub l2_sq: f64,
    /// ‖u_x‖²_{L²}.
    pub dx_sq: f64,
    /// d/dt ‖u_x‖²_{L²} from the right-hand side.
    pub dx_sq_rate: f64,
    /// ‖u‖²_{H^{2,1}}.
    pub h21_sq: f64,
    /// ‖u_x‖²_{H^{2,1}}.
    pub dx_h21_sq: f64,
}

/// Norms at one snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub l2: f64,
    pub linf_u: f64,
    pub linf_dxu: f64,
    pub l2_dxu: f64,
    pub h21: f64,
    pub dissipation_residual: f64,
    pub boundary_mass: f64,
}

impl DiagnosticsRow {
    pub(crate) fn measure(t: f64, u: &Field) -> Self {
        let ux = spectral_derivative(u, Axis::X, 1);
        DiagnosticsRow {
            t,
            l2: u.l2(),
            linf_u: u.max_abs(),
            linf_dxu: ux.max_abs(),
            l2_dxu: ux.l2(),
            h21: norm(u, NormKind::Hs1s2(2.0, 1.0)).value,
            dissipation_residual: 0.0,
            boundary_mass: boundary_ratio(u),
        }
    }

    /// H_l(t) = (1+t)^{3/4+l/2}‖∂_x^l u‖_∞ for l ∈ {0, 1}.
    pub fn h(&self, l: u32) -> f64 {
        let sup = if l == 0 { self.linf_u } else { self.linf_dxu };
        (1.0 + self.t).powf(0.75 + 0.5 * l as f64) * sup
    }

    /// K(t) = (1+t)^{1/4}‖u‖_{L²} + (1+t)^{3/4}‖u_x‖_{L²}.
    pub fn k(&self) -> f64 {
        (1.0 + self.t).powf(0.25) * self.l2 + (1.0 + self.t).powf(0.75) * self.l2_dxu
    }
}

/// Snapshot rows plus the per-step record.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub rows: Vec<DiagnosticsRow>,
    pub steps: Vec<StepRecord>,
}

impl Diagnostics {
    /// Max over the run of (‖u‖²_{H^{2,1}} + μ∫₀^t‖u_x‖²_{H^{2,1}}) / ‖u₀‖²_{H^{2,1}}.
    pub fn h21_energy_ratio(&self, mu: f64) -> f64 {
        let Some(first) = self.steps.first() else { return 0.0 };
        if first.h21_sq == 0.0 {
            return 0.0;
        }
        let mut integral = 0.0;
        let mut worst = 1.0f64;
        for w in self.steps.windows(2) {
            integral += 0.5 * (w[1].t - w[0].t) * (w[0].dx_h21_sq + w[1].dx_h21_sq);
            worst = worst.max((w[1].h21_sq + mu * integral) / first.h21_sq);
        }
        worst
    }
}
