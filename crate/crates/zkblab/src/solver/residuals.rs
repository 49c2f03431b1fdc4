use crate::error::{invalid, Result};
use crate::field::spectral::{raw_forward, raw_inverse};
use crate::solver::linear::propagator;
use crate::solver::nonlinear::Nonlinear;
use crate::solver::phi::product_weights;
use crate::solver::{Equation, Trajectory};
use num_complex::Complex64;

/// |‖u(t)‖² + 2μ∫₀^t‖u_x‖² − ‖u₀‖²| / ‖u₀‖² after every step.
///
/// The time integral is the endpoint-corrected trapezoid
/// h/2(f_k + f_{k+1}) + h²/12(f′_k − f′_{k+1}) with f′ taken from the
/// right-hand side, which is fourth order like the integrator.
pub fn dissipation_residual(traj: &Trajectory) -> Vec<(f64, f64)> {
    let steps = &traj.diagnostics.steps;
    let Some(first) = steps.first() else { return Vec::new() };
    let mu = traj.equation.mu;
    let e0 = first.l2_sq;
    let mut out = vec![(first.t, 0.0)];
    let mut integral = 0.0;
    for w in steps.windows(2) {
        let (a, b) = (w[0], w[1]);
        let h = b.t - a.t;
        integral += 0.5 * h * (a.dx_sq + b.dx_sq) + h * h / 12.0 * (a.dx_sq_rate - b.dx_sq_rate);
        let r = if e0 == 0.0 { 0.0 } else { (b.l2_sq + 2.0 * mu * integral - e0).abs() / e0 };
        out.push((b.t, r));
    }
    out
}

/// sup over snapshots t_{2k} of ‖u(t) − S(t)u₀ − ∫₀^t S(t−τ)𝓝(u(τ))dτ‖_{L²}/‖u₀‖_{L²}.
///
/// The τ-integral is a product Newton–Cotes rule: the semigroup factor
/// e^{λ(t−τ)} is integrated exactly against a polynomial interpolant of 𝓝̂,
/// so fast dispersive phases in the propagator cost nothing. 𝓝̂(τ) itself
/// still rotates at dispersive rates, which costs product Simpson its
/// symmetric error cancellation (about third order in the snapshot spacing),
/// so the default is the quartic rule [`TauRule::Boole`]. Snapshots must be
/// equally spaced from t = 0.
pub fn duhamel_residual(traj: &Trajectory, eq: &Equation) -> Result<f64> {
    duhamel_residual_with(traj, eq, TauRule::Boole)
}

/// Product Newton–Cotes rule for the Duhamel τ-integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauRule {
    /// Quadratic interpolant over snapshot pairs.
    Simpson,
    /// Quartic interpolant over groups of four intervals.
    Boole,
}

impl TauRule {
    fn degree(self) -> usize {
        match self {
            TauRule::Simpson => 2,
            TauRule::Boole => 4,
        }
    }
}

/// [`duhamel_residual`] with an explicit τ-rule; residuals are taken at every
/// d-th snapshot.
pub fn duhamel_residual_with(traj: &Trajectory, eq: &Equation, rule: TauRule) -> Result<f64> {
    let d = rule.degree();
    let snaps = &traj.snapshots;
    if snaps.len() < 33 {
        return Err(invalid(
            "snapshots",
            format!("need at least 33 snapshots for the τ-quadrature, got {}", snaps.len()),
        ));
    }
    let h = snaps[1].0 - snaps[0].0;
    let uniform = snaps[0].0.abs() < 1e-12
        && snaps.windows(2).all(|w| ((w[1].0 - w[0].0) - h).abs() < 1e-9 * h.max(1.0));
    if !uniform {
        return Err(invalid("snapshots", "must be equally spaced starting at t = 0"));
    }
    let grid = &snaps[0].1.grid;
    let u0 = &snaps[0].1;
    let n0 = u0.l2();
    if n0 == 0.0 {
        return Ok(0.0);
    }
    let big_h = d as f64 * h;
    let lam = propagator_symbol(grid, eq.mu);
    let step = propagator(grid, big_h, eq.mu);
    let weights: Vec<Vec<Complex64>> = lam.iter().map(|&l| product_weights(l, big_h, d)).collect();
    let mut nl = Nonlinear::new(grid, *eq, eq.default_pad());
    let mut nhat = |u: &crate::field::Field| -> Result<Vec<Complex64>> {
        let uh = raw_forward(u);
        let mut out = vec![Complex64::default(); uh.len()];
        nl.eval(&uh, &mut out, 0.0)?;
        Ok(out)
    };

    let u0hat = raw_forward(u0);
    let mut integral = vec![Complex64::default(); grid.len()];
    let mut group = vec![nhat(u0)?];
    let mut worst = 0.0f64;
    let mut c = 0;
    while c + d < snaps.len() {
        group.truncate(1);
        for s in &snaps[c + 1..=c + d] {
            group.push(nhat(&s.1)?);
        }
        for (q, acc) in integral.iter_mut().enumerate() {
            let w = &weights[q];
            *acc = step[q] * *acc + (0..=d).map(|j| w[j] * group[j][q]).sum::<Complex64>();
        }
        let t = snaps[c + d].0;
        let free = propagator(grid, t, eq.mu);
        let uhat = raw_forward(&snaps[c + d].1);
        let diff: Vec<Complex64> = (0..grid.len())
            .map(|q| uhat[q] - free[q] * u0hat[q] - integral[q])
            .collect();
        let (r, _) = raw_inverse(grid, diff);
        worst = worst.max(r.l2() / n0);
        group.swap(0, d);
        c += d;
    }
    Ok(worst)
}

/// λ(ξ,η) on the grid in raw layout, zero on the x-Nyquist column.
pub(crate) fn propagator_symbol(grid: &crate::field::Grid, mu: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(grid.len());
    for k in 0..grid.nx {
        let xi = grid.xi[k];
        for m in 0..grid.ny {
            let eta = grid.eta[m];
            out.push(if k == grid.nx / 2 {
                Complex64::default()
            } else {
                Complex64::new(-mu * xi * xi, xi * xi * xi + xi * eta * eta)
            });
        }
    }
    out
}
