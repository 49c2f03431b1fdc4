//! Linear decay rates, the explicit sup bound, and the lower bound.

use super::{fit_decay_rate, floor_free, log_times, theory_slope, y_edge_ratio, Experiment, Rate, RateSeries, Verdict};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::field::{norm, require_boundary_clean, Field, NormKind};
use crate::kernels::{decay_bound, lower_bound_constant, open_x_l2, propagate_open_x, OpenFlow};
use crate::solver::{Equation, SimConfig};

const LINEAR: &str = "linear_decay";
const LOWER: &str = "lower_bound";

/// Sup decay, L² decay and the explicit sup constant for ∂_x^l S(t)u₀,
/// l in `decay.orders`, on a log grid of times.
///
/// The flow is whole-line in x, so nothing re-enters the box in x; a time is
/// dropped (and flagged) once mass reaches the y-edges beyond the guard.
pub fn experiment_linear_decay(cfg: &Config) -> Result<Experiment> {
    let grid = cfg.grid()?;
    let u0 = cfg.initial_data(&grid)?;
    require_boundary_clean(&u0)?;
    let mu = cfg.equation.mu;
    let d = &cfg.decay;
    let l1 = u0.l1();
    let mut exp = Experiment::new(LINEAR);
    for (&l, &tol) in d.orders.iter().zip(&d.tol_linf) {
        let mut sup = Vec::new();
        let mut l2 = Vec::new();
        let mut bound = Vec::new();
        let mut truncated = None;
        for t in log_times(d.t_min, d.t_max, d.n_times) {
            let s = propagate_open_x(&u0, t, OpenFlow::u(mu).dx(l))?;
            let edge = y_edge_ratio(&s);
            if edge > cfg.output.boundary_guard {
                truncated = Some((t, edge));
                break;
            }
            let m = s.max_abs();
            sup.push((t, m));
            l2.push((t, open_x_l2(&u0, t, mu, l)?));
            bound.push((t, m, decay_bound(l, mu, t) * l1));
        }
        let flag = truncated.map(|(t, e)| format!("series truncated at t = {t:.3}: y-edge ratio {e:.2e}"));

        let series = RateSeries::new(format!("linf_l{l}"), sup.clone());
        let mut v = match fit_decay_rate(&series) {
            Ok(fit) => Verdict::from_fit(LINEAR, &format!("linf_l{l}"), fit.with_theory(theory_slope(Rate::DecayLinf, l), tol)),
            Err(e) => Verdict::check(LINEAR, &format!("linf_l{l}"), false, "fit", e.to_string(), vec![series]),
        };
        if let Some(f) = &flag {
            v = v.note(f.clone());
        }
        exp.push(v);

        let series = RateSeries::new(format!("l2_l{l}"), l2);
        exp.push(match fit_decay_rate(&series) {
            Ok(fit) => Verdict::from_fit(LINEAR, &format!("l2_l{l}"), fit.with_theory(theory_slope(Rate::DecayL2, l), d.tol_l2)),
            Err(e) => Verdict::check(LINEAR, &format!("l2_l{l}"), false, "fit", e.to_string(), vec![series]),
        });

        let worst = bound.iter().map(|(_, m, b)| m / b).fold(0.0f64, f64::max);
        let violations = bound.iter().filter(|(_, m, b)| m > b).count();
        exp.push(Verdict::check(
            LINEAR,
            &format!("bound_l{l}"),
            violations == 0 && !bound.is_empty(),
            "sup|d_x^l S(t)u0| <= decay_bound(l, mu, t) * |u0|_L1 at every t",
            format!("{violations} violations over {} times, worst sup/bound {worst:.4}", bound.len()),
            vec![
                RateSeries::new(format!("sup_l{l}"), bound.iter().map(|p| (p.0, p.1)).collect()),
                RateSeries::new(format!("bound_l{l}"), bound.iter().map(|p| (p.0, p.2)).collect()),
            ],
        ));
    }
    Ok(exp)
}

/// Amplitude a with ‖aG‖_{H^{2,1}} + ‖aG‖_{L¹} = budget for the data shape G.
pub fn small_data_amplitude(shape: &Field, budget: f64) -> f64 {
    let size = norm(shape, NormKind::Hs1s2(2.0, 1.0)).value + shape.l1();
    if size == 0.0 {
        0.0
    } else {
        budget / size
    }
}

/// t^{3/4+l/2}‖∂_x^l S(t)u₀‖_∞ against factor·c₀(l,μ)|∫∫u₀|, linear and for a
/// small-data nonlinear run.
pub fn experiment_lower_bound(cfg: &Config) -> Result<Experiment> {
    let grid = cfg.grid()?;
    let shape = cfg.initial_data(&grid)?;
    require_boundary_clean(&shape)?;
    let mu = cfg.equation.mu;
    let lb = &cfg.lower_bound;
    let l = lb.l;
    let mass = shape.integral();
    if mass.abs() <= 1e-12 * shape.l1().max(f64::MIN_POSITIVE) {
        return Err(Error::Hypothesis(format!("∫∫u₀ ≠ 0 violated (∫∫u₀ = {mass:.3e})")));
    }
    let c0 = lower_bound_constant(l, mu);
    let scale = |t: f64| t.powf(0.75 + 0.5 * l as f64);
    let mut exp = Experiment::new(LOWER);

    let threshold = lb.factor * c0 * mass.abs();
    let mut tracked = Vec::new();
    for &t in &lb.times {
        let s = propagate_open_x(&shape, t, OpenFlow::u(mu).dx(l))?;
        tracked.push((t, scale(t) * s.max_abs()));
    }
    exp.push(lower_verdict("linear", tracked, threshold, lb.factor, c0, mass));

    if lb.nonlinear {
        let amp = small_data_amplitude(&shape, lb.small_data_budget);
        let u0 = shape.scale(amp);
        let eq = Equation::new(mu, cfg.equation.beta, cfg.equation.p)?;
        let tn = lb.nonlinear_t;
        let mut times: Vec<f64> = [0.0, 0.25, 0.5, 0.75, 1.0].into_iter().filter(|&t| t < tn).collect();
        let mut t = 2.0;
        while t < tn {
            times.push(t);
            t *= 2.0;
        }
        times.push(tn);
        let mut sim = SimConfig::new(eq, grid.clone(), lb.nonlinear_dt, tn)
            .with_snapshots(times)
            .with_guard(f64::INFINITY);
        if cfg.grid.dealias_pad != 0.0 {
            sim.dealias_pad = cfg.grid.dealias_pad;
        }
        let traj = crate::solver::run(&u0, &sim)?;
        let energy = traj.diagnostics.h21_energy_ratio(mu);
        let (fields, edge) = floor_free(&u0, &traj, l, lb.nonlinear_guard)?;
        let nl_mass = u0.integral();
        let last = fields.last().expect("final snapshot");
        let value = scale(last.0) * last.1.max_abs();
        let note = format!(
            "amplitude {amp:.6} (|u0|_H21 + |u0|_L1 = {}), p = {}, dt = {}, max wrap ratio {edge:.2e}",
            lb.small_data_budget, eq.p, lb.nonlinear_dt
        );
        exp.push(
            lower_verdict("nonlinear", vec![(last.0, value)], lb.nonlinear_factor * c0 * nl_mass.abs(), lb.nonlinear_factor, c0, nl_mass)
                .note(note.clone()),
        );

        // H_0(t) = (1+t)^{3/4}‖u‖_∞ along the floor-free solution.
        let h0: Vec<(f64, f64)> = if l == 0 {
            fields.iter().map(|(t, f)| (*t, (1.0 + t).powf(0.75) * f.max_abs())).collect()
        } else {
            floor_free(&u0, &traj, 0, lb.nonlinear_guard)?
                .0
                .iter()
                .map(|(t, f)| (*t, (1.0 + t).powf(0.75) * f.max_abs()))
                .collect()
        };
        let early = h0.iter().filter(|p| p.0 <= 1.0).map(|p| p.1).fold(0.0f64, f64::max);
        let peak = h0.iter().map(|p| p.1).fold(0.0f64, f64::max);
        exp.push(
            Verdict::check(
                LOWER,
                "h0_bounded",
                peak <= 1.5 * early,
                "max_t H0(t) <= 1.5 max_{t<=1} H0(t)",
                format!("max H0 {peak:.4e}, 1.5 x early max {:.4e}", 1.5 * early),
                vec![RateSeries::new("h0", h0)],
            )
            .note(note.clone()),
        );
        exp.push(
            Verdict::check(
                LOWER,
                "h21_energy",
                energy <= 10.0,
                "max_t (|u|^2_H21 + mu int |u_x|^2_H21) / |u0|^2_H21 <= 10",
                format!("empirical max ratio {energy:.6}"),
                Vec::new(),
            )
            .note(note),
        );
    }
    Ok(exp)
}

fn lower_verdict(name: &str, tracked: Vec<(f64, f64)>, threshold: f64, factor: f64, c0: f64, mass: f64) -> Verdict {
    let below: Vec<f64> = tracked.iter().filter(|p| p.1 < threshold).map(|p| p.0).collect();
    let first_cross = tracked.iter().position(|p| p.1 >= threshold);
    let dips = first_cross.map_or(0, |k| tracked[k..].iter().filter(|p| p.1 < threshold).count());
    let min = tracked.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let mut v = Verdict::check(
        LOWER,
        name,
        below.is_empty() && !tracked.is_empty(),
        format!("t^(3/4+l/2) sup|d_x^l u| >= {factor} * c0 * |mass| = {threshold:.6}"),
        format!("min tracked {min:.5} vs threshold {threshold:.5} (c0 = {c0:.6}, mass = {mass:.6})"),
        vec![RateSeries::new(format!("{name}_tracked"), tracked)],
    );
    if dips > 0 {
        v = v.note(format!("tracked value dips below threshold {dips} time(s) after first crossing"));
    }
    if !below.is_empty() {
        v = v.note(format!("below threshold at t = {below:?}"));
    }
    v
}
