//! Integrator self-consistency: the Duhamel residual and the ETDRK4 order.

use super::{least_squares, Experiment, RateSeries, Verdict};
use crate::config::Config;
use crate::error::Result;
use crate::field::{Field, Grid};
use crate::solver::{duhamel_residual_with, run, Equation, SimConfig, TauRule};

const NAME: &str = "integrator";

pub fn experiment_integrator(cfg: &Config) -> Result<Experiment> {
    let c = &cfg.integrator;
    let grid = Grid::square(c.l, c.n)?;
    let u0 = Field::gaussian(&grid, 1.0);
    let eq = Equation::new(cfg.equation.mu, cfg.equation.beta, c.p)?;
    let mut exp = Experiment::new(NAME);

    // Base run and one refinement: dt halved, snapshot count doubled.
    let mut res = Vec::new();
    for (dt, n) in [(c.duhamel_dt, c.duhamel_snapshots), (c.duhamel_dt / 2.0, 2 * c.duhamel_snapshots - 1)] {
        let sim = SimConfig::new(eq, grid.clone(), dt, c.duhamel_t_end)
            .uniform_snapshots(n)
            .with_guard(f64::INFINITY);
        let traj = run(&u0, &sim)?;
        let boole = duhamel_residual_with(&traj, &eq, TauRule::Boole)?;
        let simpson = duhamel_residual_with(&traj, &eq, TauRule::Simpson)?;
        res.push((dt, n, boole, simpson));
    }
    let (dt0, n0, b0, s0) = res[0];
    let (dt1, n1, b1, s1) = res[1];
    exp.push(
        Verdict::check(
            NAME,
            "duhamel",
            b0 < c.duhamel_tol,
            format!("Duhamel residual (product Boole in tau) < {}", c.duhamel_tol),
            format!("residual {b0:.3e} (dt = {dt0}, {n0} snapshots on [0, {}]); product Simpson {s0:.3e}", c.duhamel_t_end),
            Vec::new(),
        )
        .note(format!("p = {}, L = {}, N = {}", eq.p, c.l, c.n)),
    );
    exp.push(Verdict::check(
        NAME,
        "duhamel_refinement",
        b1 < b0,
        "residual decreases when dt is halved and snapshots doubled",
        format!("{b0:.3e} -> {b1:.3e} (dt {dt0} -> {dt1}, {n0} -> {n1} snapshots); product Simpson {s0:.3e} -> {s1:.3e}"),
        Vec::new(),
    ));

    // Richardson: successive differences at halved steps decay like dt⁴.
    let finals: Vec<Field> = c
        .richardson_dts
        .iter()
        .map(|&dt| {
            let sim = SimConfig::new(eq, grid.clone(), dt, c.richardson_t_end)
                .with_snapshots(vec![c.richardson_t_end])
                .with_guard(f64::INFINITY);
            run(&u0, &sim).map(|t| t.snapshots[0].1.clone())
        })
        .collect::<Result<_>>()?;
    let diffs: Vec<(f64, f64)> = c
        .richardson_dts
        .iter()
        .zip(finals.windows(2))
        .map(|(&dt, w)| (dt, w[0].max_diff(&w[1])))
        .collect();
    let x: Vec<f64> = diffs.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = diffs.iter().map(|p| p.1.ln()).collect();
    let (slope, _, _, _) = least_squares(&x, &y);
    let local: Vec<String> = diffs.windows(2).map(|w| format!("{:.2}", (w[0].1 / w[1].1).log2())).collect();
    exp.push(
        Verdict::check(
            NAME,
            "order",
            (slope - 4.0).abs() <= c.order_tol,
            format!("|fitted order - 4| <= {}", c.order_tol),
            format!("fitted order {slope:.3} (local {})", local.join(", ")),
            vec![RateSeries::new("successive_difference", diffs.iter().rev().copied().collect())],
        )
        .note(format!("p = {}, t = {}, dt = {:?}", eq.p, c.richardson_t_end, c.richardson_dts)),
    );
    Ok(exp)
}
