//! Linear semigroup, nonlinear term, ETDRK4 runs and residual diagnostics.

use std::sync::Arc;
use zkblab::solver::{
    advance, dissipation_residual, duhamel_residual, linear_propagate, nonlinear_term, run, Equation, SimConfig,
};
use zkblab::{Field, Grid};

/// Resolved to round-off at the Nyquist column, which the stepper zeroes.
fn grid() -> Arc<Grid> {
    Grid::square(16.0, 128).unwrap()
}

fn bump(g: &Arc<Grid>) -> Field {
    Field::from_fn(g, |x, y| (-(x - 0.5).powi(2) - 1.5 * y * y).exp() + 0.3 * (-(x + 1.0).powi(2) - (y - 1.0).powi(2)).exp())
}

/// ∫u dx at each grid row y_j.
fn x_integrals(f: &Field) -> Vec<f64> {
    let g = &f.grid;
    (0..g.ny).map(|j| (0..g.nx).map(|i| f.at(i, j)).sum::<f64>() * g.dx).collect()
}

#[test]
fn linear_identity_at_zero() {
    let u0 = bump(&grid());
    assert_eq!(linear_propagate(&u0, 0.0, 1.0).values, u0.values);
}

#[test]
fn linear_l2_strictly_decreases() {
    let u0 = bump(&grid());
    let mut prev = u0.l2();
    for t in [0.1, 0.5, 1.0, 2.0] {
        let n = linear_propagate(&u0, t, 1.0).l2();
        assert!(n < prev);
        prev = n;
    }
}

#[test]
fn linear_semigroup() {
    let u0 = bump(&grid());
    let a = linear_propagate(&linear_propagate(&u0, 0.7, 1.0), 1.3, 1.0);
    let b = linear_propagate(&u0, 2.0, 1.0);
    assert!(a.max_diff(&b) < 1e-12);
}

#[test]
fn nonlinear_term_cases() {
    let g = Grid::square(std::f64::consts::PI, 32).unwrap();
    let eq = Equation::new(1.0, 2.0, 1).unwrap();
    let c = Field::from_fn(&g, |_, _| 3.0);
    assert!(nonlinear_term(&c, &eq, eq.default_pad()).unwrap().max_abs() < 1e-12);

    let s = Field::from_fn(&g, |x, _| x.sin());
    let exact = Field::from_fn(&g, |x, _| -(2.0 / 2.0) * (2.0 * x).sin());
    assert!(nonlinear_term(&s, &eq, eq.default_pad()).unwrap().max_diff(&exact) < 1e-10);

    let off = Equation::new(1.0, 0.0, 2).unwrap();
    assert_eq!(nonlinear_term(&s, &off, off.default_pad()).unwrap().max_abs(), 0.0);

    let u = bump(&grid());
    let plus = Equation::new(1.0, 1.0, 3).unwrap();
    let minus = Equation::new(1.0, -1.0, 3).unwrap();
    let a = nonlinear_term(&u, &plus, plus.default_pad()).unwrap();
    let b = nonlinear_term(&u, &minus, minus.default_pad()).unwrap();
    assert!(a.add(&b).max_abs() < 1e-14);
}

#[test]
fn padding_defaults() {
    for (p, pad) in [(1, 2.0), (2, 2.0), (3, 3.0), (4, 3.0)] {
        assert_eq!(Equation::new(1.0, 1.0, p).unwrap().default_pad(), pad);
    }
    assert!(Equation::new(0.0, 1.0, 1).is_err());
    assert!(Equation::new(1.0, 1.0, 0).is_err());
    assert!(Equation::new(1.0, f64::NAN, 1).is_err());
    let eq = Equation::new(1.0, 1.0, 3).unwrap();
    let mut sim = SimConfig::new(eq, grid(), 0.01, 1.0);
    sim.dealias_pad = 2.0;
    assert!(run(&bump(&grid()), &sim).is_err());
}

#[test]
fn linear_step_matches_semigroup() {
    let g = grid();
    let u0 = bump(&g);
    let eq = Equation::new(1.0, 0.0, 2).unwrap();
    let sim = SimConfig::new(eq, g.clone(), 0.05, 1.0).with_guard(f64::INFINITY);
    let one = advance(&u0, 0.0, &sim).unwrap();
    assert!(one.max_diff(&linear_propagate(&u0, 0.05, 1.0)) < 1e-12);

    let traj = run(&u0, &sim.clone().uniform_snapshots(5)).unwrap();
    for (t, f) in &traj.snapshots {
        assert!(f.max_diff(&linear_propagate(&u0, *t, 1.0)) < 1e-10, "t = {t}");
    }
}

#[test]
fn zero_data_stays_zero() {
    let g = grid();
    let eq = Equation::new(1.0, 1.0, 2).unwrap();
    let sim = SimConfig::new(eq, g.clone(), 0.05, 1.0).uniform_snapshots(3);
    // Zero data never reaches the edges, so the strict guard is kept.
    let traj = run(&Field::zeros(&g), &sim).unwrap();
    assert!(traj.snapshots.iter().all(|(_, f)| f.max_abs() == 0.0));
    assert!(dissipation_residual(&traj).iter().all(|r| r.1 == 0.0));
}

#[test]
fn strict_guard_trips_on_dispersive_edge_flux() {
    // Modes with ξ ≈ 0 and large η travel at speed ≈ η² with little damping.
    let g = grid();
    let eq = Equation::new(1.0, 1.0, 2).unwrap();
    let err = run(&bump(&g), &SimConfig::new(eq, g.clone(), 0.05, 0.5)).unwrap_err();
    assert!(matches!(err, zkblab::Error::BoundaryContamination { .. }));
}

#[test]
fn empty_snapshot_list_is_valid() {
    let g = grid();
    let eq = Equation::new(1.0, 1.0, 2).unwrap();
    let traj = run(&bump(&g), &SimConfig::new(eq, g.clone(), 0.05, 0.5).with_guard(f64::INFINITY)).unwrap();
    assert!(traj.snapshots.is_empty());
    assert!(!traj.diagnostics.steps.is_empty());
}

#[test]
fn snapshot_times_hit_exactly() {
    let g = grid();
    let eq = Equation::new(1.0, 1.0, 2).unwrap();
    let times = vec![0.0, 0.013, 0.5, 0.77];
    let sim = SimConfig::new(eq, g.clone(), 0.05, 1.0).with_snapshots(times.clone()).with_guard(f64::INFINITY);
    let traj = run(&bump(&g), &sim).unwrap();
    let got: Vec<f64> = traj.snapshots.iter().map(|s| s.0).collect();
    assert_eq!(got, times);
    assert!(traj.snapshots[0].1.max_diff(&bump(&g)) < 1e-14);
}

#[test]
fn nonlinear_run_conserves_x_integrals() {
    let g = grid();
    let u0 = bump(&g);
    let eq = Equation::new(1.0, 1.0, 2).unwrap();
    let sim = SimConfig::new(eq, g.clone(), 0.02, 1.0).uniform_snapshots(3).with_guard(f64::INFINITY);
    let traj = run(&u0, &sim).unwrap();
    let m0 = x_integrals(&u0);
    for (_, f) in &traj.snapshots {
        for (a, b) in m0.iter().zip(x_integrals(f)) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn dissipation_identity_nonlinear() {
    let g = grid();
    let eq = Equation::new(1.0, 1.0, 2).unwrap();
    let sim = SimConfig::new(eq, g.clone(), 0.01, 1.0).uniform_snapshots(5).with_guard(f64::INFINITY);
    let traj = run(&bump(&g), &sim).unwrap();
    let worst = dissipation_residual(&traj).iter().fold(0.0f64, |a, r| a.max(r.1));
    assert!(worst < 1e-6, "worst {worst}");
}

#[test]
fn duhamel_residual_cases() {
    let g = grid();
    let u0 = bump(&g);
    let lin = Equation::new(1.0, 0.0, 2).unwrap();
    let sim = SimConfig::new(lin, g.clone(), 0.05, 1.6).uniform_snapshots(33).with_guard(f64::INFINITY);
    let traj = run(&u0, &sim).unwrap();
    assert!(duhamel_residual(&traj, &lin).unwrap() < 1e-10);

    let eq = Equation::new(1.0, 1.0, 2).unwrap();
    let sim = SimConfig::new(eq, g.clone(), 0.0125, 1.6).uniform_snapshots(33).with_guard(f64::INFINITY);
    let traj = run(&u0, &sim).unwrap();
    let right = duhamel_residual(&traj, &eq).unwrap();
    let wrong = duhamel_residual(&traj, &Equation::new(1.0, -1.0, 2).unwrap()).unwrap();
    assert!(right < 1e-3, "right {right}");
    assert!(wrong > 100.0 * right, "right {right}, wrong {wrong}");

    let sim = SimConfig::new(eq, g.clone(), 0.05, 1.0).uniform_snapshots(9).with_guard(f64::INFINITY);
    let short = run(&u0, &sim).unwrap();
    assert!(duhamel_residual(&short, &eq).is_err());
}

#[test]
fn boundary_guard_stops_contaminated_runs() {
    let g = Grid::square(6.0, 32).unwrap();
    let u0 = Field::from_fn(&g, |x, y| (-(x - 5.0).powi(2) - y * y).exp());
    let eq = Equation::new(1.0, 0.0, 1).unwrap();
    let err = run(&u0, &SimConfig::new(eq, g.clone(), 0.05, 1.0)).unwrap_err();
    assert!(matches!(err, zkblab::Error::BoundaryContamination { .. }));
}
