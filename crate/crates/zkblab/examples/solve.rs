//! Evolve the nonlinear equation from a Gaussian and print the snapshot
//! diagnostics and both integrator residuals.
//!
//! Run: `cargo run --release --example solve`

use zkblab::solver::{dissipation_residual, duhamel_residual, run, Equation, SimConfig};
use zkblab::{Field, Grid, Result};

fn main() -> Result<()> {
    let grid = Grid::square(16.0, 128)?;
    let eq = Equation::new(1.0, 1.0, 2)?;
    let u0 = Field::gaussian(&grid, 1.0);
    let sim = SimConfig::new(eq, grid, 0.01, 2.0).uniform_snapshots(65).with_guard(f64::INFINITY);
    let traj = run(&u0, &sim)?;

    println!("{:>6} {:>12} {:>12} {:>12} {:>10}", "t", "L2", "sup u", "H0(t)", "edge");
    for r in traj.diagnostics.rows.iter().step_by(8) {
        println!("{:6.3} {:12.6e} {:12.6e} {:12.6e} {:10.2e}", r.t, r.l2, r.linf_u, r.h(0), r.boundary_mass);
    }
    let dissipation = dissipation_residual(&traj).iter().map(|p| p.1).fold(0.0f64, f64::max);
    println!("max dissipation residual {dissipation:.3e}");
    println!("Duhamel residual {:.3e}", duhamel_residual(&traj, &eq)?);
    Ok(())
}
