//! Evaluate the fundamental solution U and the profile V* by both routes and
//! compare the sup of U against its explicit decay constant.
//!
//! Run: `cargo run --release --example kernels`

use zkblab::kernels::{decay_bound, eval_u, eval_u_grid, eval_vstar, QuadratureSpec};
use zkblab::{Grid, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();
    let mu = 1.0;

    let v = eval_vstar(0.0, 0.0, mu, 0, &spec)?;
    println!("V*(0, 0) = {:.12} (est. error {:.1e})", v.value, v.est_error);

    let grid = Grid::square(32.0, 256)?;
    for t in [0.5, 1.0, 4.0] {
        let u = eval_u_grid(&grid, t, mu)?;
        let (i, j) = (grid.x_origin(), grid.y_origin());
        let q = eval_u(0.0, 0.0, t, mu, 0, &spec)?;
        println!(
            "t = {t}: U(0,0) quadrature {:.10}, fft {:.10}; sup U {:.6} <= bound {:.6}; mass {:.10}",
            q.value,
            u.at(i, j),
            u.max_abs(),
            decay_bound(0, mu, t),
            u.integral()
        );
    }
    Ok(())
}
