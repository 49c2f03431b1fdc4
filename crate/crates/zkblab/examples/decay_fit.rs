//! Measure the sup and L² decay rates of the linear flow on the whole line in
//! x and fit them on log–log axes.
//!
//! Run: `cargo run --release --example decay_fit`

use zkblab::harness::{fit_decay_rate, log_times, RateSeries};
use zkblab::kernels::{open_x_l2, propagate_open_x, OpenFlow};
use zkblab::{Field, Grid, Result};

fn main() -> Result<()> {
    let grid = Grid::square(64.0, 512)?;
    let u0 = Field::gaussian(&grid, 1.0);
    let mu = 1.0;
    for l in [0u32, 1] {
        let mut sup = Vec::new();
        let mut l2 = Vec::new();
        for t in log_times(5.0, 100.0, 9) {
            sup.push((t, propagate_open_x(&u0, t, OpenFlow::u(mu).dx(l))?.max_abs()));
            l2.push((t, open_x_l2(&u0, t, mu, l)?));
        }
        let fs = fit_decay_rate(&RateSeries::new("sup", sup))?;
        let f2 = fit_decay_rate(&RateSeries::new("l2", l2))?;
        println!(
            "l = {l}: sup slope {:.4} ± {:.4} (theory {}), L2 slope {:.4} ± {:.4} (theory {})",
            fs.slope,
            fs.slope_ci,
            -0.75 - 0.5 * l as f64,
            f2.slope,
            f2.slope_ci,
            -0.25 - 0.5 * l as f64
        );
    }
    Ok(())
}
