//! Kernel checks: the explicit sup constant on the FFT grid and the
//! quadrature-vs-FFT cross-oracle.

use super::{Experiment, RateSeries, Verdict};
use crate::config::Config;
use crate::error::Result;
use crate::field::Grid;
use crate::kernels::{decay_bound, eval_u, eval_u_grid, eval_u_grid_dx, QuadratureSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NAME: &str = "kernels";

/// Stream offset so kernel test points differ from other seeded draws.
const POINT_STREAM: u64 = 0x6b65_726e;

pub fn experiment_kernels(cfg: &Config) -> Result<Experiment> {
    let k = &cfg.kernels;
    let mu = k.mu;
    let mut exp = Experiment::new(NAME);

    let grid = Grid::square(k.bound_l, k.bound_n)?;
    for l in [0u32, 1] {
        let mut sup = Vec::new();
        let mut bound = Vec::new();
        for &t in &k.bound_times {
            sup.push((t, eval_u_grid_dx(&grid, t, mu, l)?.max_abs()));
            bound.push((t, decay_bound(l, mu, t)));
        }
        let violations = sup.iter().zip(&bound).filter(|(s, b)| s.1 > b.1).count();
        let worst = sup.iter().zip(&bound).map(|(s, b)| s.1 / b.1).fold(0.0f64, f64::max);
        exp.push(Verdict::check(
            NAME,
            &format!("decay_constant_l{l}"),
            violations == 0,
            "sup_grid |d_x^l U(t)| <= Gamma((1+2l)/4)/(4 pi^(3/2) mu^((1+2l)/4)) t^(-3/4-l/2)",
            format!("{violations} violations at t = {:?}, worst sup/bound {worst:.4}", k.bound_times),
            vec![RateSeries::new(format!("sup_l{l}"), sup), RateSeries::new(format!("bound_l{l}"), bound)],
        ));
    }

    let grid = Grid::square(k.fft_l, k.fft_n)?;
    let spec = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ POINT_STREAM);
    let (lo, hi) = (grid.nx / 4, 3 * grid.nx / 4);
    let (lo_y, hi_y) = (grid.ny / 4, 3 * grid.ny / 4);
    let mut worst = Vec::new();
    for &t in &k.cross_times {
        let f = eval_u_grid(&grid, t, mu)?;
        let mut max_err = 0.0f64;
        for _ in 0..k.cross_points {
            let i = rng.gen_range(lo..=hi);
            let j = rng.gen_range(lo_y..=hi_y);
            let q = eval_u(grid.x[i], grid.y[j], t, mu, 0, &spec)?;
            max_err = max_err.max((q.value - f.at(i, j)).abs());
        }
        worst.push((t, max_err));
    }
    let max_err = worst.iter().map(|p| p.1).fold(0.0f64, f64::max);
    exp.push(Verdict::check(
        NAME,
        "cross_oracle",
        max_err <= k.cross_tol,
        format!("max |eval_u - eval_u_grid| <= {} at {} interior points per t", k.cross_tol, k.cross_points),
        format!("max difference {max_err:.3e} over t = {:?}", k.cross_times),
        vec![RateSeries::new("max_abs_difference", worst)],
    ));
    Ok(exp)
}
