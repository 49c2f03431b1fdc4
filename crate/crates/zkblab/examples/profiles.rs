//! Build the asymptotic profiles of Gaussian data: the M-functional, ψ, the
//! profile 𝒱₀ and the W/R split of v.
//!
//! Run: `cargo run --release --example profiles`

use zkblab::field::{spectral_derivative, Axis};
use zkblab::kernels::{propagate_open_x, OpenFlow};
use zkblab::profiles::{math_v_grid, r_bound, wj_rj_split, MFunctional};
use zkblab::{Field, Grid, Result};

fn main() -> Result<()> {
    let grid = Grid::square(64.0, 512)?;
    let u0 = Field::gaussian(&grid, 1.0);
    let mu = 1.0;

    let mf = MFunctional::new(&u0, 0)?;
    for w in [0.0, 0.1, 1.0, 8.0] {
        let m = mf.eval(w);
        println!("M[G]({w}) = {:.10} (outer mass fraction {:.1e})", m.value, m.quality);
    }

    for t in [10.0, 100.0] {
        let s = propagate_open_x(&u0, t, OpenFlow::u(mu))?;
        let v = propagate_open_x(&u0, t, OpenFlow::v(mu))?;
        let psi = mf.psi_grid(&grid, t, mu, 0)?;
        let mv = math_v_grid(&u0, 0, t, mu, 0)?;
        let k = t.powf(0.75);
        println!(
            "t = {t}: t^(3/4)|S u0 - V0| = {:.4}, t^(3/4)|v - psi| = {:.4}",
            k * s.max_diff(&mv),
            k * v.max_diff(&psi)
        );
    }

    // The R bound needs zero x-mean per line, which ∂_x u₀ has.
    let d = spectral_derivative(&u0, Axis::X, 1);
    for t in [4.0, 16.0, 64.0] {
        let s = wj_rj_split(&d, 0, 0.0, t, mu)?;
        let r = s.r.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        println!("t = {t}: sup|R| on y = 0 is {r:.3e} <= bound {:.3e}", r_bound(&d, 0, t, mu, 0, 0.6)?);
    }
    Ok(())
}
