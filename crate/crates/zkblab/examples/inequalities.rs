//! Check the Gagliardo–Nirenberg-type and product inequalities on a few
//! smooth fields and print their margins.
//!
//! Run: `cargo run --release --example inequalities`

use zkblab::field::{gn_l2q_check, gn_linf_check, product_l2_check, smoothing_factor};
use zkblab::harness::structured_corpus;
use zkblab::{Grid, Result};

fn main() -> Result<()> {
    let grid = Grid::square(32.0, 256)?;
    let corpus = structured_corpus(&grid);
    for (k, (name, f)) in corpus.iter().enumerate().take(6) {
        let linf = gn_linf_check(f)?;
        let l2q = gn_l2q_check(f, 2)?;
        let g = &corpus[k + 1].1;
        let prod = product_l2_check(f, g, 1.0, 1.0)?;
        println!(
            "{name:>18}: sup margin {:.3}, L4 margin {:.3}, product margin {:.3}",
            linf.margin(),
            l2q.margin(),
            prod.margin()
        );
    }
    println!("smoothing factor sup (1+xi^2)^(3/2) e^(-t xi^2) at t = 0.1: {:.6}", smoothing_factor(3.0, 1.0, 0.1)?);
    Ok(())
}
