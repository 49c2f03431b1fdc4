//! Run one verification experiment from a layered config and write its JSON
//! and CSV reports.
//!
//! Run: `cargo run --release --example verify_kernels -- [out_dir]`

use zkblab::config::Config;
use zkblab::harness::{experiment_kernels, write_experiment};
use zkblab::Result;

fn main() -> Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "zkblab-example-out".into());
    let cfg = Config::load(None, &["kernels.cross_points=20".into(), "kernels.bound_times=[1, 4]".into()])?;
    let exp = experiment_kernels(&cfg)?;
    for v in &exp.verdicts {
        println!("{}", v.line());
    }
    write_experiment(std::path::Path::new(&out), &exp, &cfg.hash(), cfg.seed)?;
    println!("reports written under {out}/{}", exp.name);
    Ok(())
}
