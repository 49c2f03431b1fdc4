//! Command-line front end: config layering, subcommand dispatch, output files
//! and exit codes (2 config error, 1 failed verdicts or run error, 0 success).

use crate::config::Config;
use crate::error::{Error, Result};
use crate::field::write_dump;
use crate::harness::{
    experiment_approximation, experiment_linear_decay, experiment_lower_bound, run_jobs, theory_slope, write_experiment,
    Job, Rate, ALL_JOBS,
};
use crate::kernels::{
    decay_bound, eval_u, eval_u_grid_dx, lower_bound_constant, origin_profile_constant, remainder_bound, QuadratureSpec,
};
use crate::profiles::{math_v_grid, wr_split_grid, MFunctional};
use crate::solver::{duhamel_residual, run};
use clap::{Args, Parser, Subcommand};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Environment variable that overrides `--out`.
pub const OUT_ENV: &str = "ZKBLAB_OUT";

#[derive(Debug, Parser)]
#[command(name = "zkblab", version, about = "Numerical lab for the 2D generalized ZK-Burgers equation")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// TOML configuration file layered over the defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overridden by ZKBLAB_OUT).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// RNG seed for every seeded draw.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Dotted override `section.key=value`, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub set: Vec<String>,
    /// Worker threads for independent experiments.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve the nonlinear equation and write snapshots and diagnostics.
    Solve,
    /// Tabulate ∂_x^l U by the quadrature and FFT routes.
    KernelTable {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        l: Option<u32>,
    },
    /// Tabulate ψ, 𝒱, W, R and the M-functional on a strided grid.
    ProfileTable,
    /// Run every experiment and report one line per verdict.
    Verify,
    /// Linear decay rates and the explicit sup bound.
    Decay,
    /// Lower bound on the sup decay.
    LowerBound,
    /// U − V remainder and the profile approximations.
    Approx,
    /// Print constants, theory slopes and the effective config hash.
    Info,
}

/// Parses `argv` and dispatches; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    dispatch(cli)
}

/// Runs a parsed command.
pub fn dispatch(cli: Cli) -> i32 {
    let cfg = match effective_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("zkblab: {e}");
            return 2;
        }
    };
    let out = PathBuf::from(&cfg.output.dir);
    let started = Instant::now();
    let result = prepare_out(&out, &cfg).and_then(|()| execute(&cli.command, &cfg, &out, cli.global.jobs));
    let code = match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e @ Error::Config(_)) => {
            eprintln!("zkblab: {e}");
            2
        }
        Err(e) => {
            eprintln!("zkblab: {e}");
            1
        }
    };
    // Timing lives only in the run log so every other output is reproducible.
    let log = format!("command {:?}\nexit {code}\nelapsed_s {:.3}\n", cli.command, started.elapsed().as_secs_f64());
    let _ = fs::write(out.join("run.log"), log);
    code
}

/// defaults < file < `--set` < `--seed`/`--out` < ZKBLAB_OUT.
fn effective_config(cli: &Cli) -> Result<Config> {
    let g = &cli.global;
    let mut overrides = g.set.clone();
    if let Command::KernelTable { t, mu, l } = &cli.command {
        overrides.extend(t.map(|v| format!("kernels.t={v:?}")));
        overrides.extend(mu.map(|v| format!("kernels.mu={v:?}")));
        overrides.extend(l.map(|v| format!("kernels.l={v}")));
    }
    if let Some(seed) = g.seed {
        overrides.push(format!("seed={seed}"));
    }
    let env_out = std::env::var_os(OUT_ENV).map(PathBuf::from);
    if let Some(dir) = env_out.or_else(|| g.out.clone()) {
        let dir = dir.to_str().ok_or_else(|| Error::Config("`output.dir`: not valid UTF-8".into()))?.to_string();
        overrides.push(format!("output.dir={}", toml::Value::String(dir)));
    }
    if g.jobs == 0 {
        return Err(Error::Config("`--jobs`: must be at least 1".into()));
    }
    Config::load(g.config.as_deref(), &overrides).map_err(|e| match e {
        Error::InvalidParameter { name, reason } => Error::Config(format!("`{name}`: {reason}")),
        other => other,
    })
}

fn prepare_out(out: &Path, cfg: &Config) -> Result<()> {
    fs::create_dir_all(out)?;
    fs::write(out.join("effective_config.toml"), cfg.to_toml())?;
    Ok(())
}

fn execute(cmd: &Command, cfg: &Config, out: &Path, jobs: usize) -> Result<bool> {
    match cmd {
        Command::Solve => solve(cfg, out),
        Command::KernelTable { .. } => kernel_table(cfg, out),
        Command::ProfileTable => profile_table(cfg, out),
        Command::Verify => experiments(cfg, out, &ALL_JOBS, jobs),
        Command::Decay => experiments(cfg, out, &[("linear_decay", experiment_linear_decay)], jobs),
        Command::LowerBound => experiments(cfg, out, &[("lower_bound", experiment_lower_bound)], jobs),
        Command::Approx => experiments(cfg, out, &[("approximation", experiment_approximation)], jobs),
        Command::Info => info(cfg),
    }
}

/// Runs `jobs`, writes their reports, prints one line per verdict.
fn experiments(cfg: &Config, out: &Path, jobs: &[Job], threads: usize) -> Result<bool> {
    let hash = cfg.hash();
    let mut ok = true;
    let mut summary = String::new();
    for (name, r) in run_jobs(cfg, jobs, threads) {
        match r {
            Ok(exp) => {
                write_experiment(out, &exp, &hash, cfg.seed)?;
                for v in &exp.verdicts {
                    println!("{}", v.line());
                    writeln!(summary, "{}", v.line()).expect("string write");
                }
                ok &= exp.pass();
            }
            Err(e) => {
                let line = format!("FAIL {name}: {e}");
                println!("{line}");
                writeln!(summary, "{line}").expect("string write");
                ok = false;
            }
        }
    }
    fs::write(out.join("summary.txt"), summary)?;
    Ok(ok)
}

fn solve(cfg: &Config, out: &Path) -> Result<bool> {
    let sim = cfg.sim_config()?;
    let u0 = cfg.initial_data(&sim.grid)?;
    let traj = run(&u0, &sim)?;

    let mut index = String::from("t,filename,l2,linf\n");
    for (k, (t, f)) in traj.snapshots.iter().enumerate() {
        let name = format!("snapshot_{k:04}.bin");
        if cfg.output.dumps {
            write_dump(out.join(&name), f)?;
        }
        writeln!(index, "{t:e},{name},{:e},{:e}", f.l2(), f.max_abs()).expect("string write");
    }
    fs::write(out.join("index.csv"), index)?;

    let mut diag = String::from("t,l2,linf_u,linf_dxu,l2_dxu,h21,dissipation_residual,boundary_mass,h0,h1,k\n");
    for r in &traj.diagnostics.rows {
        writeln!(
            diag,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            r.t,
            r.l2,
            r.linf_u,
            r.linf_dxu,
            r.l2_dxu,
            r.h21,
            r.dissipation_residual,
            r.boundary_mass,
            r.h(0),
            r.h(1),
            r.k()
        )
        .expect("string write");
    }
    fs::write(out.join("diagnostics.csv"), diag)?;

    let mut steps = String::from("t,l2_sq,dx_sq,dx_sq_rate,h21_sq,dx_h21_sq\n");
    for s in &traj.diagnostics.steps {
        writeln!(steps, "{:e},{:e},{:e},{:e},{:e},{:e}", s.t, s.l2_sq, s.dx_sq, s.dx_sq_rate, s.h21_sq, s.dx_h21_sq)
            .expect("string write");
    }
    fs::write(out.join("steps.csv"), steps)?;

    let dissipation = crate::solver::dissipation_residual(&traj);
    let max_dissipation = dissipation.iter().map(|p| p.1).fold(0.0f64, f64::max);
    // The Duhamel check needs ≥ 33 equally spaced snapshots from t = 0.
    let duhamel = duhamel_residual(&traj, &traj.equation).ok();
    let residuals = serde_json::json!({
        "max_dissipation_residual": max_dissipation,
        "duhamel_residual": duhamel,
        "h21_energy_ratio": traj.diagnostics.h21_energy_ratio(traj.equation.mu),
    });
    let text = serde_json::to_string_pretty(&residuals).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(out.join("residuals.json"), text + "\n")?;

    let last = traj.snapshots.last().map_or(0.0, |s| s.0);
    let duhamel = duhamel.map_or("n/a".to_string(), |d| format!("{d:.3e}"));
    println!(
        "solved to t = {last} with {} snapshots: max dissipation residual {max_dissipation:.3e}, Duhamel residual {duhamel}",
        traj.snapshots.len()
    );
    Ok(true)
}

/// Points x, y ∈ linspace(−extent, extent, points), snapped to the FFT grid.
fn kernel_table(cfg: &Config, out: &Path) -> Result<bool> {
    let k = &cfg.kernels;
    let grid = crate::field::Grid::square(k.fft_l, k.fft_n)?;
    let fft = eval_u_grid_dx(&grid, k.t, k.mu, k.l)?;
    let spec = QuadratureSpec::default();
    let axis: Vec<f64> = if k.points == 1 {
        vec![0.0]
    } else {
        (0..k.points).map(|n| -k.extent + 2.0 * k.extent * n as f64 / (k.points - 1) as f64).collect()
    };
    let snap = |v: f64, l: f64, d: f64, n: usize| ((v + l) / d).round().clamp(0.0, (n - 1) as f64) as usize;
    let mut csv = String::from("x,y,t,mu,l,route,value,est_error\n");
    let mut worst = 0.0f64;
    for &xr in &axis {
        for &yr in &axis {
            let i = snap(xr, grid.lx, grid.dx, grid.nx);
            let j = snap(yr, grid.ly, grid.dy, grid.ny);
            let (x, y) = (grid.x[i], grid.y[j]);
            let q = eval_u(x, y, k.t, k.mu, k.l, &spec)?;
            let f = fft.at(i, j);
            worst = worst.max((q.value - f).abs());
            let row = |route: &str, v: f64, e: f64| format!("{x},{y},{},{},{},{route},{v:.15e},{e:e}\n", k.t, k.mu, k.l);
            csv.push_str(&row("quadrature", q.value, q.est_error));
            csv.push_str(&row("fft2d", f, f64::NAN));
        }
    }
    fs::write(out.join("kernel_table.csv"), csv)?;
    println!(
        "kernel table: {} points at t = {}, mu = {}, l = {}; max |quadrature - fft| = {worst:.3e}",
        axis.len() * axis.len(),
        k.t,
        k.mu,
        k.l
    );
    Ok(true)
}

fn profile_table(cfg: &Config, out: &Path) -> Result<bool> {
    let grid = cfg.grid()?;
    let u0 = cfg.initial_data(&grid)?;
    let p = &cfg.profile;
    let mu = cfg.equation.mu;
    let mf = MFunctional::new(&u0, p.j)?;
    let stride = p.table_stride.max(1);
    let mut csv = String::from("x,y,t,j,l,psi,mathV,W,R,M_functional,quality\n");
    for &t in &p.table_times {
        let psi = mf.psi_grid(&grid, t, mu, p.l)?;
        let mv = math_v_grid(&u0, p.j, t, mu, p.l)?;
        let wr = wr_split_grid(&u0, p.j, t, mu, p.l)?;
        for j in (0..grid.ny).step_by(stride) {
            let y = grid.y[j];
            let m = mf.eval(-y / t);
            for i in (0..grid.nx).step_by(stride) {
                writeln!(
                    csv,
                    "{},{y},{t},{},{},{:e},{:e},{:e},{:e},{:e},{:e}",
                    grid.x[i],
                    p.j,
                    p.l,
                    psi.at(i, j),
                    mv.at(i, j),
                    wr.w.at(i, j),
                    wr.r.at(i, j),
                    m.value,
                    m.quality
                )
                .expect("string write");
            }
        }
    }
    fs::write(out.join("profile_table.csv"), csv)?;
    println!("profile table: t = {:?}, j = {}, l = {}, stride {stride}", p.table_times, p.j, p.l);
    Ok(true)
}

fn info(cfg: &Config) -> Result<bool> {
    let mu = cfg.equation.mu;
    println!("zkblab {}", env!("CARGO_PKG_VERSION"));
    println!("config hash {}", cfg.hash());
    println!("seed {}", cfg.seed);
    println!("equation mu = {mu}, beta = {}, p = {}", cfg.equation.beta, cfg.equation.p);
    println!("default dealias pad {}", cfg.equation()?.default_pad());
    for l in [0u32, 1] {
        println!(
            "l = {l}: decay constant {:.9}, remainder constant {:.9}, lower-bound c0 {:.9}, origin profile {:.9}",
            decay_bound(l, mu, 1.0),
            remainder_bound(l, mu, 1.0),
            lower_bound_constant(l, mu),
            origin_profile_constant(l, mu)
        );
        println!(
            "l = {l}: theory slopes sup {}, L2 {}, remainder {}",
            theory_slope(Rate::DecayLinf, l),
            theory_slope(Rate::DecayL2, l),
            theory_slope(Rate::Remainder, l)
        );
    }
    Ok(true)
}
