//! Inequality suite on a seeded corpus plus the dissipation identity on
//! reference runs.

use super::{Experiment, RateSeries, Verdict};
use crate::config::{random_bumps, Config};
use crate::error::{Error, Result};
use crate::field::{gn_l2q_check, gn_linf_check, product_l2_check, smoothing_factor, Field, Grid, InequalityCheck};
use crate::solver::{dissipation_residual, run, Equation, SimConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

const NAME: &str = "inequality_suite";

/// Stream offsets so the corpus and the smoothing cases are independent draws.
const CORPUS_STREAM: u64 = 0x636f_7270;
const SMOOTHING_STREAM: u64 = 0x736d_6f6f;

/// Twenty hand-picked smooth, boundary-clean fields.
pub fn structured_corpus(grid: &Arc<Grid>) -> Vec<(&'static str, Field)> {
    let g = |x: f64, y: f64| (-x * x - y * y).exp();
    let f = |name, h: &dyn Fn(f64, f64) -> f64| (name, Field::from_fn(grid, h));
    vec![
        f("gaussian", &|x, y| g(x, y)),
        f("negative_gaussian", &|x, y| -0.5 * g(x, y)),
        f("wide_in_x", &|x, y| (-x * x / 4.0 - y * y).exp()),
        f("wide_in_y", &|x, y| (-x * x - y * y / 9.0).exp()),
        f("dx_gaussian", &|x, y| -2.0 * x * g(x, y)),
        f("dy_gaussian", &|x, y| -2.0 * y * g(x, y)),
        f("xy_gaussian", &|x, y| x * y * g(x, y)),
        f("width_3", &|x, y| (-(x * x + y * y) / 9.0).exp()),
        f("width_half", &|x, y| (-(x * x + y * y) * 4.0).exp()),
        f("cos_modulated", &|x, y| (3.0 * x).cos() * g(x, y)),
        f("sin_modulated", &|x, y| (2.0 * y).sin() * (-(x * x + y * y) / 4.0).exp()),
        f("dipole", &|x, y| g(x - 4.0, y) - g(x + 4.0, y + 3.0)),
        f("ring", &|x, y| (x * x + y * y) * g(x, y)),
        f("sech_x", &|x, y| (-y * y).exp() / x.cosh().powi(2)),
        f("sech_y", &|x, y| (-x * x).exp() / y.cosh().powi(2)),
        f("mexican_hat", &|x, y| (1.0 - x * x - y * y) * g(x, y)),
        f("saddle", &|x, y| (x * x - y * y) * g(x, y)),
        f("rotated", &|x, y| (-(x + y).powi(2) / 2.0 - (x - y).powi(2) / 8.0).exp()),
        f("off_centre", &|x, y| g(x - 8.0, y + 8.0)),
        f("three_bumps", &|x, y| {
            g(x / 2.0, y / 2.0) - 0.7 * g(x - 6.0, y - 2.0) + 0.4 * g((x + 5.0) / 1.5, (y + 6.0) / 1.5)
        }),
    ]
}

/// Worst margin (rhs/lhs) of a set of checks.
#[derive(Debug, Clone)]
struct Tally {
    checked: usize,
    failed: Vec<String>,
    worst: f64,
    worst_case: String,
}

impl Tally {
    fn new() -> Self {
        Tally { checked: 0, failed: Vec::new(), worst: f64::INFINITY, worst_case: String::new() }
    }

    fn add(&mut self, case: &str, c: InequalityCheck) {
        self.checked += 1;
        if !c.holds() {
            self.failed.push(case.to_string());
        }
        if c.margin() < self.worst {
            self.worst = c.margin();
            self.worst_case = case.to_string();
        }
    }

    fn verdict(&self, name: &str, rule: &str) -> Verdict {
        let mut v = Verdict::check(
            NAME,
            name,
            self.failed.is_empty() && self.checked > 0,
            rule,
            format!(
                "{}/{} hold, worst margin rhs/lhs {:.6} ({})",
                self.checked - self.failed.len(),
                self.checked,
                self.worst,
                self.worst_case
            ),
            Vec::new(),
        );
        if !self.failed.is_empty() {
            v = v.note(format!("failed cases: {:?}", self.failed));
        }
        v
    }
}

/// sup_ξ (1+ξ²)^{a/2}e^{−μtξ²} by a dense scan refined with golden sections.
fn smoothing_scan(a: f64, mu: f64, t: f64) -> f64 {
    let logf = |xi: f64| 0.5 * a * (1.0 + xi * xi).ln() - mu * t * xi * xi;
    // Beyond ξ_max the Gaussian beats the polynomial for every admissible a.
    let xi_max = 2.0 * (a / (mu * t)).sqrt() + 2.0;
    let n = 4000;
    let h = xi_max / n as f64;
    let (mut best, mut k_best) = (f64::NEG_INFINITY, 0);
    for k in 0..=n {
        let v = logf(k as f64 * h);
        if v > best {
            best = v;
            k_best = k;
        }
    }
    let (mut lo, mut hi) = ((k_best as f64 - 1.0).max(0.0) * h, (k_best as f64 + 1.0) * h);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let m1 = hi - r * (hi - lo);
        let m2 = lo + r * (hi - lo);
        if logf(m1) < logf(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    best.max(logf(0.5 * (lo + hi))).exp()
}

/// Runs every inequality on the corpus and the dissipation identity on the
/// reference runs.
pub fn inequality_suite(cfg: &Config) -> Result<Experiment> {
    let s = &cfg.suite;
    let grid = Grid::square(s.l, s.n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ CORPUS_STREAM);
    let mut corpus: Vec<(String, Field)> = (0..s.n_random)
        .map(|k| (format!("random_{k:03}"), random_bumps(&grid, &mut rng, s.max_bumps)))
        .collect();
    corpus.extend(structured_corpus(&grid).into_iter().map(|(n, f)| (n.to_string(), f)));

    let mut linf = Tally::new();
    let mut l2q = Tally::new();
    let mut product = Tally::new();
    let mut q1_margin = 0.0f64;
    for (k, (name, f)) in corpus.iter().enumerate() {
        linf.add(name, gn_linf_check(f)?);
        for q in 1..=4 {
            let c = gn_l2q_check(f, q)?;
            if q == 1 {
                q1_margin = q1_margin.max((c.margin() - 1.0).abs());
            }
            l2q.add(&format!("{name} q={q}"), c);
        }
        let (gname, g) = &corpus[(k + 1) % corpus.len()];
        product.add(&format!("{name} x {gname}"), product_l2_check(f, g, 1.0, 1.0)?);
    }
    let mut exp = Experiment::new(NAME);
    exp.push(linf.verdict("gn_linf", "|f|_inf^2 <= 2(|f_x||f_y| + |f||f_xy|)").note(format!("{} fields", corpus.len())));
    exp.push(
        l2q.verdict("gn_l2q", "|f|_2q^2q <= (q!)^2 |f|^2 |f_x|^(q-1) |f_y|^(q-1), q = 1..4")
            .note(format!("q = 1 is an equality: max |margin - 1| = {q1_margin:.3e}")),
    );
    exp.push(product.verdict("product", "|fg| <= (1/2) |f|_H^(1,0) |g|_H^(0,1)"));

    // Smoothing factor against an independent scan.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ SMOOTHING_STREAM);
    let mut worst = 0.0f64;
    let mut worst_case = String::new();
    for _ in 0..s.smoothing_cases {
        let a = rng.gen_range(0.1..6.0);
        let mu = rng.gen_range(0.1..3.0);
        let t = 10f64.powf(rng.gen_range(-2.0..1.0));
        let closed = smoothing_factor(a, mu, t)?;
        let scan = smoothing_scan(a, mu, t);
        let rel = (closed - scan).abs() / scan;
        if rel > worst {
            worst = rel;
            worst_case = format!("a = {a:.4}, mu = {mu:.4}, t = {t:.4}");
        }
    }
    exp.push(Verdict::check(
        NAME,
        "smoothing_factor",
        worst <= s.smoothing_tol,
        format!("|closed form - xi scan| / scan <= {}", s.smoothing_tol),
        format!("{} cases, worst relative difference {worst:.3e} ({worst_case})", s.smoothing_cases),
        Vec::new(),
    ));

    // A field touching the box edge is refused by the decay gate.
    let edge = Field::from_fn(&grid, |x, y| (-(x - grid.lx + 1.0).powi(2) - y * y).exp());
    exp.push(match gn_linf_check(&edge) {
        Err(Error::DecayHypothesis { ratio, .. }) => Verdict::skipped(
            NAME,
            "near_boundary_gate",
            format!("near-boundary field excluded by the decay gate (edge ratio {ratio:.2e})"),
        ),
        other => Verdict::check(
            NAME,
            "near_boundary_gate",
            false,
            "near-boundary field must be refused",
            format!("gate did not refuse: {other:?}"),
            Vec::new(),
        ),
    });

    for v in dissipation_runs(cfg)? {
        exp.push(v);
    }
    Ok(exp)
}

/// Relative dissipation residual on a linear and two nonlinear reference runs.
fn dissipation_runs(cfg: &Config) -> Result<Vec<Verdict>> {
    let s = &cfg.suite;
    let grid = Grid::square(s.run_l, s.run_n)?;
    let u0 = Field::gaussian(&grid, 1.0);
    let mu = cfg.equation.mu;
    let cases = [
        ("dissipation_linear", Equation::new(mu, 0.0, 2)?, s.linear_tol),
        ("dissipation_p2", Equation::new(mu, 1.0, 2)?, s.nonlinear_tol),
        ("dissipation_p3", Equation::new(mu, 1.0, 3)?, s.nonlinear_tol),
    ];
    let mut out = Vec::new();
    for (name, eq, tol) in cases {
        // The identity holds on the periodic box itself, so the edge guard
        // is off and the edge mass is reported instead.
        let sim = SimConfig::new(eq, grid.clone(), s.run_dt, s.run_t_end)
            .uniform_snapshots(11)
            .with_guard(f64::INFINITY);
        let traj = run(&u0, &sim)?;
        let series = dissipation_residual(&traj);
        let worst = series.iter().map(|p| p.1).fold(0.0f64, f64::max);
        let edge = traj.diagnostics.rows.iter().map(|r| r.boundary_mass).fold(0.0f64, f64::max);
        // Sampled at the snapshots for the report.
        let snaps: Vec<(f64, f64)> = traj.diagnostics.rows.iter().map(|r| (r.t, r.dissipation_residual)).collect();
        out.push(
            Verdict::check(
                NAME,
                name,
                worst < tol,
                format!("max_t dissipation residual < {tol}"),
                format!("max residual {worst:.3e} (beta = {}, p = {}, t <= {})", eq.beta, eq.p, s.run_t_end),
                vec![RateSeries::new(format!("{name}_residual"), snaps)],
            )
            .note(format!("L = {}, N = {}, dt = {}, max boundary ratio {edge:.2e}", s.run_l, s.run_n, s.run_dt)),
        );
    }
    Ok(out)
}
