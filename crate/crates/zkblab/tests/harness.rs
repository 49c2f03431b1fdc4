//! Rate fits, verdicts, reports and small end-to-end experiment runs.

use zkblab::config::{Config, DataKind};
use zkblab::harness::{
    experiment_linear_decay, experiment_lower_bound, fit_decay_rate, log_times, run_jobs, small_data_amplitude,
    theory_slope, write_experiment, Experiment, Job, Rate, RateSeries, Verdict,
};
use zkblab::{Error, Field, Grid, NormKind};

fn power_law(c: f64, a: f64, times: &[f64]) -> RateSeries {
    RateSeries::new("s", times.iter().map(|&t| (t, c * t.powf(a))).collect())
}

/// A config on a 32-box with 256² points.
fn small_config() -> Config {
    let mut cfg = Config::default();
    cfg.grid.lx = 32.0;
    cfg.grid.ly = 32.0;
    cfg.grid.nx = 256;
    cfg.grid.ny = 256;
    cfg
}

#[test]
fn fit_recovers_power_laws() {
    for a in [-0.75, -1.25, -0.25] {
        let fit = fit_decay_rate(&power_law(3.0, a, &log_times(1.0, 100.0, 8))).unwrap();
        assert!((fit.slope - a).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-10);
        assert!(fit.slope_ci < 1e-10);
        assert!(fit.max_abs_residual() < 1e-12);
        assert!(!fit.pass);
        assert!(fit.clone().with_theory(a, 0.01).pass);
        assert!(!fit.with_theory(a + 0.1, 0.05).pass);
    }
}

#[test]
fn noisy_fit_has_wider_interval() {
    let times = log_times(1.0, 100.0, 10);
    let noisy = RateSeries::new(
        "n",
        times.iter().enumerate().map(|(k, &t)| (t, t.powf(-0.75) * (1.0 + 0.05 * (-1f64).powi(k as i32)))).collect(),
    );
    let fit = fit_decay_rate(&noisy).unwrap();
    assert!((fit.slope + 0.75).abs() < 0.02);
    assert!(fit.slope_ci > 1e-3);
    assert!((fit.slope + 0.75).abs() <= fit.slope_ci);
}

#[test]
fn fit_rejects_bad_series() {
    assert!(fit_decay_rate(&power_law(1.0, -1.0, &log_times(1.0, 100.0, 4))).is_err());
    assert!(fit_decay_rate(&power_law(1.0, -1.0, &log_times(1.0, 7.0, 6))).is_err());
    let neg = RateSeries::new("n", vec![(1.0, 1.0), (2.0, -1.0), (4.0, 1.0), (8.0, 1.0), (16.0, 1.0)]);
    assert!(fit_decay_rate(&neg).is_err());
    let unsorted = RateSeries::new("u", vec![(1.0, 1.0), (4.0, 1.0), (2.0, 1.0), (8.0, 1.0), (16.0, 1.0)]);
    assert!(fit_decay_rate(&unsorted).is_err());
}

#[test]
fn constant_series_fits_zero_slope() {
    let fit = fit_decay_rate(&power_law(2.0, 0.0, &log_times(1.0, 64.0, 6))).unwrap();
    assert!(fit.slope.abs() < 1e-12);
}

#[test]
fn theory_slopes() {
    assert_eq!(theory_slope(Rate::DecayLinf, 0), -0.75);
    assert_eq!(theory_slope(Rate::DecayLinf, 1), -1.25);
    assert_eq!(theory_slope(Rate::DecayL2, 0), -0.25);
    assert_eq!(theory_slope(Rate::DecayL2, 1), -0.75);
    assert_eq!(theory_slope(Rate::Remainder, 0), -1.25);
    assert_eq!(theory_slope(Rate::Remainder, 1), -1.75);
}

#[test]
fn log_spaced_times() {
    let t = log_times(5.0, 160.0, 6);
    assert_eq!(t.len(), 6);
    assert!((t[0] - 5.0).abs() < 1e-12 && (t[5] - 160.0).abs() < 1e-9);
    let r = t[1] / t[0];
    assert!(t.windows(2).all(|w| (w[1] / w[0] - r).abs() < 1e-12));
}

#[test]
fn small_data_amplitude_meets_budget() {
    let g = Grid::square(32.0, 256).unwrap();
    let shape = Field::gaussian(&g, 1.0);
    let a = small_data_amplitude(&shape, 0.1);
    let u0 = shape.scale(a);
    let size = zkblab::field::norm(&u0, NormKind::Hs1s2(2.0, 1.0)).value + u0.l1();
    assert!((size - 0.1).abs() < 1e-12);
    assert!((small_data_amplitude(&shape.scale(2.0), 0.1) - a / 2.0).abs() < 1e-15);
    assert_eq!(small_data_amplitude(&Field::zeros(&g), 0.1), 0.0);
}

#[test]
fn lower_bound_refuses_zero_mass() {
    let mut cfg = small_config();
    cfg.data.kind = DataKind::DxGaussian;
    cfg.lower_bound.nonlinear = false;
    assert!(matches!(experiment_lower_bound(&cfg), Err(Error::Hypothesis(_))));
}

#[test]
fn zero_mass_data_decays_faster() {
    // The y-edge guard needs the default 64-box beyond t ≈ 10.
    let mut cfg = Config::default();
    cfg.data.kind = DataKind::DxGaussian;
    cfg.decay.t_min = 10.0;
    cfg.decay.t_max = 80.0;
    cfg.decay.n_times = 6;
    cfg.decay.orders = vec![0];
    cfg.decay.tol_linf = vec![0.03];
    let exp = experiment_linear_decay(&cfg).unwrap();
    let v = exp.verdict("linf_l0").unwrap();
    let fit = v.fit.as_ref().unwrap_or_else(|| panic!("{} {:?}", v.line(), v.notes));
    assert!(fit.slope < -0.85, "slope {}", fit.slope);
    assert!(exp.verdict("bound_l0").unwrap().pass);
}

#[test]
fn gaussian_linear_decay_short_window() {
    // The y-edge guard needs the default 64-box beyond t ≈ 10.
    let mut cfg = Config::default();
    cfg.decay.t_min = 10.0;
    cfg.decay.t_max = 80.0;
    cfg.decay.n_times = 6;
    cfg.decay.orders = vec![0];
    cfg.decay.tol_linf = vec![0.05];
    let exp = experiment_linear_decay(&cfg).unwrap();
    let v = exp.verdict("linf_l0").unwrap();
    let fit = v.fit.as_ref().unwrap_or_else(|| panic!("{} {:?}", v.line(), v.notes));
    assert!((fit.slope + 0.75).abs() < 0.05, "slope {}", fit.slope);
}

fn sample_experiment() -> Experiment {
    let mut e = Experiment::new("sample");
    let fit = fit_decay_rate(&power_law(1.0, -0.75, &log_times(1.0, 100.0, 6))).unwrap().with_theory(-0.75, 0.03);
    e.push(Verdict::from_fit("sample", "rate", fit).note("a note"));
    e.push(Verdict::check("sample", "bound", true, "x <= y", "0 violations", vec![power_law(2.0, -1.0, &[1.0, 2.0])]));
    e.push(Verdict::skipped("sample", "later", "not configured"));
    e
}

#[test]
fn reports_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let e = sample_experiment();
    write_experiment(a.path(), &e, "abc123", 7).unwrap();
    write_experiment(b.path(), &e, "abc123", 7).unwrap();
    let mut names: Vec<_> = std::fs::read_dir(a.path().join("sample")).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 5);
    for n in names {
        let x = std::fs::read(a.path().join("sample").join(&n)).unwrap();
        let y = std::fs::read(b.path().join("sample").join(&n)).unwrap();
        assert_eq!(x, y, "{n:?}");
    }
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.path().join("sample/rate.json")).unwrap()).unwrap();
    assert_eq!(json["config_hash"], "abc123");
    assert_eq!(json["seed"], 7);
    assert_eq!(json["pass"], true);
    assert!((json["slope"].as_f64().unwrap() + 0.75).abs() < 1e-12);
    let csv = std::fs::read_to_string(a.path().join("sample/bound__s.csv")).unwrap();
    assert!(csv.starts_with("t,value\n"));
}

#[test]
fn verdict_lines() {
    let e = sample_experiment();
    assert!(e.verdict("rate").unwrap().line().starts_with("PASS sample/rate"));
    assert!(e.verdict("later").unwrap().line().contains("SKIP"));
    assert!(e.verdict("missing").is_none());
}

fn job_a(_: &Config) -> zkblab::Result<Experiment> {
    std::thread::sleep(std::time::Duration::from_millis(30));
    Ok(Experiment::new("a"))
}

fn job_b(_: &Config) -> zkblab::Result<Experiment> {
    Err(Error::Hypothesis("b".into()))
}

fn job_c(_: &Config) -> zkblab::Result<Experiment> {
    Ok(Experiment::new("c"))
}

#[test]
fn run_jobs_keeps_order() {
    let jobs: [Job; 3] = [("a", job_a), ("b", job_b), ("c", job_c)];
    for threads in [1, 3, 8] {
        let out = run_jobs(&Config::default(), &jobs, threads);
        let names: Vec<_> = out.iter().map(|r| r.0).collect();
        assert_eq!(names, ["a", "b", "c"]);
        assert_eq!(out[0].1.as_ref().unwrap().name, "a");
        assert!(out[1].1.is_err());
        assert_eq!(out[2].1.as_ref().unwrap().name, "c");
    }
}
