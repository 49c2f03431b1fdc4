//! Layered TOML configuration: built-in defaults < config file < `--set`
//! overrides.
//!
//! Every section is optional and every key has a default; unknown keys are
//! rejected. The effective configuration serialises back to TOML, and its
//! SHA-256 is the `config_hash` stamped on every report.

use crate::error::{Error, Result};
use crate::field::{read_dump, Field, Grid};
use crate::solver::{Equation, SimConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;
use std::sync::Arc;

/// The full effective configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Seed for every random choice (corpus, bump data, test points).
    pub seed: u64,
    pub equation: EquationCfg,
    pub grid: GridCfg,
    pub time: TimeCfg,
    pub data: DataCfg,
    pub output: OutputCfg,
    pub kernels: KernelsCfg,
    pub decay: DecayCfg,
    pub lower_bound: LowerBoundCfg,
    pub approx: ApproxCfg,
    pub profile: ProfileCfg,
    pub suite: SuiteCfg,
    pub integrator: IntegratorCfg,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 20_240_917,
            equation: EquationCfg::default(),
            grid: GridCfg::default(),
            time: TimeCfg::default(),
            data: DataCfg::default(),
            output: OutputCfg::default(),
            kernels: KernelsCfg::default(),
            decay: DecayCfg::default(),
            lower_bound: LowerBoundCfg::default(),
            approx: ApproxCfg::default(),
            profile: ProfileCfg::default(),
            suite: SuiteCfg::default(),
            integrator: IntegratorCfg::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EquationCfg {
    pub mu: f64,
    pub beta: f64,
    pub p: u32,
}

impl Default for EquationCfg {
    fn default() -> Self {
        EquationCfg { mu: 1.0, beta: 1.0, p: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridCfg {
    pub lx: f64,
    pub ly: f64,
    pub nx: usize,
    pub ny: usize,
    /// Padding factor for the nonlinear product; 0 selects ⌈(p+2)/2⌉.
    pub dealias_pad: f64,
}

impl Default for GridCfg {
    fn default() -> Self {
        GridCfg { lx: 64.0, ly: 64.0, nx: 512, ny: 512, dealias_pad: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeCfg {
    pub dt: f64,
    pub t_end: f64,
    /// Explicit snapshot times; takes precedence over `n_snapshots`.
    pub snapshots: Vec<f64>,
    /// Equally spaced snapshots on [0, t_end] when `snapshots` is empty.
    pub n_snapshots: usize,
}

impl Default for TimeCfg {
    fn default() -> Self {
        TimeCfg { dt: 0.05, t_end: 10.0, snapshots: Vec::new(), n_snapshots: 11 }
    }
}

/// Initial data family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataKind {
    /// a·e^{−x²−y²}.
    Gaussian,
    /// a·∂_x e^{−x²−y²}: odd in x, zero mass.
    DxGaussian,
    /// Seeded superposition of Gaussian bumps.
    Bumps,
    /// A field dump read from `data.path`.
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataCfg {
    pub kind: DataKind,
    pub amplitude: f64,
    /// Number of bumps for `kind = "bumps"`.
    pub bumps: usize,
    pub path: String,
}

impl Default for DataCfg {
    fn default() -> Self {
        DataCfg { kind: DataKind::Gaussian, amplitude: 1.0, bumps: 6, path: String::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputCfg {
    pub dir: String,
    /// Largest allowed edge-to-sup ratio during runs.
    pub boundary_guard: f64,
    /// Write binary field dumps for `solve` snapshots.
    pub dumps: bool,
}

impl Default for OutputCfg {
    fn default() -> Self {
        OutputCfg { dir: "zkblab-out".into(), boundary_guard: 1e-6, dumps: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelsCfg {
    /// Time and μ for `kernel-table`.
    pub t: f64,
    pub mu: f64,
    pub l: u32,
    /// Table points on [−extent, extent]² with `points` per axis.
    pub extent: f64,
    pub points: usize,
    /// Box for the FFT route of the table and the cross-oracle.
    pub fft_l: f64,
    pub fft_n: usize,
    /// Times and random interior points for the cross-oracle.
    pub cross_times: Vec<f64>,
    pub cross_points: usize,
    pub cross_tol: f64,
    /// Times and box of the explicit-constant check.
    pub bound_times: Vec<f64>,
    pub bound_l: f64,
    pub bound_n: usize,
}

impl Default for KernelsCfg {
    fn default() -> Self {
        KernelsCfg {
            t: 1.0,
            mu: 1.0,
            l: 0,
            extent: 4.0,
            points: 9,
            fft_l: 32.0,
            fft_n: 256,
            cross_times: vec![0.5, 1.0, 4.0],
            cross_points: 100,
            cross_tol: 1e-5,
            bound_times: vec![1.0, 4.0, 16.0, 64.0],
            bound_l: 64.0,
            bound_n: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecayCfg {
    pub t_min: f64,
    pub t_max: f64,
    pub n_times: usize,
    pub orders: Vec<u32>,
    /// L∞ slope tolerance per entry of `orders`.
    pub tol_linf: Vec<f64>,
    pub tol_l2: f64,
}

impl Default for DecayCfg {
    fn default() -> Self {
        DecayCfg {
            t_min: 5.0,
            t_max: 160.0,
            n_times: 12,
            orders: vec![0, 1],
            tol_linf: vec![0.03, 0.05],
            tol_l2: 0.03,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LowerBoundCfg {
    pub times: Vec<f64>,
    pub l: u32,
    pub factor: f64,
    /// Also run the small-data nonlinear check.
    pub nonlinear: bool,
    pub nonlinear_t: f64,
    pub nonlinear_factor: f64,
    pub nonlinear_dt: f64,
    /// ‖u₀‖_{H^{2,1}} + ‖u₀‖_{L¹} for the small-data run.
    pub small_data_budget: f64,
    pub nonlinear_guard: f64,
}

impl Default for LowerBoundCfg {
    fn default() -> Self {
        LowerBoundCfg {
            times: vec![50.0, 100.0, 200.0],
            l: 0,
            factor: 0.95,
            nonlinear: true,
            nonlinear_t: 80.0,
            nonlinear_factor: 0.9,
            nonlinear_dt: 0.25,
            small_data_budget: 0.1,
            nonlinear_guard: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ApproxCfg {
    /// Times for sup|∂_x^l(U−V)|.
    pub remainder_times: Vec<f64>,
    /// Orders whose explicit bound is checked.
    pub remainder_orders: Vec<u32>,
    /// Orders whose fitted slope is a verdict; other orders report it as a note.
    pub remainder_rate_orders: Vec<u32>,
    pub remainder_tol: f64,
    /// Log grid for t^{3/4}‖S(t)u₀ − 𝒱₀(t)‖_∞.
    pub profile_t_min: f64,
    pub profile_t_max: f64,
    pub profile_n_times: usize,
    pub profile_ratio: f64,
    pub profile_slope_max: f64,
    /// Nonlinear run for t^{3/4+l/2}‖∂_x^l(u − v)‖_∞.
    pub nonlinear: bool,
    pub nonlinear_amplitude: f64,
    pub nonlinear_p: u32,
    pub nonlinear_l: u32,
    pub nonlinear_dt: f64,
    pub nonlinear_times: Vec<f64>,
    pub nonlinear_ratio: f64,
    pub nonlinear_guard: f64,
}

impl Default for ApproxCfg {
    fn default() -> Self {
        ApproxCfg {
            remainder_times: vec![4.0, 8.0, 16.0, 32.0, 64.0],
            remainder_orders: vec![0, 1],
            remainder_rate_orders: vec![0],
            remainder_tol: 0.05,
            profile_t_min: 10.0,
            profile_t_max: 100.0,
            profile_n_times: 5,
            profile_ratio: 0.5,
            profile_slope_max: -0.2,
            nonlinear: true,
            nonlinear_amplitude: 0.05,
            nonlinear_p: 2,
            nonlinear_l: 0,
            nonlinear_dt: 0.25,
            nonlinear_times: vec![10.0, 20.0, 40.0, 80.0],
            nonlinear_ratio: 0.5,
            nonlinear_guard: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileCfg {
    /// Exponent α > 1/2 in the l = 0 weight hypothesis.
    pub alpha: f64,
    pub j: u32,
    pub l: u32,
    pub t_min: f64,
    pub t_max: f64,
    pub n_times: usize,
    /// Required relative decrease from first to last checkpoint.
    pub decrease: f64,
    /// W/R split: times, row and slope ceiling.
    pub split_times: Vec<f64>,
    pub split_y: f64,
    pub split_slope_max: f64,
    /// Nonlinear run for t^{3/4+l/2}‖∂_x^l(u − ψ)‖_∞.
    pub nonlinear: bool,
    pub nonlinear_amplitude: f64,
    pub nonlinear_p: u32,
    pub nonlinear_l: u32,
    pub nonlinear_dt: f64,
    pub nonlinear_guard: f64,
    /// M[u₀](0) for the unit Gaussian must be within this fraction of π.
    pub anchor_tol: f64,
    /// `profile-table`: times and grid stride.
    pub table_times: Vec<f64>,
    pub table_stride: usize,
}

impl Default for ProfileCfg {
    fn default() -> Self {
        ProfileCfg {
            alpha: crate::profiles::DEFAULT_ALPHA,
            j: 0,
            l: 0,
            t_min: 10.0,
            t_max: 100.0,
            n_times: 5,
            decrease: 0.4,
            split_times: vec![4.0, 8.0, 16.0, 32.0, 64.0],
            split_y: 0.0,
            split_slope_max: -1.2,
            nonlinear: true,
            nonlinear_amplitude: 0.05,
            nonlinear_p: 3,
            nonlinear_l: 1,
            nonlinear_dt: 0.5,
            nonlinear_guard: 1e-2,
            anchor_tol: 0.02,
            table_times: vec![10.0, 100.0],
            table_stride: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteCfg {
    pub n_random: usize,
    pub max_bumps: usize,
    pub l: f64,
    pub n: usize,
    /// Smoothing-factor cases checked against a ξ-scan.
    pub smoothing_cases: usize,
    pub smoothing_tol: f64,
    /// Dissipation reference runs: box, step, horizon.
    pub run_l: f64,
    pub run_n: usize,
    pub run_dt: f64,
    pub run_t_end: f64,
    pub linear_tol: f64,
    pub nonlinear_tol: f64,
}

impl Default for SuiteCfg {
    fn default() -> Self {
        SuiteCfg {
            n_random: 200,
            max_bumps: 12,
            l: 32.0,
            n: 512,
            smoothing_cases: 200,
            smoothing_tol: 1e-10,
            run_l: 16.0,
            run_n: 128,
            run_dt: 0.01,
            run_t_end: 10.0,
            linear_tol: 1e-6,
            nonlinear_tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorCfg {
    /// Desk problem for the Duhamel and order checks.
    pub l: f64,
    pub n: usize,
    pub p: u32,
    pub duhamel_t_end: f64,
    pub duhamel_dt: f64,
    pub duhamel_snapshots: usize,
    pub duhamel_tol: f64,
    pub richardson_t_end: f64,
    pub richardson_dts: Vec<f64>,
    pub order_tol: f64,
}

impl Default for IntegratorCfg {
    fn default() -> Self {
        IntegratorCfg {
            l: 16.0,
            n: 128,
            p: 2,
            duhamel_t_end: 2.0,
            duhamel_dt: 0.01,
            duhamel_snapshots: 65,
            duhamel_tol: 1e-4,
            richardson_t_end: 1.0,
            richardson_dts: vec![0.1, 0.05, 0.025, 0.0125, 0.00625],
            order_tol: 0.5,
        }
    }
}

fn cfg_err(key: &str, reason: impl std::fmt::Display) -> Error {
    Error::Config(format!("`{key}`: {reason}"))
}

/// Sets `a.b.c = value` inside a TOML table, creating tables as needed.
fn set_dotted(root: &mut toml::Table, key: &str, value: toml::Value) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(cfg_err(key, "malformed key"));
    }
    let mut table = root;
    for part in &parts[..parts.len() - 1] {
        let entry = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry.as_table_mut().ok_or_else(|| cfg_err(key, format!("`{part}` is not a section")))?;
    }
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

/// Deep merge of `over` into `base`.
fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// Parses the right-hand side of `--set key=value` as a TOML value, falling
/// back to a bare string.
fn parse_value(raw: &str) -> toml::Value {
    match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or(toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

/// Integer-valued TOML keys that accept float literals when integral.
fn coerce_floats(v: &mut toml::Value, defaults: &toml::Value) {
    match (v, defaults) {
        (toml::Value::Table(t), toml::Value::Table(d)) => {
            for (k, sub) in t.iter_mut() {
                if let Some(ds) = d.get(k) {
                    coerce_floats(sub, ds);
                }
            }
        }
        (v @ toml::Value::Integer(_), toml::Value::Float(_)) => {
            if let toml::Value::Integer(i) = *v {
                *v = toml::Value::Float(i as f64);
            }
        }
        (toml::Value::Array(a), toml::Value::Array(d)) => {
            if let Some(toml::Value::Float(_)) = d.first() {
                for x in a.iter_mut() {
                    if let toml::Value::Integer(i) = *x {
                        *x = toml::Value::Float(i as f64);
                    }
                }
            }
        }
        _ => {}
    }
}

impl Config {
    /// Defaults < `file` < `overrides` (each `key=value`), then validation.
    pub fn load(file: Option<&Path>, overrides: &[String]) -> Result<Config> {
        let table = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                Some(text.parse().map_err(|e| Error::Config(format!("{}: {e}", path.display())))?)
            }
            None => None,
        };
        Config::layered(table, overrides)
    }

    /// Parses a TOML string on top of the defaults.
    pub fn from_toml_str(text: &str) -> Result<Config> {
        let table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        Config::layered(Some(table), &[])
    }

    fn layered(file: Option<toml::Table>, overrides: &[String]) -> Result<Config> {
        let defaults = toml::Value::try_from(Config::default())
            .map_err(|e| Error::Config(e.to_string()))?;
        let mut root = match defaults.clone() {
            toml::Value::Table(t) => t,
            _ => unreachable!("config serialises to a table"),
        };
        if let Some(table) = file {
            merge(&mut root, table);
        }
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override `{o}` is not key=value")))?;
            set_dotted(&mut root, k.trim(), parse_value(v.trim()))?;
        }
        let mut value = toml::Value::Table(root);
        coerce_floats(&mut value, &defaults);
        let cfg: Config =
            value.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Effective configuration as TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Hex SHA-256 of [`Config::to_toml`] with `output.dir` cleared, so the
    /// same run written elsewhere reports the same hash.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output.dir.clear();
        let digest = Sha256::digest(c.to_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let e = &self.equation;
        if !(e.mu > 0.0) || !e.mu.is_finite() {
            return Err(cfg_err("equation.mu", format!("must be positive, got {}", e.mu)));
        }
        if !e.beta.is_finite() {
            return Err(cfg_err("equation.beta", "must be finite"));
        }
        if e.p < 1 {
            return Err(cfg_err("equation.p", "must be >= 1"));
        }
        let g = &self.grid;
        for (key, n) in [("grid.nx", g.nx), ("grid.ny", g.ny)] {
            if n < 8 || n % 2 != 0 {
                return Err(cfg_err(key, format!("must be even and >= 8, got {n}")));
            }
        }
        for (key, l) in [("grid.lx", g.lx), ("grid.ly", g.ly)] {
            if !(l > 0.0) || !l.is_finite() {
                return Err(cfg_err(key, format!("must be positive, got {l}")));
            }
        }
        let need = (e.p as f64 + 2.0) / 2.0;
        if g.dealias_pad != 0.0 && g.dealias_pad < need {
            return Err(cfg_err("grid.dealias_pad", format!("{} < (p+2)/2 = {need}", g.dealias_pad)));
        }
        let t = &self.time;
        if !(t.dt > 0.0) {
            return Err(cfg_err("time.dt", format!("must be positive, got {}", t.dt)));
        }
        if !(t.t_end >= 0.0) {
            return Err(cfg_err("time.t_end", "must be non-negative"));
        }
        let mut prev = f64::NEG_INFINITY;
        for &s in &t.snapshots {
            if !(s > prev) || s < 0.0 || s > t.t_end {
                return Err(cfg_err("time.snapshots", "must be strictly increasing within [0, t_end]"));
            }
            prev = s;
        }
        if self.data.kind == DataKind::File && self.data.path.is_empty() {
            return Err(cfg_err("data.path", "required for kind = \"file\""));
        }
        if !self.data.amplitude.is_finite() {
            return Err(cfg_err("data.amplitude", "must be finite"));
        }
        if !(self.output.boundary_guard > 0.0) {
            return Err(cfg_err("output.boundary_guard", "must be positive"));
        }
        if self.output.dir.is_empty() {
            return Err(cfg_err("output.dir", "must not be empty"));
        }
        let k = &self.kernels;
        positive("kernels.t", k.t)?;
        positive("kernels.mu", k.mu)?;
        if k.l > 2 {
            return Err(cfg_err("kernels.l", "must be <= 2"));
        }
        if k.points == 0 {
            return Err(cfg_err("kernels.points", "must be >= 1"));
        }
        even("kernels.fft_n", k.fft_n)?;
        even("kernels.bound_n", k.bound_n)?;
        all_positive("kernels.cross_times", &k.cross_times)?;
        all_positive("kernels.bound_times", &k.bound_times)?;
        let d = &self.decay;
        if !(d.t_min > 0.0 && d.t_max > d.t_min) || d.n_times < 2 {
            return Err(cfg_err("decay", "need 0 < t_min < t_max and n_times >= 2"));
        }
        if d.tol_linf.len() != d.orders.len() {
            return Err(cfg_err("decay.tol_linf", "needs one tolerance per entry of decay.orders"));
        }
        if d.orders.iter().any(|&l| l > 2) {
            return Err(cfg_err("decay.orders", "orders must be <= 2"));
        }
        all_positive("lower_bound.times", &self.lower_bound.times)?;
        positive("lower_bound.nonlinear_dt", self.lower_bound.nonlinear_dt)?;
        positive("lower_bound.small_data_budget", self.lower_bound.small_data_budget)?;
        let a = &self.approx;
        all_positive("approx.remainder_times", &a.remainder_times)?;
        positive("approx.nonlinear_dt", a.nonlinear_dt)?;
        all_positive("approx.nonlinear_times", &a.nonlinear_times)?;
        if a.nonlinear_times.len() < 2 {
            return Err(cfg_err("approx.nonlinear_times", "need at least two checkpoints"));
        }
        let p = &self.profile;
        if !(p.alpha > 0.5) {
            return Err(cfg_err("profile.alpha", format!("must exceed 1/2, got {}", p.alpha)));
        }
        if p.j > 2 || p.l > 2 || p.nonlinear_l > 2 {
            return Err(cfg_err("profile", "derivative orders must be <= 2"));
        }
        if !(p.t_min > 0.0 && p.t_max > p.t_min) || p.n_times < 2 {
            return Err(cfg_err("profile", "need 0 < t_min < t_max and n_times >= 2"));
        }
        all_positive("profile.split_times", &p.split_times)?;
        all_positive("profile.table_times", &p.table_times)?;
        positive("profile.nonlinear_dt", p.nonlinear_dt)?;
        if p.table_stride == 0 {
            return Err(cfg_err("profile.table_stride", "must be >= 1"));
        }
        let s = &self.suite;
        even("suite.n", s.n)?;
        even("suite.run_n", s.run_n)?;
        positive("suite.run_dt", s.run_dt)?;
        if s.max_bumps == 0 {
            return Err(cfg_err("suite.max_bumps", "must be >= 1"));
        }
        let i = &self.integrator;
        even("integrator.n", i.n)?;
        if i.duhamel_snapshots < 33 {
            return Err(cfg_err("integrator.duhamel_snapshots", "must be >= 33"));
        }
        if i.richardson_dts.len() < 3 {
            return Err(cfg_err("integrator.richardson_dts", "need at least three step sizes"));
        }
        Ok(())
    }

    pub fn equation(&self) -> Result<Equation> {
        let e = &self.equation;
        Equation::new(e.mu, e.beta, e.p)
    }

    pub fn grid(&self) -> Result<Arc<Grid>> {
        let g = &self.grid;
        Grid::new(g.lx, g.ly, g.nx, g.ny)
    }

    /// The solver configuration of `[equation]`, `[grid]`, `[time]`, `[output]`.
    pub fn sim_config(&self) -> Result<SimConfig> {
        let eq = self.equation()?;
        let t = &self.time;
        let mut sim = SimConfig::new(eq, self.grid()?, t.dt, t.t_end).with_guard(self.output.boundary_guard);
        if self.grid.dealias_pad != 0.0 {
            sim.dealias_pad = self.grid.dealias_pad;
        }
        sim = if !t.snapshots.is_empty() {
            sim.with_snapshots(t.snapshots.clone())
        } else if t.n_snapshots > 0 {
            sim.uniform_snapshots(t.n_snapshots)
        } else {
            sim
        };
        sim.validate()?;
        Ok(sim)
    }

    /// Initial data described by `[data]` on `grid`.
    pub fn initial_data(&self, grid: &Arc<Grid>) -> Result<Field> {
        let a = self.data.amplitude;
        match self.data.kind {
            DataKind::Gaussian => Ok(Field::gaussian(grid, a)),
            DataKind::DxGaussian => {
                Ok(Field::from_fn(grid, |x, y| -2.0 * a * x * (-x * x - y * y).exp()))
            }
            DataKind::Bumps => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                Ok(random_bumps(grid, &mut rng, self.data.bumps.max(1)).scale(a))
            }
            DataKind::File => {
                let f = read_dump(&self.data.path)?;
                if f.grid != *grid {
                    return Err(cfg_err("data.path", "dump grid differs from [grid]"));
                }
                Ok(f.scale(a))
            }
        }
    }
}

/// Superposition of `1..=max_bumps` Gaussian bumps with centres in the inner
/// half-box, widths in [0.5, 3] and amplitudes in [−1, 1].
pub fn random_bumps(grid: &Arc<Grid>, rng: &mut impl Rng, max_bumps: usize) -> Field {
    let count = rng.gen_range(1..=max_bumps);
    let bumps: Vec<[f64; 4]> = (0..count)
        .map(|_| {
            [
                rng.gen_range(-0.5..=0.5) * grid.lx,
                rng.gen_range(-0.5..=0.5) * grid.ly,
                rng.gen_range(0.5..=3.0),
                rng.gen_range(-1.0..=1.0),
            ]
        })
        .collect();
    Field::from_fn(grid, |x, y| {
        bumps
            .iter()
            .map(|[cx, cy, w, a]| a * (-((x - cx).powi(2) + (y - cy).powi(2)) / (w * w)).exp())
            .sum()
    })
}

fn positive(key: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(cfg_err(key, format!("must be positive, got {v}")));
    }
    Ok(())
}

fn all_positive(key: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(cfg_err(key, "must not be empty"));
    }
    for &x in v {
        positive(key, x)?;
    }
    Ok(())
}

fn even(key: &str, n: usize) -> Result<()> {
    if n < 8 || n % 2 != 0 {
        return Err(cfg_err(key, format!("must be even and >= 8, got {n}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = Config::default();
        let back: Config = toml::from_str(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert_eq!(c.hash().len(), 64);
    }

    #[test]
    fn overrides_beat_file_values() {
        let c = Config::load(None, &["grid.nx=64".into(), "equation.mu=2".into()]).unwrap();
        assert_eq!(c.grid.nx, 64);
        assert_eq!(c.equation.mu, 2.0);
    }

    #[test]
    fn odd_nx_names_the_key() {
        let err = Config::load(None, &["grid.nx=63".into()]).unwrap_err();
        assert!(matches!(&err, Error::Config(m) if m.contains("grid.nx")), "{err}");
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(matches!(Config::load(None, &["grid.nz=8".into()]), Err(Error::Config(_))));
        assert!(matches!(Config::from_toml_str("[bogus]\na = 1"), Err(Error::Config(_))));
    }

    #[test]
    fn string_and_list_values() {
        let c = Config::load(None, &["data.kind=\"dx-gaussian\"".into(), "decay.orders=[0]".into(), "decay.tol_linf=[0.03]".into()]).unwrap();
        assert_eq!(c.data.kind, DataKind::DxGaussian);
        assert_eq!(c.decay.orders, vec![0]);
    }
}
