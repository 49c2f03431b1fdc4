use crate::error::{Error, Result};
use crate::field::spectral::{raw_forward, raw_inverse};
use crate::field::{boundary_ratio, Field, Grid};
use crate::solver::diagnostics::{Diagnostics, DiagnosticsRow, StepRecord};
use crate::solver::nonlinear::Nonlinear;
use crate::solver::phi::phi123;
use crate::solver::residuals::{dissipation_residual, propagator_symbol};
use crate::solver::{Equation, SimConfig};
use num_complex::Complex64;
use std::sync::Arc;

type C = Complex64;

/// ETDRK4 coefficients for one step size (Kassam–Trefethen form).
struct Coefs {
    h: f64,
    e: Vec<C>,
    e2: Vec<C>,
    q: Vec<C>,
    f1: Vec<C>,
    f2: Vec<C>,
    f3: Vec<C>,
}

impl Coefs {
    fn new(lam: &[C], h: f64) -> Self {
        let n = lam.len();
        let mut c = Coefs {
            h,
            e: Vec::with_capacity(n),
            e2: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        for &l in lam {
            let z = l * h;
            let (p1, p2, p3) = phi123(z);
            let (h1, _, _) = phi123(0.5 * z);
            c.e.push(z.exp());
            c.e2.push((0.5 * z).exp());
            c.q.push(0.5 * h * h1);
            c.f1.push(h * (p1 - 3.0 * p2 + 4.0 * p3));
            c.f2.push(h * (p2 - 2.0 * p3));
            c.f3.push(h * (4.0 * p3 - p2));
        }
        c
    }
}

/// Owns the spectral state of one simulation; single-threaded by design.
pub struct Stepper {
    grid: Arc<Grid>,
    eq: Equation,
    lam: Vec<C>,
    nl: Nonlinear,
    main: Option<Coefs>,
    extra: Option<Coefs>,
    /// Raw DFT of the state, x-Nyquist column zeroed.
    pub(crate) uhat: Vec<C>,
    /// 𝓝̂ of the current state.
    nv: Vec<C>,
    pub t: f64,
    scratch: [Vec<C>; 5],
}

impl Stepper {
    pub fn new(u0: &Field, eq: Equation, pad: f64, t0: f64) -> Result<Self> {
        eq.validate()?;
        let grid = u0.grid.clone();
        let n = grid.len();
        let mut uhat = raw_forward(u0);
        let nyq = grid.nx / 2;
        for m in 0..grid.ny {
            uhat[nyq * grid.ny + m] = C::default();
        }
        let mut nl = Nonlinear::new(&grid, eq, pad);
        let mut nv = vec![C::default(); n];
        nl.eval(&uhat, &mut nv, t0)?;
        Ok(Stepper {
            lam: propagator_symbol(&grid, eq.mu),
            grid,
            eq,
            nl,
            main: None,
            extra: None,
            uhat,
            nv,
            t: t0,
            scratch: std::array::from_fn(|_| vec![C::default(); n]),
        })
    }

    /// Sets the default step size; its coefficients are kept for the whole run.
    pub fn set_main_dt(&mut self, h: f64) {
        if self.main.as_ref().map(|c| c.h) != Some(h) {
            self.main = Some(Coefs::new(&self.lam, h));
        }
    }

    /// Removes the coefficients for `h` from the cache (building them if
    /// needed); [`Self::restore`] puts them back.
    fn take_coefs(&mut self, h: f64) -> Coefs {
        if self.main.as_ref().map(|c| c.h) == Some(h) {
            return self.main.take().unwrap();
        }
        match self.extra.take() {
            Some(c) if c.h == h => c,
            _ => Coefs::new(&self.lam, h),
        }
    }

    fn restore(&mut self, c: Coefs) {
        if self.main.is_none() {
            self.main = Some(c);
        } else {
            self.extra = Some(c);
        }
    }

    /// One ETDRK4 step of size `h`.
    pub fn step(&mut self, h: f64) -> Result<()> {
        let t = self.t;
        let n = self.grid.len();
        let cf = self.take_coefs(h);
        let result = self.step_with(&cf, h, t, n);
        self.restore(cf);
        result
    }

    fn step_with(&mut self, cf: &Coefs, h: f64, t: f64, n: usize) -> Result<()> {
        let [mut a, mut na, mut b, mut nb, mut nc] = std::mem::take(&mut self.scratch);
        let (v, nv) = (&self.uhat, &self.nv);
        for q in 0..n {
            a[q] = cf.e2[q] * v[q] + cf.q[q] * nv[q];
        }
        self.nl.eval(&a, &mut na, t)?;
        for q in 0..n {
            b[q] = cf.e2[q] * v[q] + cf.q[q] * na[q];
        }
        self.nl.eval(&b, &mut nb, t)?;
        // c overwrites a.
        for q in 0..n {
            a[q] = cf.e2[q] * a[q] + cf.q[q] * (2.0 * nb[q] - nv[q]);
        }
        self.nl.eval(&a, &mut nc, t)?;
        let mut finite = true;
        for q in 0..n {
            let w = cf.e[q] * v[q]
                + cf.f1[q] * nv[q]
                + 2.0 * cf.f2[q] * (na[q] + nb[q])
                + cf.f3[q] * nc[q];
            finite &= w.re.is_finite() && w.im.is_finite();
            b[q] = w;
        }
        if !finite {
            return Err(Error::UnstableStep { t });
        }
        std::mem::swap(&mut self.uhat, &mut b);
        self.t = t + h;
        self.nl.eval(&self.uhat, &mut self.nv, self.t)?;
        self.scratch = [a, na, b, nb, nc];
        Ok(())
    }

    /// Physical state.
    pub fn field(&self) -> Field {
        raw_inverse(&self.grid, self.uhat.clone()).0
    }

    /// Spectral norms of the current state.
    pub fn record(&self) -> StepRecord {
        let g = &self.grid;
        let mu = self.eq.mu;
        let (mut l2, mut dx, mut rate, mut h21, mut dh21) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for k in 0..g.nx {
            let xi2 = g.xi[k] * g.xi[k];
            let wx = (1.0 + xi2) * (1.0 + xi2);
            for m in 0..g.ny {
                let q = k * g.ny + m;
                let u = self.uhat[q];
                let e = u.norm_sqr();
                let w = wx * (1.0 + g.eta[m] * g.eta[m]);
                l2 += e;
                dx += xi2 * e;
                rate += xi2 * (-mu * xi2 * e + (u.conj() * self.nv[q]).re);
                h21 += w * e;
                dh21 += w * xi2 * e;
            }
        }
        let s = g.cell() / g.len() as f64;
        StepRecord {
            t: self.t,
            l2_sq: s * l2,
            dx_sq: s * dx,
            dx_sq_rate: 2.0 * s * rate,
            h21_sq: s * h21,
            dx_h21_sq: s * dh21,
        }
    }
}

/// Time-stamped snapshots with diagnostics; immutable once produced.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub equation: Equation,
    pub snapshots: Vec<(f64, Field)>,
    pub diagnostics: Diagnostics,
}

impl Trajectory {
    /// Snapshot closest to `t`.
    pub fn at(&self, t: f64) -> Option<&Field> {
        self.snapshots
            .iter()
            .min_by(|a, b| (a.0 - t).abs().total_cmp(&(b.0 - t).abs()))
            .map(|s| &s.1)
    }
}

fn guard(u: &Field, t: f64, limit: f64) -> Result<f64> {
    let ratio = boundary_ratio(u);
    if ratio > limit {
        return Err(Error::BoundaryContamination { t, ratio, guard: limit });
    }
    Ok(ratio)
}

/// One ETDRK4 step of size `cfg.dt` from time `t`.
pub fn advance(state: &Field, t: f64, cfg: &SimConfig) -> Result<Field> {
    cfg.validate()?;
    if !state.values.iter().all(|v| v.is_finite()) {
        return Err(Error::UnstableStep { t });
    }
    guard(state, t, cfg.boundary_guard)?;
    let mut s = Stepper::new(state, cfg.equation, cfg.dealias_pad, t)?;
    s.step(cfg.dt)?;
    Ok(s.field())
}

/// Integrates to `t_end`, shortening steps to hit every snapshot time exactly.
pub fn run(u0: &Field, cfg: &SimConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if u0.grid != cfg.grid {
        return Err(crate::error::invalid("u0", "grid differs from config grid"));
    }
    if !u0.values.iter().all(|v| v.is_finite()) {
        return Err(Error::UnstableStep { t: 0.0 });
    }
    guard(u0, 0.0, cfg.boundary_guard)?;
    let mut s = Stepper::new(u0, cfg.equation, cfg.dealias_pad, 0.0)?;
    s.set_main_dt(cfg.dt);
    let mut diag = Diagnostics::default();
    let mut snapshots = Vec::new();
    diag.steps.push(s.record());

    let mut pending = cfg.snapshot_times.iter().copied().peekable();
    let eps = 1e-9 * cfg.dt;
    while pending.peek().is_some_and(|&ts| ts <= eps) {
        pending.next();
        let f = s.field();
        diag.rows.push(DiagnosticsRow::measure(0.0, &f));
        snapshots.push((0.0, f));
    }
    while s.t < cfg.t_end - eps {
        let target = pending.peek().copied().unwrap_or(cfg.t_end).min(cfg.t_end);
        let mut h = cfg.dt.min(target - s.t);
        if target - s.t - h < eps {
            h = target - s.t;
        }
        s.step(h)?;
        if (s.t - target).abs() < eps {
            s.t = target;
        }
        diag.steps.push(s.record());
        let f = s.field();
        guard(&f, s.t, cfg.boundary_guard)?;
        while pending.peek().is_some_and(|&ts| ts <= s.t + eps) {
            pending.next();
            diag.rows.push(DiagnosticsRow::measure(s.t, &f));
            snapshots.push((s.t, f.clone()));
        }
    }
    let mut traj = Trajectory { equation: cfg.equation, snapshots, diagnostics: diag };
    let res = dissipation_residual(&traj);
    for row in traj.diagnostics.rows.iter_mut() {
        if let Some(r) = res.iter().find(|r| (r.0 - row.t).abs() <= eps) {
            row.dissipation_residual = r.1;
        }
    }
    Ok(traj)
}
