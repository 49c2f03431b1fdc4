//! Property tests of the structural invariants on seeded random data.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::{Arc, OnceLock};
use zkblab::config::{random_bumps, Config};
use zkblab::field::{
    gn_l2q_check, gn_linf_check, norm, product_l2_check, smoothing_factor, spectral_derivative, to_spectral,
};
use zkblab::kernels::{eval_vstar, fresnel_slice, QuadratureSpec};
use zkblab::profiles::{math_v_grid, wr_split_grid};
use zkblab::solver::{linear_propagate, run, Equation, SimConfig};
use zkblab::{Axis, Field, Grid, NormKind};

/// Bumps of width ≥ 0.5 centred in the inner half are resolved and edge-clean here.
fn grid() -> Arc<Grid> {
    static G: OnceLock<Arc<Grid>> = OnceLock::new();
    G.get_or_init(|| Grid::square(24.0, 128).unwrap()).clone()
}

fn bumps(seed: u64) -> Field {
    random_bumps(&grid(), &mut ChaCha8Rng::seed_from_u64(seed), 12)
}

fn x_integrals(f: &Field) -> Vec<f64> {
    let g = &f.grid;
    (0..g.ny).map(|j| (0..g.nx).map(|i| f.at(i, j)).sum::<f64>() * g.dx).collect()
}

/// sup_ξ (1+ξ²)^{a/2}e^{−μtξ²} over a dense grid up to ξ = 60.
fn scan_smoothing(a: f64, mu: f64, t: f64) -> f64 {
    (0..=600_000)
        .map(|k| {
            let xi = k as f64 * 1e-4;
            0.5 * a * (1.0 + xi * xi).ln() - mu * t * xi * xi
        })
        .fold(f64::NEG_INFINITY, f64::max)
        .exp()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn parseval(seed in any::<u64>()) {
        let f = bumps(seed);
        let direct: f64 = f.values.iter().map(|v| v * v).sum::<f64>() * f.grid.cell();
        let spec = to_spectral(&f).energy();
        prop_assert!((direct - spec).abs() <= 1e-10 * direct.max(1e-300));
    }

    #[test]
    fn mixed_derivatives_commute(seed in any::<u64>()) {
        let f = bumps(seed);
        let xy = spectral_derivative(&spectral_derivative(&f, Axis::X, 1), Axis::Y, 1);
        let yx = spectral_derivative(&spectral_derivative(&f, Axis::Y, 1), Axis::X, 1);
        prop_assert!(xy.max_diff(&yx) <= 1e-10 * xy.max_abs().max(1.0));
    }

    #[test]
    fn gagliardo_nirenberg_linf(seed in any::<u64>()) {
        prop_assert!(gn_linf_check(&bumps(seed)).unwrap().holds());
    }

    #[test]
    fn gagliardo_nirenberg_l2q(seed in any::<u64>(), q in 1u32..=4) {
        let c = gn_l2q_check(&bumps(seed), q).unwrap();
        prop_assert!(c.holds(), "q = {q}: {} > {}", c.lhs, c.rhs);
    }

    #[test]
    fn anisotropic_product(a in any::<u64>(), b in any::<u64>(), s1 in 0.55f64..2.0, s2 in 0.55f64..2.0) {
        let c = product_l2_check(&bumps(a), &bumps(b), s1, s2).unwrap();
        prop_assert!(c.holds(), "{} > {}", c.lhs, c.rhs);
    }

    #[test]
    fn anisotropic_norm_below_isotropic(seed in any::<u64>(), s1 in 0.0f64..2.0, s2 in 0.0f64..2.0) {
        let f = bumps(seed);
        let aniso = norm(&f, NormKind::Hs1s2(s1, s2)).value;
        let iso = norm(&f, NormKind::Hs(s1 + s2)).value;
        prop_assert!(aniso <= iso * (1.0 + 1e-12));
        prop_assert!(norm(&f, NormKind::L2).value <= aniso * (1.0 + 1e-12));
    }

    #[test]
    fn smoothing_factor_is_the_supremum(a in 0.1f64..4.0, mu in 0.2f64..3.0, t in 0.01f64..3.0) {
        let closed = smoothing_factor(a, mu, t).unwrap();
        prop_assert!(closed >= 1.0);
        prop_assert!((closed - scan_smoothing(a, mu, t)).abs() <= 1e-7 * closed);
    }

    #[test]
    fn linear_flow_is_a_contracting_semigroup(seed in any::<u64>(), s in 0.0f64..3.0, t in 0.0f64..3.0) {
        let u0 = bumps(seed);
        let two = linear_propagate(&linear_propagate(&u0, s, 1.0), t, 1.0);
        let one = linear_propagate(&u0, s + t, 1.0);
        prop_assert!(two.max_diff(&one) <= 1e-11 * u0.max_abs().max(1e-300));
        prop_assert!(one.l2() <= u0.l2() * (1.0 + 1e-14));
    }

    #[test]
    fn vstar_even_in_y(x in -4.0f64..4.0, y in 0.0f64..4.0) {
        let spec = QuadratureSpec::default();
        let a = eval_vstar(x, y, 1.0, 0, &spec).unwrap().value;
        let b = eval_vstar(x, -y, 1.0, 0, &spec).unwrap().value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn fresnel_modulus_and_symmetry(xi in 0.01f64..10.0, y in -5.0f64..5.0, t in 0.1f64..10.0) {
        let f = fresnel_slice(xi, y, t).unwrap();
        prop_assert!((f.norm() - 1.0 / (2.0 * t * xi).sqrt()).abs() <= 1e-13 * f.norm());
        let g = fresnel_slice(-xi, y, t).unwrap();
        prop_assert!((g - f.conj()).norm() <= 1e-13 * f.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn nonlinear_flow_dissipates_and_conserves_x_integrals(seed in any::<u64>(), p in 1u32..=3, beta in -1.0f64..1.0) {
        let u0 = bumps(seed);
        let eq = Equation::new(1.0, beta, p).unwrap();
        let sim = SimConfig::new(eq, grid(), 0.02, 0.4).uniform_snapshots(5).with_guard(f64::INFINITY);
        let traj = run(&u0, &sim).unwrap();
        let m0 = x_integrals(&u0);
        let scale = u0.max_abs() * 48.0;
        let mut prev = u0.l2();
        for (_, f) in &traj.snapshots {
            let l2 = f.l2();
            prop_assert!(l2 <= prev * (1.0 + 1e-9));
            prev = l2;
            for (a, b) in m0.iter().zip(x_integrals(f)) {
                prop_assert!((a - b).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn math_v_is_linear(a in any::<u64>(), b in any::<u64>(), ca in -2.0f64..2.0, cb in -2.0f64..2.0, t in 0.5f64..4.0) {
        let (f, g) = (bumps(a), bumps(b));
        let combo = f.scale(ca).add(&g.scale(cb));
        let lhs = math_v_grid(&combo, 0, t, 1.0, 0).unwrap();
        let rhs = math_v_grid(&f, 0, t, 1.0, 0).unwrap().scale(ca).add(&math_v_grid(&g, 0, t, 1.0, 0).unwrap().scale(cb));
        prop_assert!(lhs.max_diff(&rhs) <= 1e-12 * (lhs.max_abs() + rhs.max_abs()).max(1e-300));
    }

    #[test]
    fn w_plus_r_reconstructs_v(seed in any::<u64>(), t in 1.0f64..20.0) {
        let s = wr_split_grid(&bumps(seed), 0, t, 1.0, 0).unwrap();
        prop_assert!(s.w.add(&s.r).max_diff(&s.v) <= 1e-12 * s.v.max_abs().max(1e-300));
    }

    #[test]
    fn config_overrides_round_trip(mu in 0.1f64..5.0, p in 1u32..6, n in 3usize..9, seed in any::<u64>()) {
        let overrides = vec![
            format!("equation.mu={mu:?}"),
            format!("equation.p={p}"),
            format!("grid.nx={}", 1usize << n),
            format!("seed={}", seed >> 1),
        ];
        let cfg = Config::load(None, &overrides).unwrap();
        prop_assert_eq!(cfg.equation.mu, mu);
        prop_assert_eq!(cfg.equation.p, p);
        prop_assert_eq!(cfg.grid.nx, 1usize << n);
        let back = Config::from_toml_str(&cfg.to_toml()).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.hash(), cfg.hash());
    }
}
