//! Fundamental solutions: symbol, quadrature and FFT routes, self-similarity
//! and the Γ-constants.

use std::f64::consts::PI;
use zkblab::kernels::{
    decay_bound, eval_u, eval_u_grid, eval_v, eval_v_grid, eval_vstar, fresnel_slice, lower_bound_constant,
    origin_profile_constant, remainder_bound, symbol_exp, v_fourier_slice, QuadratureSpec,
};
use zkblab::{Complex64, Error, Grid};

// Γ(1/4), Γ(3/4), Γ(7/4) to 16 digits.
const G14: f64 = 3.625_609_908_221_908;
const G34: f64 = 1.225_416_702_465_178;
const G74: f64 = 0.919_062_526_848_883;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn golden() -> Vec<(f64, f64, f64)> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/u_origin.csv")).unwrap();
    text.lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
            (v[0], v[1], v[2])
        })
        .collect()
}

#[test]
fn symbol_values() {
    let e = symbol_exp(1.0, 0.0, 1.0, 1.0);
    assert!((e - Complex64::new(-1.0, 1.0).exp()).norm() < 1e-15);
    assert_eq!(symbol_exp(2.0, 3.0, 0.0, 1.0), Complex64::new(1.0, 0.0));
    assert_eq!(symbol_exp(0.0, 5.0, 2.0, 1.0), Complex64::new(1.0, 0.0));
    // |e^{tλ}| = e^{−μtξ²} whatever η is.
    assert!((symbol_exp(0.5, 7.0, 2.0, 3.0).norm() - (-1.5f64).exp()).abs() < 1e-15);
}

#[test]
fn fresnel_values() {
    let f = fresnel_slice(1.0, 0.0, 1.0).unwrap();
    assert!((f - Complex64::new(0.5, 0.5)).norm() < 1e-15);
    assert!(fresnel_slice(0.0, 1.0, 1.0).is_err());
    assert!(fresnel_slice(1.0, 1.0, 0.0).is_err());
}

#[test]
fn u_origin_matches_golden() {
    for (t, mu, value) in golden() {
        let q = eval_u(0.0, 0.0, t, mu, 0, &spec()).unwrap();
        assert!((q.value - value).abs() < 1e-10, "quadrature {} vs {value}", q.value);
        assert!(q.est_error < 1e-9);
    }
}

#[test]
fn u_routes_agree_at_origin() {
    let g = Grid::square(32.0, 256).unwrap();
    let f = eval_u_grid(&g, 1.0, 1.0).unwrap();
    let q = eval_u(0.0, 0.0, 1.0, 1.0, 0, &spec()).unwrap();
    assert!((f.at(128, 128) - q.value).abs() < 1e-6);
}

#[test]
fn u_routes_agree_off_origin() {
    let g = Grid::square(32.0, 256).unwrap();
    let f = eval_u_grid(&g, 1.0, 1.0).unwrap();
    for (i, j) in [(120, 128), (136, 131), (100, 140), (128, 100)] {
        let (x, y) = (g.x[i], g.y[j]);
        let q = eval_u(x, y, 1.0, 1.0, 0, &spec()).unwrap();
        assert!((f.at(i, j) - q.value).abs() < 1e-6, "({x}, {y}): {} vs {}", f.at(i, j), q.value);
    }
}

#[test]
fn u_has_unit_mass() {
    let g = Grid::square(60.0, 1024).unwrap();
    let f = eval_u_grid(&g, 1.0, 1.0).unwrap();
    assert!((f.integral() - 1.0).abs() < 1e-8, "mass {}", f.integral());
}

#[test]
fn u_bounded_by_decay_constant() {
    let g = Grid::square(32.0, 256).unwrap();
    for t in [0.5, 1.0, 2.0] {
        let f = eval_u_grid(&g, t, 1.0).unwrap();
        assert!(f.max_abs() <= decay_bound(0, 1.0, t));
    }
}

#[test]
fn nonpositive_parameters_rejected() {
    assert!(matches!(eval_u(0.0, 0.0, 1.0, 0.0, 0, &spec()), Err(Error::InvalidParameter { .. })));
    assert!(matches!(eval_u(0.0, 0.0, 1.0, -1.0, 0, &spec()), Err(Error::InvalidParameter { .. })));
    assert!(eval_u(0.0, 0.0, 0.0, 1.0, 0, &spec()).is_err());
    assert!(eval_vstar(0.0, 0.0, 0.0, 0, &spec()).is_err());
    let g = Grid::square(8.0, 32).unwrap();
    assert!(eval_u_grid(&g, 1.0, 0.0).is_err());
}

#[test]
fn vstar_origin_and_bound() {
    let v = eval_vstar(0.0, 0.0, 1.0, 0, &spec()).unwrap().value;
    let exact = G14 * (PI / 4.0).cos() / (4.0 * PI.powf(1.5));
    assert!((v - exact).abs() < 1e-10);
    assert!((v - 0.115_102).abs() < 1e-6);
    for (x, y) in [(0.5, 0.0), (-1.0, 0.3), (2.0, 1.5), (-0.3, -2.0)] {
        let v = eval_vstar(x, y, 1.0, 0, &spec()).unwrap().value;
        assert!(v.abs() <= G14 / (4.0 * PI.powf(1.5)));
    }
}

#[test]
fn vstar_even_in_y() {
    for (x, y) in [(0.4, 0.9), (-1.2, 2.0)] {
        let a = eval_vstar(x, y, 1.0, 0, &spec()).unwrap().value;
        let b = eval_vstar(x, -y, 1.0, 0, &spec()).unwrap().value;
        assert_eq!(a, b);
    }
}

#[test]
fn v_self_similar() {
    let s = spec();
    let r = eval_v(0.0, 0.0, 16.0, 1.0, 0, &s).unwrap().value / eval_v(0.0, 0.0, 1.0, 1.0, 0, &s).unwrap().value;
    assert!((r - 0.125).abs() < 1e-10);
    for (x, y) in [(0.7, -0.4), (-1.5, 1.1)] {
        let a = eval_v(4.0 * x, 2.0 * y, 16.0, 1.0, 0, &s).unwrap().value;
        let b = eval_v(x, y, 1.0, 1.0, 0, &s).unwrap().value;
        assert!((a - 16f64.powf(-0.75) * b).abs() < 1e-10);
    }
}

#[test]
fn v_routes_agree() {
    let g = Grid::square(32.0, 256).unwrap();
    let f = eval_v_grid(&g, 1.0, 1.0, 0).unwrap();
    for (i, j) in [(128, 128), (120, 130), (140, 118), (110, 128)] {
        let q = eval_v(g.x[i], g.y[j], 1.0, 1.0, 0, &spec()).unwrap();
        assert!((f.at(i, j) - q.value).abs() < 1e-6);
    }
}

#[test]
fn u_approaches_vstar_at_origin() {
    let vstar = eval_vstar(0.0, 0.0, 1.0, 0, &spec()).unwrap().value;
    for t in [4.0, 16.0, 64.0] {
        let u = eval_u(0.0, 0.0, t, 1.0, 0, &spec()).unwrap().value;
        assert!((u - t.powf(-0.75) * vstar).abs() <= remainder_bound(0, 1.0, t));
    }
    let u1 = eval_u(0.0, 0.0, 100.0, 1.0, 0, &spec()).unwrap().value;
    let u2 = eval_u(0.0, 0.0, 200.0, 1.0, 0, &spec()).unwrap().value;
    assert!((u2 / u1 / 2f64.powf(-0.75) - 1.0).abs() < 0.03);
}

#[test]
fn remainder_bound_holds_on_grid() {
    let g = Grid::square(32.0, 256).unwrap();
    let t = 4.0;
    let d = eval_u_grid(&g, t, 1.0).unwrap().sub(&eval_v_grid(&g, t, 1.0, 0).unwrap());
    assert!(d.max_abs() <= remainder_bound(0, 1.0, t));
}

#[test]
fn explicit_constants() {
    let p = 4.0 * PI.powf(1.5);
    assert!((decay_bound(0, 1.0, 1.0) - G14 / p).abs() < 1e-14);
    assert!((decay_bound(1, 1.0, 1.0) - G34 / p).abs() < 1e-14);
    assert!((decay_bound(0, 1.0, 16.0) - G14 / p / 8.0).abs() < 1e-14);
    assert!((decay_bound(0, 1.0, 1.0) - 0.162_779).abs() < 1e-6);
    assert!((decay_bound(1, 1.0, 1.0) - 0.055_017).abs() < 1e-6);
    assert!((decay_bound(0, 1.0, 16.0) - 0.020_347).abs() < 1e-6);
    // μ-scaling: μ^{−(1+2l)/4}.
    assert!((decay_bound(1, 2.0, 1.0) - G34 / p / 2f64.powf(0.75)).abs() < 1e-14);

    assert!((remainder_bound(0, 1.0, 1.0) - G74 / p).abs() < 1e-14);
    assert!((remainder_bound(0, 1.0, 1.0) - 0.041_263).abs() < 1e-6);
    assert!((remainder_bound(0, 1.0, 100.0) - 1.3049e-4).abs() < 1e-8);

    let q = 2f64.powf(2.5) * PI.powf(1.5);
    assert!((lower_bound_constant(0, 1.0) - G14 / q).abs() < 1e-14);
    assert!((lower_bound_constant(0, 1.0) - 0.115_102).abs() < 1e-6);
    assert!((lower_bound_constant(1, 1.0) - 0.038_903).abs() < 1e-6);

    assert!((origin_profile_constant(0, 1.0) - G14 * (PI / 4.0).cos() / p).abs() < 1e-14);
    assert!((origin_profile_constant(1, 1.0) + G34 * (PI / 4.0).cos() / p).abs() < 1e-14);
}

/// Composite Simpson on [a, b] with n (even) panels.
fn simpson(f: impl Fn(f64) -> Complex64, a: f64, b: f64, n: usize) -> Complex64 {
    let h = (b - a) / n as f64;
    let inner: Complex64 = (1..n).map(|k| f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// V(x,y,t) = (2π)^{−3/2}∫e^{−ixξ}·slice(ξ)dξ, with slice(−ξ) = conj slice(ξ).
/// ξ ∈ (0, 1] is mapped to w = 1/ξ ∈ [1, ∞) so the phase aw, a = y²/4t, is
/// slow; beyond W the integrand is C w^{−3/2}e^{iaw}, C = e^{−iπ/4}/√(2t),
/// integrated in closed form (a = 0) or by one integration by parts.
fn v_from_slice(x: f64, y: f64, t: f64, mu: f64) -> f64 {
    let g = |xi: f64| Complex64::from_polar(1.0, -x * xi) * v_fourier_slice(xi, y, t, mu).unwrap();
    let big_w: f64 = 1.0e4;
    let c = Complex64::from_polar(1.0 / (2.0 * t).sqrt(), -PI / 4.0);
    let a = y * y / (4.0 * t);
    let tail = if a == 0.0 {
        c * 2.0 / big_w.sqrt()
    } else {
        c * Complex64::from_polar(big_w.powf(-1.5), a * big_w) / Complex64::new(0.0, -a)
    };
    let near = simpson(|w| g(1.0 / w) / (w * w), 1.0, big_w, 400_000) + tail;
    let far = simpson(g, 1.0, 8.0, 20_000);
    2.0 * (near + far).re / (2.0 * PI).powf(1.5)
}

#[test]
fn v_fourier_slice_inverts_to_v() {
    for (x, y) in [(0.0, 0.0), (0.0, 0.7), (-1.0, 0.7), (2.0, 0.7), (-3.0, 1.2)] {
        let exact = eval_v(x, y, 1.0, 1.0, 0, &spec()).unwrap().value;
        let got = v_from_slice(x, y, 1.0, 1.0);
        assert!((got - exact).abs() < 1e-5, "({x}, {y}): {got} vs {exact}");
    }
}
