//! φ-functions by contour averaging, avoiding cancellation for small |z|.
//!
//! Each φ_k is entire, so its value at z is the mean of its defining quotient
//! over the 32 points z + e^{2πi(j+1/2)/32}; the trapezoid rule on the circle
//! converges geometrically and the quotient never sees |w| < 1.

use num_complex::Complex64;
use std::f64::consts::PI;

const M: usize = 32;

fn contour() -> [Complex64; M] {
    let mut r = [Complex64::default(); M];
    for (j, c) in r.iter_mut().enumerate() {
        *c = Complex64::from_polar(1.0, PI * (j as f64 + 0.5) / M as f64 * 2.0);
    }
    r
}

/// (φ₁, φ₂, φ₃)(z).
pub(crate) fn phi123(z: Complex64) -> (Complex64, Complex64, Complex64) {
    let p = phis(z, 3);
    (p[0], p[1], p[2])
}

/// (φ₁, …, φ_n)(z) with φ_k(z) = (e^z − Σ_{j<k} z^j/j!)/z^k.
pub(crate) fn phis(z: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); n];
    for r in contour() {
        let w = z + r;
        let mut rem = w.exp();
        let mut term = Complex64::new(1.0, 0.0);
        let mut wk = Complex64::new(1.0, 0.0);
        for (k, o) in out.iter_mut().enumerate() {
            rem -= term;
            wk *= w;
            *o += rem / wk;
            term *= w / (k + 1) as f64;
        }
    }
    out.iter().map(|c| c / M as f64).collect()
}

/// Product Newton–Cotes weights for ∫₀^H e^{λ(H−τ)}P(τ)dτ, P the degree-d
/// interpolant through τ = jH/d, j = 0..d. The exponential is integrated
/// exactly, so the rule stays accurate however fast λ rotates; d = 2 is
/// product Simpson, d = 4 product Boole.
pub(crate) fn product_weights(lambda: Complex64, h_total: f64, d: usize) -> Vec<Complex64> {
    // ∫₀^1 e^{(1−s)z}s^k ds = k!·φ_{k+1}(z).
    let ph = phis(lambda * h_total, d + 1);
    let mut moments = Vec::with_capacity(d + 1);
    let mut fact = 1.0;
    for (k, p) in ph.iter().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        moments.push(fact * p);
    }
    lagrange_monomials(d)
        .iter()
        .map(|c| h_total * c.iter().zip(&moments).map(|(a, m)| *a * m).sum::<Complex64>())
        .collect()
}

/// Monomial coefficients (in s ∈ [0,1]) of the Lagrange basis on s = j/d.
fn lagrange_monomials(d: usize) -> Vec<Vec<f64>> {
    let nodes: Vec<f64> = (0..=d).map(|j| j as f64 / d as f64).collect();
    (0..=d)
        .map(|j| {
            let mut poly = vec![1.0];
            let mut denom = 1.0;
            for (m, &sm) in nodes.iter().enumerate() {
                if m == j {
                    continue;
                }
                let mut next = vec![0.0; poly.len() + 1];
                for (k, &c) in poly.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= sm * c;
                }
                poly = next;
                denom *= nodes[j] - sm;
            }
            poly.iter().map(|c| c / denom).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_reduce_to_newton_cotes() {
        let w = product_weights(Complex64::default(), 1.0, 2);
        for (a, b) in w.iter().zip([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]) {
            assert!((a.re - b).abs() < 1e-13 && a.im.abs() < 1e-13);
        }
        let w = product_weights(Complex64::default(), 90.0, 4);
        for (a, b) in w.iter().zip([7.0, 32.0, 12.0, 32.0, 7.0]) {
            assert!((a.re - b).abs() < 1e-11);
        }
    }

    #[test]
    fn weights_integrate_exponential_exactly() {
        // P ≡ 1: ∫₀^H e^{λ(H−τ)}dτ = (e^{λH} − 1)/λ.
        let lam = Complex64::new(-3.0, 40.0);
        let h = 0.3;
        let exact = ((lam * h).exp() - 1.0) / lam;
        for d in [2, 4] {
            let s: Complex64 = product_weights(lam, h, d).iter().sum();
            assert!((s - exact).norm() < 1e-13);
        }
    }
}
