//! Shared numerical kernels: Gauss-Legendre panel quadrature, stable
//! logarithms of `1 - e^v`, and cylinder coordinate helpers.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre quadrature of a complex integrand over `[a, b]`
/// split into `panels` equal panels with `pts` nodes each.
pub fn integrate_panels<F>(f: F, a: f64, b: f64, panels: usize, pts: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let (nodes, weights) = gauss_legendre(pts);
    let h = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in nodes.iter().zip(&weights) {
            acc += f(mid + 0.5 * h * x) * (0.5 * h * w);
        }
    }
    acc
}

/// Trapezoid rule for a 1-periodic integrand over `[0, 1)` with `n` nodes
/// (exact for trigonometric polynomials of degree below `n`).
pub fn trapezoid_periodic<F>(f: F, n: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        acc += f(j as f64 / n as f64);
    }
    acc / n as f64
}

/// `log(1 + w)` for complex `w`, accurate near `w = 0`.
pub fn ln_1p_complex(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        // four series terms give ~1e-17 relative error at |w| = 1e-4
        w * (Complex64::new(1.0, 0.0)
            - w * (Complex64::new(0.5, 0.0) - w * (Complex64::new(1.0 / 3.0, 0.0) - w * 0.25)))
    } else {
        (Complex64::new(1.0, 0.0) + w).ln()
    }
}

/// `log(1 - e^v)` for complex `v`, stable across the full range of `Re v`.
///
/// The imaginary part is one valid branch; only sums of such logs are ever
/// exponentiated, so the branch choice is immaterial.
pub fn log1m_exp(v: Complex64) -> Complex64 {
    if v.re > 30.0 {
        // 1 - e^v = -e^v (1 - e^{-v})
        return v + Complex64::new(0.0, PI) + ln_1p_complex(-(-v).exp());
    }
    let ev = v.exp();
    if ev.norm() < 0.5 {
        ln_1p_complex(-ev)
    } else {
        (Complex64::new(1.0, 0.0) - ev).ln()
    }
}

/// `q / (1 - q)` for `q = e^v`, stable for large `|Re v|` of either sign.
pub fn q_over_one_minus_q(v: Complex64) -> Complex64 {
    if v.re < -30.0 {
        return v.exp();
    }
    // 1/(e^{-v} - 1)
    let d = (-v).exp() - 1.0;
    if d.norm() == 0.0 {
        Complex64::new(f64::INFINITY, 0.0)
    } else {
        d.inv()
    }
}

/// Complex natural log of `n!` (real valued, returned as f64).
pub fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// `n!` as f64 (exact through 170).
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Binomial coefficient as f64.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// Wrap `dx` into `[-1/2, 1/2)` (horizontal distance on the cylinder).
pub fn wrap_unit(dx: f64) -> f64 {
    let mut r = dx.rem_euclid(1.0);
    if r >= 0.5 {
        r -= 1.0;
    }
    r
}

/// Euclidean distance on the cylinder `R^2 / Z` (x taken mod 1).
pub fn cylinder_distance(ax: f64, axi: f64, bx: f64, bxi: f64) -> f64 {
    let dx = wrap_unit(ax - bx);
    (dx * dx + (axi - bxi) * (axi - bxi)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        // 2n-1 degree exactness: x^7 over [0,1] with 4 points.
        let v = integrate_panels(|x| Complex64::new(x.powi(7), 0.0), 0.0, 1.0, 1, 4);
        assert!((v.re - 0.125).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_gaussian_integral() {
        let v = integrate_panels(
            |x| Complex64::new((-PI * x * x).exp(), 0.0),
            -8.0,
            8.0,
            16,
            12,
        );
        assert!((v.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_kills_nonzero_modes() {
        for m in 1..10 {
            let v = trapezoid_periodic(|x| Complex64::new(0.0, 2.0 * PI * m as f64 * x).exp(), 16);
            assert!(v.norm() < 1e-14);
        }
    }

    #[test]
    fn log1m_exp_matches_naive_in_safe_range() {
        for &(re, im) in &[
            (-3.0, 0.4),
            (0.2, 1.3),
            (2.0, -0.7),
            (40.0, 0.3),
            (-45.0, 2.0),
        ] {
            let v = Complex64::new(re, im);
            let stable = log1m_exp(v).exp();
            let direct = Complex64::new(1.0, 0.0) - v.exp();
            assert!(
                (stable - direct).norm() <= 1e-12 * (1.0 + direct.norm()),
                "v={v}"
            );
        }
    }

    #[test]
    fn q_ratio_consistent() {
        for &(re, im) in &[(-2.0, 0.3), (0.5, -1.0), (35.0, 0.2), (-35.0, 0.2)] {
            let v = Complex64::new(re, im);
            let q = v.exp();
            let expect = q / (Complex64::new(1.0, 0.0) - q);
            let got = q_over_one_minus_q(v);
            assert!((got - expect).norm() <= 1e-12 * (1.0 + expect.norm()));
        }
    }

    #[test]
    fn wrap_unit_range() {
        assert!((wrap_unit(0.75) + 0.25).abs() < 1e-15);
        assert!((wrap_unit(-0.75) - 0.25).abs() < 1e-15);
        assert_eq!(wrap_unit(3.0), 0.0);
    }
}
