//! Closed-form special functions underlying the kernels and windows:
//! Hermite functions and polynomials, Laguerre polynomials, the Jacobi theta
//! function at modulus `i`, Hermite theta functions, totally positive Fourier
//! factors and the canonical dual-grid products `g_beta`.
//!
//! Conventions:
//!
//! * Hermite polynomials `H_r(t) = 2^{1/4} (2^r r!)^{-1/2} Htilde_r(t)` where
//!   `Htilde_r` are the physicists' polynomials; so `H_0 = 2^{1/4}`,
//!   `H_1(t) = 2^{3/4} t`.
//! * Hermite functions `h_r(t) = H_r(sqrt(2 pi) t) e^{-pi t^2}`, unit L2 norm.
//! * Jacobi theta with characteristics:
//!   `theta_{a,b}(z) = sum_k exp(-pi (k+a)^2 + 2 pi i (k+a)(z+b))` (modulus `i`).

use crate::numerics::log1m_exp;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Maximum supported Hermite order (recurrence stability ceiling).
pub const MAX_HERMITE_ORDER: usize = 64;
/// Maximum supported Laguerre degree.
pub const MAX_LAGUERRE_DEGREE: usize = 128;

/// Cutoff policy for the infinite series and products of this module.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// Absolute tail tolerance targeted by the cutoff.
    pub abs_tol: f64,
    /// Hard cap on the number of retained terms.
    pub max_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_terms: 512,
        }
    }
}

impl TruncationPolicy {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::Invalid("abs_tol must be positive".into()));
        }
        if max_terms < 8 {
            return Err(Error::Invalid("max_terms must be at least 8".into()));
        }
        Ok(Self { abs_tol, max_terms })
    }
}

/// Pole/Gaussian factorization of the Fourier transform of a totally positive
/// window: `c e^{-gamma xi^2} e^{2 pi i nu_shift xi} prod_j (1+2 pi i nu_j xi)^{-1} e^{-2 pi i nu_j xi}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TPFactorization {
    pub c: f64,
    pub gamma: f64,
    pub nu_shift: f64,
    pub nu_j: Vec<f64>,
}

impl TPFactorization {
    pub fn new(c: f64, gamma: f64, nu_shift: f64, nu_j: Vec<f64>) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Invalid("TP factorization needs c > 0".into()));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::Invalid("TP factorization needs gamma >= 0".into()));
        }
        if nu_j.iter().any(|v| *v == 0.0 || !v.is_finite()) {
            return Err(Error::Invalid(
                "TP factor parameters nu_j must be nonzero finite".into(),
            ));
        }
        let mass: f64 = gamma + nu_j.iter().map(|v| v * v).sum::<f64>();
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Invalid(
                "TP factorization needs 0 < gamma + sum nu_j^2 < inf".into(),
            ));
        }
        Ok(Self {
            c,
            gamma,
            nu_shift,
            nu_j,
        })
    }
}

fn check_order(what: &'static str, max: usize, got: usize) -> Result<()> {
    if got > max {
        Err(Error::UnsupportedOrder { what, max, got })
    } else {
        Ok(())
    }
}

/// Normalized physicists' recurrence `P_r = Htilde_r / sqrt(2^r r!)`.
fn hermite_normalized(r: usize, t: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for j in 0..r {
        let jf = j as f64;
        let next = t * (2.0 / (jf + 1.0)).sqrt() * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Hermite polynomial `H_r(t)` in the window normalization (`H_0 = 2^{1/4}`).
pub fn hermite_poly(r: usize, t: f64) -> Result<f64> {
    check_order("hermite_poly", MAX_HERMITE_ORDER, r)?;
    Ok(2f64.powf(0.25) * hermite_normalized(r, t))
}

/// Unit-norm Hermite function `h_r(t) = H_r(sqrt(2 pi) t) e^{-pi t^2}`.
pub fn hermite_fn(r: usize, t: f64) -> Result<f64> {
    check_order("hermite_fn", MAX_HERMITE_ORDER, r)?;
    Ok(2f64.powf(0.25) * hermite_normalized(r, (2.0 * PI).sqrt() * t) * (-PI * t * t).exp())
}

/// Generalized Laguerre polynomial `L_k^alpha(x)` by the stable three-term
/// recurrence.
pub fn laguerre(k: usize, alpha: f64, x: f64) -> Result<f64> {
    check_order("laguerre", MAX_LAGUERRE_DEGREE, k)?;
    if k == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Index window `[-cutoff, cutoff]` certifying a Gaussian tail below `tol`
/// for sums whose term magnitude is `exp(-pi (k+a)^2 - 2 pi (k+a) y)`.
fn theta_cutoff(a: f64, y: f64, tol: f64) -> usize {
    let margin = (y * y + (1.0 / tol).ln() / PI).max(0.0).sqrt();
    (a.abs() + y.abs() + margin).ceil() as usize + 2
}

/// Jacobi theta with characteristics at modulus `i`:
/// `theta_{a,b}(z) = sum_k exp(-pi (k+a)^2 + 2 pi i (k+a)(z+b))`.
pub fn jacobi_theta(a: f64, b: f64, z: Complex64, pol: &TruncationPolicy) -> Result<Complex64> {
    let y = z.im;
    if y.abs() > 50.0 {
        return Err(Error::Domain(format!(
            "jacobi_theta: |Im z| = {} above tail bound validity 50",
            y.abs()
        )));
    }
    let cutoff = theta_cutoff(a, y, pol.abs_tol);
    if 2 * cutoff + 1 > pol.max_terms {
        let k = (pol.max_terms / 2) as f64;
        let tail = (-PI * (k - a.abs() - y.abs()).powi(2) + PI * y * y).exp();
        return Err(Error::Convergence {
            what: "jacobi_theta",
            tail,
        });
    }
    // Peak magnitude exp(pi y^2); refuse values outside the double range.
    if PI * y * y > 700.0 {
        return Err(Error::Domain(format!(
            "jacobi_theta: value magnitude e^{:.0} exceeds double range",
            PI * y * y
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -(cutoff as i64)..=(cutoff as i64) {
        let ka = k as f64 + a;
        let expo =
            Complex64::new(-PI * ka * ka, 0.0) + Complex64::new(0.0, 2.0 * PI * ka) * (z + b);
        acc += expo.exp();
    }
    Ok(acc)
}

/// Hermite theta function
/// `theta^{(r)}_{alpha,beta}(z) = sum_k e^{-pi (k+alpha)^2 + 2 pi i (z-beta)(k+alpha)} H_r(sqrt(2 pi)(k+alpha+Im z))`.
pub fn hermite_theta(
    r: usize,
    alpha: f64,
    beta: f64,
    z: Complex64,
    pol: &TruncationPolicy,
) -> Result<Complex64> {
    check_order("hermite_theta", MAX_HERMITE_ORDER, r)?;
    let y = z.im;
    if y.abs() > 50.0 {
        return Err(Error::Domain(format!(
            "hermite_theta: |Im z| = {} above tail bound validity 50",
            y.abs()
        )));
    }
    // Polynomial growth of H_r against the Gaussian: a few extra indices suffice.
    let cutoff = theta_cutoff(alpha, y, pol.abs_tol) + r / 2 + 4;
    if 2 * cutoff + 1 > pol.max_terms {
        let k = (pol.max_terms / 2) as f64;
        let tail = (-PI * (k - alpha.abs() - y.abs()).powi(2) + PI * y * y).exp();
        return Err(Error::Convergence {
            what: "hermite_theta",
            tail,
        });
    }
    if PI * y * y > 690.0 {
        return Err(Error::Domain(format!(
            "hermite_theta: value magnitude e^{:.0} exceeds double range",
            PI * y * y
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -(cutoff as i64)..=(cutoff as i64) {
        let ka = k as f64 + alpha;
        let expo =
            Complex64::new(-PI * ka * ka, 0.0) + Complex64::new(0.0, 2.0 * PI * ka) * (z - beta);
        let h = 2f64.powf(0.25) * hermite_normalized(r, (2.0 * PI).sqrt() * (ka + y));
        acc += expo.exp() * h;
    }
    Ok(acc)
}

/// Complex log of the dual-grid canonical product
/// `g_beta(z) = prod_{k>0} (1 - e^{2 beta pi (z-k)}) prod_{k<0} (1 - e^{2 beta pi (k-z)})`,
/// or `None` at its zeros `z in Z \ {0}`.
fn gbeta_log(beta: f64, z: Complex64, pol: &TruncationPolicy) -> Result<Option<Complex64>> {
    if !(beta > 0.0) {
        return Err(Error::Invalid(
            "gbeta_dualgrid: beta must be positive".into(),
        ));
    }
    // Exact zeros on the nonzero integers.
    let nearest = z.re.round();
    if nearest != 0.0 && (z - nearest).norm() < 1e-12 {
        return Ok(None);
    }
    let reach = z.re.abs() + (1.0 / pol.abs_tol).ln() / (2.0 * PI * beta);
    let cutoff = reach.ceil() as usize + 1;
    if 2 * cutoff > pol.max_terms {
        let tail = (2.0 * PI * beta * (z.re.abs() - (pol.max_terms / 2) as f64)).exp();
        return Err(Error::Convergence {
            what: "gbeta_dualgrid",
            tail,
        });
    }
    let mut log_acc = Complex64::new(0.0, 0.0);
    for k in 1..=(cutoff as i64) {
        // k > 0 factor: 1 - e^{2 beta pi (z - k)}
        log_acc += log1m_exp(2.0 * beta * PI * (z - k as f64));
        // k < 0 factor: 1 - e^{2 beta pi (-k - z)}  (index -k)
        log_acc += log1m_exp(2.0 * beta * PI * (-(k as f64) - z));
    }
    Ok(Some(log_acc))
}

/// Dual-grid canonical product `g_beta(z)` of the Hermite-frame construction;
/// vanishes exactly on `Z \ {0}` and is `i/beta`-periodic.
pub fn gbeta_dualgrid(beta: f64, z: Complex64, pol: &TruncationPolicy) -> Result<Complex64> {
    match gbeta_log(beta, z, pol)? {
        None => Ok(Complex64::new(0.0, 0.0)),
        Some(l) => {
            if l.re > 700.0 {
                Err(Error::Domain(format!(
                    "gbeta_dualgrid: magnitude e^{:.0} exceeds double range",
                    l.re
                )))
            } else {
                Ok(l.exp())
            }
        }
    }
}

/// `H_beta(z) = e^{-pi z^2/2} (g_beta(z))^{r+1}`, vanishing to order `r+1` on
/// `Z \ {0}`.
pub fn hbeta(r: usize, beta: f64, z: Complex64, pol: &TruncationPolicy) -> Result<Complex64> {
    check_order("hbeta", MAX_HERMITE_ORDER, r)?;
    match gbeta_log(beta, z, pol)? {
        None => Ok(Complex64::new(0.0, 0.0)),
        Some(l) => {
            let total = -PI * z * z / 2.0 + (r as f64 + 1.0) * l;
            if total.re > 700.0 {
                Err(Error::Domain(format!(
                    "hbeta: magnitude e^{:.0} exceeds double range",
                    total.re
                )))
            } else {
                Ok(total.exp())
            }
        }
    }
}

/// Fourier transform of a totally positive window from its factorization:
/// `c e^{-gamma xi^2} e^{2 pi i nu_shift xi} prod_j (1 + 2 pi i nu_j xi)^{-1} e^{-2 pi i nu_j xi}`.
pub fn tp_window_ft(fac: &TPFactorization, xi: f64) -> Complex64 {
    let mut acc = Complex64::new(fac.c * (-fac.gamma * xi * xi).exp(), 0.0)
        * Complex64::new(0.0, 2.0 * PI * fac.nu_shift * xi).exp();
    for &nu in &fac.nu_j {
        let pole = Complex64::new(1.0, 2.0 * PI * nu * xi);
        acc = acc / pole * Complex64::new(0.0, -2.0 * PI * nu * xi).exp();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_panels;

    const POL: TruncationPolicy = TruncationPolicy {
        abs_tol: 1e-12,
        max_terms: 512,
    };

    #[test]
    fn hermite_fn_closed_forms() {
        // h_0(0) = 2^{1/4}
        assert!((hermite_fn(0, 0.0).unwrap() - 2f64.powf(0.25)).abs() < 1e-14);
        // h_1 is odd
        assert_eq!(hermite_fn(1, 0.0).unwrap(), 0.0);
        assert!(hermite_fn(65, 0.0).is_err());
    }

    #[test]
    fn hermite_fn_unit_norm_by_quadrature() {
        // Gauss-Legendre panel quadrature oracle for the L2 normalization.
        for r in [0usize, 1, 2, 5, 10] {
            let nrm = integrate_panels(
                |t| {
                    let h = hermite_fn(r, t).unwrap();
                    Complex64::new(h * h, 0.0)
                },
                -10.0,
                10.0,
                40,
                16,
            );
            assert!((nrm.re - 1.0).abs() < 1e-9, "r={r}: {}", nrm.re);
        }
    }

    #[test]
    fn hermite_poly_closed_forms() {
        assert!((hermite_poly(0, 5.0).unwrap() - 2f64.powf(0.25)).abs() < 1e-14);
        // H_1(t) = 2^{3/4} t
        assert!((hermite_poly(1, 1.0).unwrap() - 2f64.powf(0.75)).abs() < 1e-13);
        // H_3 against the explicit third derivative of e^{-t^2}:
        // d^3/dt^3 e^{-t^2} = (12 t - 8 t^3) e^{-t^2}, so
        // H_3(t) = 2^{1/4} (8 t^3 - 12 t) / sqrt(2^3 3!) ... with the (-1/sqrt 2)^3 sign fold.
        let t = 0.7f64;
        let htilde3 = 8.0 * t * t * t - 12.0 * t;
        let expect = 2f64.powf(0.25) * htilde3 / (8.0 * 6.0f64).sqrt();
        assert!((hermite_poly(3, t).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn laguerre_closed_forms() {
        assert_eq!(laguerre(0, 0.0, 3.7).unwrap(), 1.0);
        assert!((laguerre(1, 0.0, 2.0).unwrap() + 1.0).abs() < 1e-15);
        // summation identity: sum_{r<=n} L_r(x) = L_n^1(x)
        let x = 0.7;
        let lhs: f64 = (0..=3).map(|r| laguerre(r, 0.0, x).unwrap()).sum();
        let rhs = laguerre(3, 1.0, x).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn laguerre_summation_identity_sweep() {
        for n in 0..=16usize {
            for &x in &[0.0, 0.3, 1.0, 5.0] {
                let lhs: f64 = (0..=n).map(|r| laguerre(r, 0.0, x).unwrap()).sum();
                let rhs = laguerre(n, 1.0, x).unwrap();
                assert!((lhs - rhs).abs() < 1e-11, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn jacobi_theta_origin_value() {
        // direct sum oracle sum_{|k|<=8} e^{-pi k^2}
        let mut oracle = 0.0;
        for k in -8i64..=8 {
            oracle += (-PI * (k * k) as f64).exp();
        }
        let v = jacobi_theta(0.0, 0.0, Complex64::new(0.0, 0.0), &POL).unwrap();
        assert!((v.re - oracle).abs() < 1e-12 && v.im.abs() < 1e-15);
        assert!((v.re - 1.08643481).abs() < 1e-7);
    }

    #[test]
    fn jacobi_theta_characteristic_shifts() {
        let z = Complex64::new(0.3, -0.7);
        let (a, b) = (0.4, 0.2);
        let base = jacobi_theta(a, b, z, &POL).unwrap();
        // a -> a+1 reindexes the sum
        let shifted = jacobi_theta(a + 1.0, b, z, &POL).unwrap();
        assert!((base - shifted).norm() < 1e-12);
        // z -> z+1 gains e^{2 pi i a}
        let translated = jacobi_theta(a, b, z + 1.0, &POL).unwrap();
        let phase = Complex64::new(0.0, 2.0 * PI * a).exp();
        assert!((translated - phase * base).norm() < 1e-12);
    }

    #[test]
    fn hermite_theta_reduces_to_jacobi_at_order_zero() {
        let z = Complex64::new(0.25, 0.45);
        let (alpha, beta) = (0.3, -0.6);
        let ht = hermite_theta(0, alpha, beta, z, &POL).unwrap();
        let jt = jacobi_theta(alpha, -beta, z, &POL).unwrap();
        assert!((ht - 2f64.powf(0.25) * jt).norm() < 1e-12);
    }

    #[test]
    fn hermite_theta_integer_alpha_shift() {
        let z = Complex64::new(0.15, 0.2);
        let a = hermite_theta(2, 0.3, 0.1, z, &POL).unwrap();
        let b = hermite_theta(2, 1.3, 0.1, z, &POL).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn hermite_theta_self_convergence() {
        let z = Complex64::new(0.2, 0.1);
        let narrow = hermite_theta(1, 0.3, 0.0, z, &POL).unwrap();
        let wide_pol = TruncationPolicy {
            abs_tol: 1e-12,
            max_terms: 1024,
        };
        // doubling the index window changes nothing beyond the tail
        let wide = hermite_theta(1, 0.3, 0.0, z, &wide_pol).unwrap();
        assert!((narrow - wide).norm() < 1e-12);
    }

    #[test]
    fn gbeta_vanishes_on_nonzero_integers() {
        for &beta in &[0.3, 0.5, 0.9] {
            for k in 1..=20i64 {
                for z in [
                    Complex64::new(k as f64, 0.0),
                    Complex64::new(-k as f64, 0.0),
                ] {
                    assert_eq!(
                        gbeta_dualgrid(beta, z, &POL).unwrap(),
                        Complex64::new(0.0, 0.0)
                    );
                }
            }
        }
        // no vanishing at the origin
        assert!(
            gbeta_dualgrid(0.5, Complex64::new(0.0, 0.0), &POL)
                .unwrap()
                .norm()
                > 0.1
        );
    }

    #[test]
    fn gbeta_dual_grid_period() {
        let beta = 0.5;
        let z = Complex64::new(0.4, 0.3);
        let a = gbeta_dualgrid(beta, z, &POL).unwrap();
        let b = gbeta_dualgrid(beta, z + Complex64::new(0.0, 1.0 / beta), &POL).unwrap();
        assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()));
    }

    #[test]
    fn gbeta_matches_long_product_oracle() {
        // brute-force 2000-term product
        let beta = 0.5;
        let z = Complex64::new(0.5, 0.0);
        let mut oracle = Complex64::new(1.0, 0.0);
        for k in 1..=2000i64 {
            oracle *= Complex64::new(1.0, 0.0) - (2.0 * beta * PI * (z - k as f64)).exp();
            oracle *= Complex64::new(1.0, 0.0) - (2.0 * beta * PI * (-(k as f64) - z)).exp();
        }
        let v = gbeta_dualgrid(beta, z, &POL).unwrap();
        assert!((v - oracle).norm() < 1e-12 * (1.0 + oracle.norm()));
    }

    #[test]
    fn hbeta_zero_multiplicity_and_value() {
        // vanishing on Z \ {0}
        assert_eq!(
            hbeta(1, 0.4, Complex64::new(2.0, 0.0), &POL).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        // H_beta(0) = g_beta(0)^{r+1} != 0
        let v = hbeta(0, 0.4, Complex64::new(0.0, 0.0), &POL).unwrap();
        let g = gbeta_dualgrid(0.4, Complex64::new(0.0, 0.0), &POL).unwrap();
        assert!((v - g).norm() < 1e-12);
    }

    #[test]
    fn hbeta_functional_equation_trivial_character() {
        // H_beta(z + i/beta) = e^{pi/(2 beta^2)} e^{-pi i z / beta} H_beta(z).
        let (r, beta) = (1usize, 0.4);
        let z = Complex64::new(0.3, 0.2);
        let gamma = Complex64::new(0.0, 1.0 / beta);
        let lhs = hbeta(r, beta, z + gamma, &POL).unwrap();
        let factor = (Complex64::new(PI / (2.0 * beta * beta), 0.0) + PI * z * gamma.conj()).exp();
        let rhs = factor * hbeta(r, beta, z, &POL).unwrap();
        assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn hbeta_functional_equation_twisted_character() {
        // e^{2 pi l z} H_beta(z) carries the character chi_l(i n/beta) = e^{2 pi i n l / beta}.
        let (r, beta, l) = (1usize, 0.4, 1i64);
        let z = Complex64::new(0.3, 0.2);
        let gamma = Complex64::new(0.0, 1.0 / beta);
        let twist = |w: Complex64| (2.0 * PI * l as f64 * w).exp();
        let lhs = twist(z + gamma) * hbeta(r, beta, z + gamma, &POL).unwrap();
        let chi = Complex64::new(0.0, 2.0 * PI * l as f64 / beta).exp();
        let factor = (Complex64::new(PI / (2.0 * beta * beta), 0.0) + PI * z * gamma.conj()).exp();
        let rhs = chi * factor * twist(z) * hbeta(r, beta, z, &POL).unwrap();
        assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn tp_ft_gaussian_case() {
        let fac = TPFactorization::new(1.0, 1.0, 0.0, vec![]).unwrap();
        assert!((tp_window_ft(&fac, 0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn tp_ft_modulus_nonincreasing() {
        let fac = TPFactorization::new(1.0, 0.3, 0.0, vec![0.2, -0.2, 0.5, -0.5]).unwrap();
        let mut last = f64::INFINITY;
        for i in 0..40 {
            let xi = i as f64 * 0.1;
            let m = tp_window_ft(&fac, xi).norm();
            assert!(m <= last + 1e-14);
            last = m;
        }
    }

    #[test]
    fn tp_ft_hyperbolic_secant_prefix_vs_quadrature() {
        // g(t) = 1/(e^{a t} + e^{-a t}) with a = 4 pi^2; Fourier transform
        // (pi/(2a)) sech(pi^2 xi / a). Schoenberg factors come in pairs
        // +/- 1/(a (2k-1)); keep 4 pairs and fold the omitted factors'
        // Gaussian tail into gamma_eff = 4 pi^2 sum_tail nu^2.
        let a = 4.0 * PI * PI;
        let c = PI / (2.0 * a);
        let mut nus = vec![];
        for k in 1..=4u32 {
            let nu = 1.0 / (a * (2.0 * k as f64 - 1.0));
            nus.push(nu);
            nus.push(-nu);
        }
        let gamma_eff: f64 = (5..200)
            .map(|k| {
                let nu = 1.0 / (a * (2.0 * k as f64 - 1.0));
                4.0 * PI * PI * nu * nu
            })
            .sum();
        let fac = TPFactorization::new(c, gamma_eff, 0.0, nus).unwrap();
        for i in 0..=20 {
            let xi = -2.0 + 0.2 * i as f64;
            let oracle = integrate_panels(
                |t| {
                    Complex64::new(1.0 / ((a * t).exp() + (-a * t).exp()), 0.0)
                        * Complex64::new(0.0, -2.0 * PI * xi * t).exp()
                },
                -1.0,
                1.0,
                40,
                12,
            );
            let v = tp_window_ft(&fac, xi);
            assert!(
                (v - oracle).norm() < 1e-3 * (1.0 + oracle.norm()),
                "xi={xi}: {v} vs {oracle}"
            );
        }
    }

    #[test]
    fn truncation_doubling_guard() {
        // Doubling max_terms changes reported values by less than 10*abs_tol.
        let z = Complex64::new(0.3, 2.0);
        let tight = TruncationPolicy {
            abs_tol: 1e-12,
            max_terms: 64,
        };
        let wide = TruncationPolicy {
            abs_tol: 1e-12,
            max_terms: 128,
        };
        let a = jacobi_theta(0.3, 0.1, z, &tight).unwrap();
        let b = jacobi_theta(0.3, 0.1, z, &wide).unwrap();
        assert!((a - b).norm() < 1e-11);
        let ga = gbeta_dualgrid(0.5, Complex64::new(0.7, 0.2), &tight).unwrap();
        let gb = gbeta_dualgrid(0.5, Complex64::new(0.7, 0.2), &wide).unwrap();
        assert!((ga - gb).norm() < 1e-11 * (1.0 + gb.norm()));
    }
}
