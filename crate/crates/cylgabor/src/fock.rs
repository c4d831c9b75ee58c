//! Bargmann-type transforms and Fock spaces on `C/Z`: the multiplier `M`,
//! analytic and true polyanalytic Bargmann transforms, reproducing kernels,
//! the Weyl translation, the complex periodization operator over the vertical
//! lattice `i (1/beta) Z`, Cauchy-integral holomorphic derivatives and the
//! raising operator.
//!
//! Alignment constants (fixed once, used by every cross-check):
//!
//! * `bargmann_eval = 2^{-1/4} M(z) V_{h_0} f(x, -xi)`, so the basis signal
//!   `e_{k,nu}` maps exactly onto `phi_{k,nu}(z) = e^{pi z^2/2 + 2 pi i z (nu+k) - pi (nu+k)^2}`.
//!   With this normalization `<B f, B g>` over the weighted strip equals
//!   `2^{-1/2} <f, g>` (the basis functions have norm `2^{-1/4}`).
//! * `true_bargmann_eval(r) = 2^{-1/4} M(z) V_{h_r} f(x, -xi)` equals the
//!   raising-operator form `(pi^r r!)^{-1/2} e^{pi |z|^2} d^r/dz^r [e^{-pi |z|^2} B f]`.
//! * Gabor-side and Fock-side kernels are related by
//!   `K_fock^{(r)}(z, w) = M(z) M(conj w) K_{h_r}^nu(conj z, conj w)`.
//! * The periodization `P_{Gamma', l}` built with `chi_l(i n/beta) = e^{2 pi i n l/beta}`
//!   transforms under `z -> z + gamma` with the conjugated character
//!   `conj(chi_l(gamma))` (see [`functional_equation_residual`]).

use crate::numerics::{binomial, factorial, integrate_panels};
use crate::signal::{QPSignal, Window};
use crate::special::{laguerre, TruncationPolicy};
use crate::stft::{stft_eval, CylinderPoint};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Hard ceiling for the true polyanalytic transform order.
pub const MAX_TRUE_ORDER: usize = 16;
/// Hard ceiling for Cauchy-integral derivative orders.
pub const MAX_CAUCHY_ORDER: usize = 12;
/// Hard ceiling for the raising-operator power.
pub const MAX_RAISING_ORDER: usize = 8;

/// Weighted growth envelope `|F(z)| e^{-pi |z|^2 / 2} <= amplitude * e^{-im_rate * (Im z)^2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedEnvelope {
    pub amplitude: f64,
    pub im_rate: f64,
}

/// Declared quasi-periodicity `F(z+k) = e^{2 pi i k nu} e^{pi k^2/2 + pi z k} F(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderCharacter {
    pub nu: f64,
}

/// A holomorphic function handle with optional growth/automorphy metadata.
#[derive(Clone)]
pub struct HoloFn {
    eval: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    envelope: Option<WeightedEnvelope>,
    quasi_period: Option<CylinderCharacter>,
}

impl HoloFn {
    /// Bare holomorphic evaluator with no declared metadata.
    pub fn new(eval: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            envelope: None,
            quasi_period: None,
        }
    }

    /// Declare a weighted growth envelope; verified on a probe grid.
    pub fn with_envelope(mut self, envelope: WeightedEnvelope) -> Result<Self> {
        for i in -12..=12 {
            for &x in &[0.0, 0.37, 0.81] {
                let zeta = Complex64::new(x, i as f64 * 0.5);
                let weighted = (self.eval)(zeta).norm() * (-PI * zeta.norm_sqr() / 2.0).exp();
                let bound = envelope.amplitude * (-envelope.im_rate * zeta.im * zeta.im).exp();
                if weighted > bound * (1.0 + 1e-9) + 1e-12 {
                    return Err(Error::Invalid(format!(
                        "declared weighted envelope violated at z = {zeta} ({weighted} > {bound})"
                    )));
                }
            }
        }
        self.envelope = Some(envelope);
        Ok(self)
    }

    /// Declare cylinder quasi-periodicity; the functional-equation residual is
    /// verified at probe points.
    pub fn with_cylinder_character(mut self, nu: f64) -> Result<Self> {
        for &(x, y) in &[(0.2, 0.4), (0.7, -0.3), (0.1, 1.1)] {
            let z = Complex64::new(x, y);
            let lhs = (self.eval)(z + 1.0);
            let rhs = Complex64::new(0.0, 2.0 * PI * nu).exp()
                * (Complex64::new(PI / 2.0, 0.0) + PI * z).exp()
                * (self.eval)(z);
            if (lhs - rhs).norm() > 1e-8 * (1.0 + rhs.norm()) {
                return Err(Error::Invalid(format!(
                    "declared cylinder character fails the functional equation at z = {z}"
                )));
            }
        }
        self.quasi_period = Some(CylinderCharacter { nu });
        Ok(self)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    pub fn envelope(&self) -> Option<WeightedEnvelope> {
        self.envelope
    }

    pub fn quasi_period(&self) -> Option<CylinderCharacter> {
        self.quasi_period
    }
}

/// `M(z) = e^{-i pi x xi + pi |z|^2 / 2}`, the isometric multiplier between
/// the strip and its Gaussian-weighted version.
pub fn multiplier(z: Complex64) -> Complex64 {
    Complex64::new(PI / 2.0 * z.norm_sqr(), -PI * z.re * z.im).exp()
}

fn cached_hermite(r: usize) -> Window {
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<std::collections::BTreeMap<usize, Window>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Default::default()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(r)
        .or_insert_with(|| Window::hermite(r).unwrap())
        .clone()
}

/// Bargmann transform of a coefficient signal, normalized so that the basis
/// signal `e_{k,nu}` maps onto `phi_{k,nu}`.
pub fn bargmann_eval(f: &QPSignal, z: Complex64) -> Complex64 {
    let g = cached_hermite(0);
    2f64.powf(-0.25) * multiplier(z) * stft_eval(f, &g, CylinderPoint::new(z.re, -z.im))
}

/// True polyanalytic Bargmann transform of order `r` (Landau level `r`).
pub fn true_bargmann_eval(r: usize, f: &QPSignal, z: Complex64) -> Result<Complex64> {
    if r > MAX_TRUE_ORDER {
        return Err(Error::UnsupportedOrder {
            what: "true_bargmann_eval",
            max: MAX_TRUE_ORDER,
            got: r,
        });
    }
    let g = cached_hermite(r);
    Ok(2f64.powf(-0.25) * multiplier(z) * stft_eval(f, &g, CylinderPoint::new(z.re, -z.im)))
}

/// Weyl translation `tau(w) F(z) = e^{pi z conj(w) - pi |w|^2 / 2} F(z - w)`.
///
/// For a function with declared cylinder quasi-periodicity the translation
/// parameter must have integer imaginary part.
pub fn weyl_translate(f: &HoloFn, w: Complex64, z: Complex64) -> Result<Complex64> {
    if f.quasi_period().is_some() && (w.im - w.im.round()).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "weyl_translate: Im w = {} must be an integer for cylinder quasi-periodic functions",
            w.im
        )));
    }
    Ok((PI * z * w.conj() - PI / 2.0 * w.norm_sqr()).exp() * f.eval(z - w))
}

fn fock_series_cutoff(drift: f64, pol: &TruncationPolicy, what: &'static str) -> Result<usize> {
    let margin = (2.0 * (1.0 / pol.abs_tol).ln() / PI).sqrt();
    let cutoff = (drift.abs() + margin).ceil() as usize + 2;
    if 2 * cutoff + 1 > pol.max_terms {
        let k = (pol.max_terms / 2) as f64;
        return Err(Error::Convergence {
            what,
            tail: (PI * k * drift.abs() - PI * k * k / 2.0).exp(),
        });
    }
    Ok(cutoff)
}

/// Reproducing kernel of the analytic Fock space on `C/Z` (Poincare form):
/// `e^{pi z conj(w)} sum_k e^{2 pi i k nu} e^{pi k (z - conj(w))} e^{-pi k^2/2}`.
pub fn fock_kernel_analytic(
    nu: f64,
    z: Complex64,
    w: Complex64,
    pol: &TruncationPolicy,
) -> Result<Complex64> {
    fock_kernel_true(0, nu, z, w, pol)
}

/// Theta-series form of the analytic kernel,
/// `sqrt(2) e^{pi (z^2 + conj(w)^2)/2} sum_k e^{-2 pi (k+nu)^2 + 2 pi i (k+nu)(z - conj(w))}`;
/// equals [`fock_kernel_analytic`] (used as its independent cross-check).
pub fn fock_kernel_theta_form(
    nu: f64,
    z: Complex64,
    w: Complex64,
    pol: &TruncationPolicy,
) -> Result<Complex64> {
    let zeta = z - w.conj();
    // terms e^{-2 pi (k+nu)^2 - 2 pi (k+nu) Im zeta}
    let margin = (zeta.im * zeta.im / 4.0 + (1.0 / pol.abs_tol).ln() / (2.0 * PI)).sqrt();
    let cutoff = (nu.abs() + zeta.im.abs() / 2.0 + margin).ceil() as usize + 2;
    if 2 * cutoff + 1 > pol.max_terms {
        return Err(Error::Convergence {
            what: "fock_kernel_theta_form",
            tail: pol.abs_tol,
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -(cutoff as i64)..=(cutoff as i64) {
        let a = k as f64 + nu;
        acc += (Complex64::new(-2.0 * PI * a * a, 0.0) + Complex64::new(0.0, 2.0 * PI * a) * zeta)
            .exp();
    }
    Ok(2f64.sqrt() * (PI / 2.0 * (z * z + w.conj() * w.conj())).exp() * acc)
}

/// Reproducing kernel of the true polyanalytic Fock space of order `r`:
/// `e^{pi z conj(w)} sum_k e^{2 pi i k nu} e^{pi k (z - conj(w))} e^{-pi k^2/2} L_r(pi |z-w-k|^2)`.
pub fn fock_kernel_true(
    r: usize,
    nu: f64,
    z: Complex64,
    w: Complex64,
    pol: &TruncationPolicy,
) -> Result<Complex64> {
    let shift = z - w.conj();
    let cutoff = fock_series_cutoff(shift.re, pol, "fock_kernel_true")? + r / 2 + 4;
    let d = z - w;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -(cutoff as i64)..=(cutoff as i64) {
        let kf = k as f64;
        let m = PI * (d - kf).norm_sqr();
        let expo = Complex64::new(0.0, 2.0 * PI * kf * nu) + kf * PI * shift
            - Complex64::new(PI * kf * kf / 2.0, 0.0);
        acc += expo.exp() * laguerre(r, 0.0, m)?;
    }
    Ok((PI * z * w.conj()).exp() * acc)
}

/// Reproducing kernel of the polyanalytic Fock space of order `n` (the
/// `L^1_{n-1}` Laguerre form); the Vasilevski decomposition sum
/// `sum_{r<n} fock_kernel_true(r)` is its independent verification route.
pub fn fock_kernel_poly(
    n: usize,
    nu: f64,
    z: Complex64,
    w: Complex64,
    pol: &TruncationPolicy,
) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::Invalid(
            "fock_kernel_poly: order must be positive".into(),
        ));
    }
    let shift = z - w.conj();
    let cutoff = fock_series_cutoff(shift.re, pol, "fock_kernel_poly")? + n / 2 + 4;
    let d = z - w;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -(cutoff as i64)..=(cutoff as i64) {
        let kf = k as f64;
        let m = PI * (d - kf).norm_sqr();
        let expo = Complex64::new(0.0, 2.0 * PI * kf * nu) + kf * PI * shift
            - Complex64::new(PI * kf * kf / 2.0, 0.0);
        acc += expo.exp() * laguerre(n - 1, 1.0, m)?;
    }
    Ok((PI * z * w.conj()).exp() * acc)
}

/// Complex periodization over `Gamma' = i (1/beta) Z` with character
/// `chi_l(i n / beta) = e^{2 pi i n l / beta}`:
/// `P(F)(z) = sum_n chi_l e^{-pi z conj(gamma_n) - pi |gamma_n|^2/2} F(z + gamma_n)`.
pub fn complex_periodize(
    f: &HoloFn,
    beta: f64,
    l: i64,
    z: Complex64,
    pol: &TruncationPolicy,
) -> Result<Complex64> {
    if !(beta > 0.0) {
        return Err(Error::Invalid(
            "complex_periodize: beta must be positive".into(),
        ));
    }
    let env = f
        .envelope()
        .ok_or(Error::RequiresDecay("complex_periodize"))?;
    // |term| <= amplitude e^{pi |z|^2/2} e^{-im_rate (Im z + n/beta)^2}
    let scale = env.amplitude * (PI * z.norm_sqr() / 2.0).exp();
    let reach = ((scale / pol.abs_tol).max(1.0).ln() / env.im_rate).sqrt();
    let lo = ((-z.im - reach) * beta).floor() as i64;
    let hi = ((-z.im + reach) * beta).ceil() as i64;
    if (hi - lo) as usize > pol.max_terms {
        return Err(Error::Convergence {
            what: "complex_periodize",
            tail: scale * (-env.im_rate * reach * reach).exp(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for n in lo..=hi {
        let gamma = Complex64::new(0.0, n as f64 / beta);
        let chi = Complex64::new(0.0, 2.0 * PI * n as f64 * l as f64 / beta).exp();
        acc +=
            chi * (-PI * z * gamma.conj() - PI / 2.0 * gamma.norm_sqr()).exp() * f.eval(z + gamma);
    }
    Ok(acc)
}

/// Residual of the vertical-lattice functional equation
/// `F(z + gamma_n) = conj(chi_l(gamma_n)) e^{pi |gamma_n|^2/2 + pi z conj(gamma_n)} F(z)`
/// satisfied by the output of [`complex_periodize`].
pub fn functional_equation_residual(
    f: impl Fn(Complex64) -> Complex64,
    beta: f64,
    l: i64,
    n: i64,
    z: Complex64,
) -> f64 {
    let gamma = Complex64::new(0.0, n as f64 / beta);
    let chi = Complex64::new(0.0, 2.0 * PI * n as f64 * l as f64 / beta).exp();
    let lhs = f(z + gamma);
    let rhs = chi.conj() * (PI / 2.0 * gamma.norm_sqr() + PI * z * gamma.conj()).exp() * f(z);
    (lhs - rhs).norm() / (1.0 + rhs.norm())
}

/// Trapezoid-rule Cauchy-integral derivative `F^{(order)}(z)` on a circle of
/// the given radius, with `64 (order+1)` nodes (spectral accuracy for
/// functions analytic on the closed disk).
pub fn cauchy_derivative(
    f: impl Fn(Complex64) -> Complex64,
    z: Complex64,
    order: usize,
    radius: f64,
) -> Result<Complex64> {
    if order > MAX_CAUCHY_ORDER {
        return Err(Error::UnsupportedOrder {
            what: "cauchy_derivative",
            max: MAX_CAUCHY_ORDER,
            got: order,
        });
    }
    if !(radius > 0.0) {
        return Err(Error::Invalid(
            "cauchy_derivative: radius must be positive".into(),
        ));
    }
    let n = 64 * (order + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let theta = 2.0 * PI * j as f64 / n as f64;
        let dir = Complex64::new(0.0, theta).exp();
        acc += f(z + radius * dir) * Complex64::new(0.0, -(order as f64) * theta).exp();
    }
    Ok(acc * factorial(order) / (n as f64 * radius.powi(order as i32)))
}

/// Raising operator `(d/dz - pi conj(z))^r F(z)`, via the binomial expansion
/// `sum_j C(r,j) (-pi conj z)^{r-j} F^{(j)}(z)` with Cauchy-integral
/// derivatives sharing one ring.
pub fn raising_apply(f: &HoloFn, r: usize, z: Complex64) -> Result<Complex64> {
    if r > MAX_RAISING_ORDER {
        return Err(Error::UnsupportedOrder {
            what: "raising_apply",
            max: MAX_RAISING_ORDER,
            got: r,
        });
    }
    if r == 0 {
        return Ok(f.eval(z));
    }
    let radius = 0.5;
    let n = 64 * (r + 1);
    let mut ring = Vec::with_capacity(n);
    for j in 0..n {
        let theta = 2.0 * PI * j as f64 / n as f64;
        ring.push((theta, f.eval(z + radius * Complex64::new(0.0, theta).exp())));
    }
    let deriv = |order: usize| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(theta, v) in &ring {
            acc += v * Complex64::new(0.0, -(order as f64) * theta).exp();
        }
        acc * factorial(order) / (n as f64 * radius.powi(order as i32))
    };
    let mzbar = -PI * z.conj();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=r {
        acc += binomial(r, j) * mzbar.powu((r - j) as u32) * deriv(j);
    }
    Ok(acc)
}

/// Weighted-strip pairing `int_{[0,1] x [-T,T]} F(z) conj(G(z)) e^{-pi |z|^2} dz`
/// by tensorized quadrature (trapezoid in `x`, Gauss-Legendre panels in `xi`).
pub fn weighted_strip_inner(
    f: impl Fn(Complex64) -> Complex64 + Sync,
    g: impl Fn(Complex64) -> Complex64 + Sync,
    xi_extent: f64,
    nx: usize,
    panels: usize,
) -> Complex64 {
    integrate_panels(
        |xi| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..nx {
                let x = i as f64 / nx as f64;
                let z = Complex64::new(x, xi);
                acc += f(z) * g(z).conj() * (-PI * z.norm_sqr()).exp();
            }
            acc / nx as f64
        },
        -xi_extent,
        xi_extent,
        panels,
        12,
    )
}
