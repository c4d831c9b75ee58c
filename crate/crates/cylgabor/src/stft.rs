//! The STFT on the cylinder as an orthonormal-expansion series, its
//! quasi-periodicity, the Moyal isometry in coefficient space, and the
//! reproducing kernels of the Gabor spaces.
//!
//! With `F(conj g)(xi) = int conj(g(t)) e^{-2 pi i xi t} dt`, the transform of
//! a coefficient signal is the finite exact sum
//!
//! `V_g f(x, xi) = sum_k a_k e^{2 pi i x (nu+k-xi)} F(conj g)(xi - nu - k)`,
//!
//! and the reproducing kernel of the Gabor space is the bilinear sum of the
//! orthonormal basis images,
//!
//! `K_g^nu(z, w) = e^{-2 pi i (x xi - x' xi')} sum_k e^{2 pi i (nu+k)(x-x')}
//!     F(conj g)(xi-nu-k) conj(F(conj g)(xi'-nu-k))`.
//!
//! Closed Gaussian/Hermite forms are Poincare-type series carrying the same
//! phase convention, so every cross-form identity below is an equality with
//! alignment constant 1.

use crate::numerics::wrap_unit;
use crate::signal::{QPSignal, Window};
use crate::special::{laguerre, TruncationPolicy, MAX_HERMITE_ORDER};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// A phase-space point `z = x + i xi` on the strip `[0,1) x R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderPoint {
    pub x: f64,
    pub xi: f64,
}

impl CylinderPoint {
    pub fn new(x: f64, xi: f64) -> Self {
        Self { x, xi }
    }

    /// Fundamental-domain representative with `x` reduced into `[0, 1)`.
    pub fn canonicalize(self) -> Self {
        Self {
            x: self.x.rem_euclid(1.0),
            xi: self.xi,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.xi)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self { x: z.re, xi: z.im }
    }

    /// Distance on the cylinder (horizontal coordinate mod 1).
    pub fn distance(self, other: Self) -> f64 {
        let dx = wrap_unit(self.x - other.x);
        (dx * dx + (self.xi - other.xi).powi(2)).sqrt()
    }
}

/// A uniform evaluation grid with inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub x1: f64,
    pub nx: usize,
    pub xi0: f64,
    pub xi1: f64,
    pub nxi: usize,
}

impl GridSpec {
    pub fn new(x0: f64, x1: f64, nx: usize, xi0: f64, xi1: f64, nxi: usize) -> Result<Self> {
        if nx < 2 || nxi < 2 {
            return Err(Error::Invalid(
                "grid needs at least 2 points per axis".into(),
            ));
        }
        if !(x1 > x0) || !(xi1 > xi0) {
            return Err(Error::Invalid("grid endpoints must be increasing".into()));
        }
        Ok(Self {
            x0,
            x1,
            nx,
            xi0,
            xi1,
            nxi,
        })
    }

    pub fn x_at(&self, i: usize) -> f64 {
        self.x0 + (self.x1 - self.x0) * i as f64 / (self.nx - 1) as f64
    }

    pub fn xi_at(&self, j: usize) -> f64 {
        self.xi0 + (self.xi1 - self.xi0) * j as f64 / (self.nxi - 1) as f64
    }
}

/// `V_g f(x, xi)`: exact finite sum over the signal's coefficient support.
pub fn stft_eval(f: &QPSignal, g: &Window, p: CylinderPoint) -> Complex64 {
    let nu = f.nu();
    let mut acc = Complex64::new(0.0, 0.0);
    for (&k, &a) in f.coeffs() {
        let freq = nu + k as f64;
        acc +=
            a * Complex64::new(0.0, 2.0 * PI * p.x * (freq - p.xi)).exp() * g.ft_conj(p.xi - freq);
    }
    acc
}

/// Row-major STFT grid (`xi` outer, `x` inner), elementwise equal to
/// [`stft_eval`].
pub fn stft_grid(f: &QPSignal, g: &Window, grid: &GridSpec) -> Vec<Complex64> {
    let rows: Vec<Vec<Complex64>> = (0..grid.nxi)
        .into_par_iter()
        .map(|j| {
            (0..grid.nx)
                .map(|i| stft_eval(f, g, CylinderPoint::new(grid.x_at(i), grid.xi_at(j))))
                .collect()
        })
        .collect();
    rows.into_iter().flatten().collect()
}

/// Index window such that `F(conj g)` drops below `tol` outside
/// `[xi - reach, xi + reach]` around both kernel frequencies.
fn kernel_index_range(
    g: &Window,
    nu: f64,
    xi: f64,
    xi2: f64,
    pol: &TruncationPolicy,
) -> Result<(i64, i64)> {
    let decay = g.decay_required("gabor_kernel")?;
    let reach = decay.reach(pol.abs_tol);
    let lo = (xi.min(xi2) - nu - reach).floor() as i64;
    let hi = (xi.max(xi2) - nu + reach).ceil() as i64;
    if (hi - lo) as usize > pol.max_terms {
        return Err(Error::Convergence {
            what: "gabor_kernel",
            tail: decay.amplitude * (-decay.rate * reach * reach).exp(),
        });
    }
    Ok((lo, hi))
}

/// Reproducing kernel of the Gabor space `H_g^nu`, as the bilinear sum over
/// the orthonormal basis images.
pub fn gabor_kernel(
    g: &Window,
    nu: f64,
    z: CylinderPoint,
    w: CylinderPoint,
    pol: &TruncationPolicy,
) -> Result<Complex64> {
    let (lo, hi) = kernel_index_range(g, nu, z.xi, w.xi, pol)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in lo..=hi {
        let freq = nu + k as f64;
        acc += Complex64::new(0.0, 2.0 * PI * freq * (z.x - w.x)).exp()
            * g.ft_conj(z.xi - freq)
            * g.ft_conj(w.xi - freq).conj();
    }
    let phase = Complex64::new(0.0, -2.0 * PI * (z.x * z.xi - w.x * w.xi)).exp();
    Ok(phase * acc)
}

/// Closed Gaussian-window kernel (Poincare/theta form):
/// `e^{-i pi (x xi - x' xi')} e^{-pi/2 (|z|^2+|w|^2)} e^{pi conj(z) w}
///  sum_k e^{2 pi i k nu} e^{pi k (conj(z) - w)} e^{-pi k^2/2}`.
pub fn kernel_gaussian_closed(
    nu: f64,
    z: CylinderPoint,
    w: CylinderPoint,
    pol: &TruncationPolicy,
) -> Result<Complex64> {
    let zc = z.to_complex();
    let wc = w.to_complex();
    let shift = zc.conj() - wc;
    let cutoff = gaussian_series_cutoff(shift.re, pol)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -(cutoff as i64)..=(cutoff as i64) {
        let kf = k as f64;
        let expo = Complex64::new(0.0, 2.0 * PI * kf * nu) + kf * PI * shift
            - Complex64::new(PI * kf * kf / 2.0, 0.0);
        acc += expo.exp();
    }
    let pre = Complex64::new(0.0, -PI * (z.x * z.xi - w.x * w.xi)).exp()
        * Complex64::new(-PI / 2.0 * (zc.norm_sqr() + wc.norm_sqr()), 0.0).exp()
        * (PI * zc.conj() * wc).exp();
    Ok(pre * acc)
}

fn gaussian_series_cutoff(drift: f64, pol: &TruncationPolicy) -> Result<usize> {
    // terms e^{pi k drift - pi k^2/2}: peak at k = drift, gaussian width from tol
    let margin = (2.0 * (1.0 / pol.abs_tol).ln() / PI).sqrt();
    let cutoff = (drift.abs() + margin).ceil() as usize + 2;
    if 2 * cutoff + 1 > pol.max_terms {
        let k = (pol.max_terms / 2) as f64;
        return Err(Error::Convergence {
            what: "closed kernel series",
            tail: (PI * k * drift.abs() - PI * k * k / 2.0).exp(),
        });
    }
    Ok(cutoff)
}

/// Closed Hermite-window kernel: the Laguerre-weighted Poincare series
/// `e^{-2 pi i x'(xi-xi')} e^{-i pi (x-x')(xi-xi')} sum_k e^{2 pi i k nu}
///  e^{-i pi k (xi+xi')} e^{-pi |z-w-k|^2/2} L_r(pi |z-w-k|^2)`.
pub fn kernel_hermite_closed(
    r: usize,
    nu: f64,
    z: CylinderPoint,
    w: CylinderPoint,
    pol: &TruncationPolicy,
) -> Result<Complex64> {
    if r > MAX_HERMITE_ORDER {
        return Err(Error::UnsupportedOrder {
            what: "kernel_hermite_closed",
            max: MAX_HERMITE_ORDER,
            got: r,
        });
    }
    let zc = z.to_complex();
    let wc = w.to_complex();
    let d = zc - wc;
    // Laguerre polynomial growth against the Gaussian: small index padding.
    let cutoff = gaussian_series_cutoff(d.re, pol)? + r / 2 + 4;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -(cutoff as i64)..=(cutoff as i64) {
        let dk = d - k as f64;
        let m = PI * dk.norm_sqr();
        let expo = Complex64::new(
            -m / 2.0,
            2.0 * PI * k as f64 * nu - PI * k as f64 * (z.xi + w.xi),
        );
        acc += expo.exp() * laguerre(r, 0.0, m)?;
    }
    let pre = Complex64::new(0.0, -2.0 * PI * w.x * (z.xi - w.xi)).exp()
        * Complex64::new(0.0, -PI * (z.x - w.x) * (z.xi - w.xi)).exp();
    Ok(pre * acc)
}

/// Coefficient-space Moyal pairing:
/// `<V_{g1} f1, V_{g2} f2>_{L^2((0,1) x R)} = <f1, f2> conj(<g1, g2>)`.
///
/// The window bracket is evaluated by quadrature over the declared decay
/// reach; orthonormal-family pairs reduce it to 0 or 1 exactly.
pub fn moyal_inner(f1: &QPSignal, f2: &QPSignal, g1: &Window, g2: &Window) -> Result<Complex64> {
    let sig = f1.inner_product(f2)?;
    let reach = g1
        .decay()
        .and_then(|a| g2.decay().map(|b| a.reach(1e-14).max(b.reach(1e-14))))
        .unwrap_or(30.0);
    let bracket = crate::numerics::integrate_panels(
        |t| g1.time(t) * g2.time(t).conj(),
        -reach,
        reach,
        (8.0 * reach) as usize,
        12,
    );
    Ok(sig * bracket.conj())
}
