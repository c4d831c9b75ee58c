//! The signal space `L^2_nu(0,1)`: coefficient-space signals, analysis
//! windows with decay metadata, and the periodization operator
//! `Sigma_nu f(t) = sum_k e^{2 pi i k nu} f(t-k)` applied to time-frequency
//! shifts of windows.

use crate::numerics::integrate_panels;
use crate::special::{
    hermite_fn, tp_window_ft, TPFactorization, TruncationPolicy, MAX_HERMITE_ORDER,
};
use crate::stft::CylinderPoint;
use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

/// An element of `L^2_nu(0,1)` stored by its coefficients against the
/// orthonormal basis `e_{k,nu}(t) = e^{2 pi i t (nu + k)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QPSignal {
    nu: f64,
    coeffs: BTreeMap<i64, Complex64>,
}

impl QPSignal {
    /// Build a signal from distinct `(k, a_k)` coefficient entries.
    pub fn new(nu: f64, entries: &[(i64, Complex64)]) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for &(k, a) in entries {
            if coeffs.insert(k, a).is_some() {
                return Err(Error::Invalid(format!("duplicate coefficient index {k}")));
            }
        }
        Ok(Self { nu, coeffs })
    }

    /// The zero signal.
    pub fn zero(nu: f64) -> Self {
        Self {
            nu,
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis signal `e_{k,nu}`.
    pub fn basis(nu: f64, k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, Complex64::new(1.0, 0.0));
        Self { nu, coeffs }
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs
            .get(&k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Coefficient truncation radius `K = max |k|` over the support.
    pub fn truncation_radius(&self) -> i64 {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    /// Pointwise evaluation `f(t) = sum_k a_k e^{2 pi i t (nu + k)}`.
    pub fn eval(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&k, &a) in &self.coeffs {
            acc += a * Complex64::new(0.0, 2.0 * PI * t * (self.nu + k as f64)).exp();
        }
        acc
    }

    /// Coefficient-space inner product `sum_k a_k conj(b_k)` (Parseval form).
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.nu != other.nu {
            return Err(Error::NuMismatch {
                left: self.nu,
                right: other.nu,
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (&k, &a) in &self.coeffs {
            acc += a * other.coeff(k).conj();
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            nu: self.nu,
            coeffs: self.coeffs.iter().map(|(&k, &a)| (k, c * a)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.nu != other.nu {
            return Err(Error::NuMismatch {
                left: self.nu,
                right: other.nu,
            });
        }
        let mut coeffs = self.coeffs.clone();
        for (&k, &b) in &other.coeffs {
            *coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0)) -= b;
        }
        Ok(Self {
            nu: self.nu,
            coeffs,
        })
    }

    /// Serialize as `{ "nu": ..., "coeffs": [[k, re, im], ...] }`.
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(&k, &a)| serde_json::json!([k, a.re, a.im]))
            .collect();
        serde_json::json!({ "nu": self.nu, "coeffs": coeffs })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let nu = v
            .get("nu")
            .and_then(|x| x.as_f64())
            .ok_or_else(|| Error::Invalid("signal JSON: missing numeric field 'nu'".into()))?;
        let arr = v
            .get("coeffs")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Invalid("signal JSON: missing array field 'coeffs'".into()))?;
        let mut entries = Vec::with_capacity(arr.len());
        for (i, row) in arr.iter().enumerate() {
            let row = row.as_array().filter(|r| r.len() == 3).ok_or_else(|| {
                Error::Invalid(format!("signal JSON: coeffs[{i}] is not [k, re, im]"))
            })?;
            let k = row[0].as_i64().ok_or_else(|| {
                Error::Invalid(format!("signal JSON: coeffs[{i}][0] is not an integer"))
            })?;
            let re = row[1].as_f64().ok_or_else(|| {
                Error::Invalid(format!("signal JSON: coeffs[{i}][1] is not a number"))
            })?;
            let im = row[2].as_f64().ok_or_else(|| {
                Error::Invalid(format!("signal JSON: coeffs[{i}][2] is not a number"))
            })?;
            entries.push((k, Complex64::new(re, im)));
        }
        Self::new(nu, &entries)
    }
}

/// Gaussian-envelope bound `amplitude * e^{-rate * s^2}` dominating a window
/// and its Fourier transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayBound {
    pub amplitude: f64,
    pub rate: f64,
}

impl DecayBound {
    /// Half-width beyond which the envelope stays below `tol`.
    pub fn reach(&self, tol: f64) -> f64 {
        ((self.amplitude / tol).max(1.0).ln() / self.rate).sqrt()
    }
}

#[derive(Debug, Clone)]
pub enum WindowKind {
    Gaussian,
    Hermite(usize),
    TotallyPositive(TPFactorization),
    Custom,
}

type Evaluator = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A unit-norm analysis window: closed-form evaluators for `g(t)` and
/// `F(conj g)(xi)` plus an optional Gaussian-envelope decay bound.
#[derive(Clone)]
pub struct Window {
    kind: WindowKind,
    time_eval: Evaluator,
    ft_conj_eval: Evaluator,
    decay: Option<DecayBound>,
}

impl std::fmt::Debug for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Window")
            .field("kind", &self.kind)
            .field("decay", &self.decay)
            .finish()
    }
}

impl Window {
    /// The standard Gaussian `h_0(t) = 2^{1/4} e^{-pi t^2}` (Fourier invariant).
    pub fn gaussian() -> Self {
        let g: Evaluator = Arc::new(|t| Complex64::new(2f64.powf(0.25) * (-PI * t * t).exp(), 0.0));
        Self {
            kind: WindowKind::Gaussian,
            time_eval: g.clone(),
            ft_conj_eval: g,
            decay: Some(DecayBound {
                amplitude: 2f64.powf(0.25),
                rate: PI,
            }),
        }
    }

    /// The Hermite window `h_r`; `F(conj h_r) = (-i)^r h_r` under the
    /// `e^{-2 pi i xi t}` transform convention.
    pub fn hermite(r: usize) -> Result<Self> {
        if r > MAX_HERMITE_ORDER {
            return Err(Error::UnsupportedOrder {
                what: "hermite window",
                max: MAX_HERMITE_ORDER,
                got: r,
            });
        }
        let time: Evaluator = Arc::new(move |t| Complex64::new(hermite_fn(r, t).unwrap(), 0.0));
        let phase = Complex64::new(0.0, -1.0).powu(r as u32);
        let ft: Evaluator = Arc::new(move |xi| phase * hermite_fn(r, xi).unwrap());
        // |h_r(t)| <= C_r e^{-pi t^2 / 2}: polynomial growth absorbed into a
        // halved rate, C_r taken as the probed supremum of |h_r| e^{pi t^2/2}.
        Ok(Self {
            kind: WindowKind::Hermite(r),
            time_eval: time,
            ft_conj_eval: ft,
            decay: Some(DecayBound {
                amplitude: envelope_probe_amplitude(r),
                rate: PI / 2.0,
            }),
        })
    }

    /// Totally positive window from its Fourier factorization. The
    /// factorization is rescaled to unit L2 norm; a Gaussian decay envelope is
    /// only available when `gamma > 0` (pure pole factorizations decay
    /// polynomially in frequency and refuse envelope-certified truncations).
    pub fn totally_positive(fac: TPFactorization) -> Result<Self> {
        // Parseval: ||g||_2 = ||ghat||_2.
        let raw_norm_sq = integrate_panels(
            |xi| Complex64::new(tp_window_ft(&fac, xi).norm_sqr(), 0.0),
            -tp_reach(&fac),
            tp_reach(&fac),
            64,
            12,
        )
        .re;
        if !(raw_norm_sq > 0.0) || !raw_norm_sq.is_finite() {
            return Err(Error::Invalid(
                "totally positive window has vanishing or divergent norm".into(),
            ));
        }
        let mut fac = fac;
        fac.c /= raw_norm_sq.sqrt();
        let reach = tp_reach(&fac);
        let fac_ft = fac.clone();
        // Real window: F(conj g) = ghat.
        let ft: Evaluator = Arc::new(move |xi| tp_window_ft(&fac_ft, xi));
        let fac_time = fac.clone();
        let time: Evaluator = Arc::new(move |t| {
            // inverse transform by quadrature; the factorization lives on the
            // frequency side.
            integrate_panels(
                |xi| tp_window_ft(&fac_time, xi) * Complex64::new(0.0, 2.0 * PI * xi * t).exp(),
                -reach,
                reach,
                96,
                12,
            )
        });
        // The frequency side obeys |ghat| <= c e^{-gamma xi^2} exactly, but
        // the time side of a pole factorization decays exponentially, not
        // Gaussian-fast, so the envelope rate is fitted on the probe grid
        // (the pole time constants bound the true exponential tails).
        let decay = if fac.gamma > 0.0 {
            let max_nu = fac.nu_j.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let rate = if max_nu > 0.0 {
                fac.gamma.min(0.2 / max_nu)
            } else {
                fac.gamma
            };
            let mut amp = 0.0f64;
            let mut s = -10.0;
            while s <= 10.0 {
                let probe = time(s).norm().max(ft(s).norm());
                amp = amp.max(probe * (rate * s * s).exp());
                s += 0.25;
            }
            Some(DecayBound {
                amplitude: amp * 1.05,
                rate,
            })
        } else {
            None
        };
        let w = Self {
            kind: WindowKind::TotallyPositive(fac),
            time_eval: time,
            ft_conj_eval: ft,
            decay,
        };
        w.check_unit_norm()?;
        Ok(w)
    }

    /// A caller-supplied window. The constructor verifies unit norm by
    /// quadrature and, when a decay bound is declared, that it dominates both
    /// evaluators on a probe grid.
    pub fn custom(
        time_eval: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        ft_conj_eval: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        decay: Option<DecayBound>,
    ) -> Result<Self> {
        let w = Self {
            kind: WindowKind::Custom,
            time_eval: Arc::new(time_eval),
            ft_conj_eval: Arc::new(ft_conj_eval),
            decay,
        };
        w.check_unit_norm()?;
        if let Some(d) = decay {
            for i in -40..=40 {
                let s = i as f64 * 0.25;
                let bound = d.amplitude * (-d.rate * s * s).exp() + 1e-12;
                if (w.time_eval)(s).norm() > bound || (w.ft_conj_eval)(s).norm() > bound {
                    return Err(Error::Invalid(format!(
                        "declared decay envelope does not dominate the window at s = {s}"
                    )));
                }
            }
        }
        Ok(w)
    }

    fn check_unit_norm(&self) -> Result<()> {
        let reach = self.decay.map(|d| d.reach(1e-14).max(8.0)).unwrap_or(30.0);
        let nrm = integrate_panels(
            |t| Complex64::new((self.time_eval)(t).norm_sqr(), 0.0),
            -reach,
            reach,
            (8.0 * reach) as usize,
            12,
        )
        .re;
        if (nrm - 1.0).abs() > 1e-8 {
            return Err(Error::Invalid(format!(
                "window is not unit norm: ||g||^2 = {nrm}"
            )));
        }
        Ok(())
    }

    pub fn kind(&self) -> &WindowKind {
        &self.kind
    }

    pub fn decay(&self) -> Option<DecayBound> {
        self.decay
    }

    pub fn decay_required(&self, what: &'static str) -> Result<DecayBound> {
        self.decay.ok_or(Error::RequiresDecay(what))
    }

    /// `g(t)`.
    pub fn time(&self, t: f64) -> Complex64 {
        (self.time_eval)(t)
    }

    /// `F(conj g)(xi)` with `F f(xi) = int f(t) e^{-2 pi i xi t} dt`.
    pub fn ft_conj(&self, xi: f64) -> Complex64 {
        (self.ft_conj_eval)(xi)
    }
}

fn envelope_probe_amplitude(r: usize) -> f64 {
    // sup_t |h_r(t)| e^{pi t^2 / 2} over a probe grid, with headroom.
    let mut amp = 0.0f64;
    let mut t = -12.0;
    while t <= 12.0 {
        let v = hermite_fn(r, t).unwrap().abs() * (PI * t * t / 2.0).exp();
        amp = amp.max(v);
        t += 0.05;
    }
    amp * 1.05
}

fn tp_reach(fac: &TPFactorization) -> f64 {
    if fac.gamma > 0.0 {
        ((40.0f64).max((fac.c / 1e-14).ln()) / fac.gamma)
            .sqrt()
            .max(8.0)
    } else {
        // polynomial decay: widen with the number of pole pairs
        200.0 / (1.0 + fac.nu_j.len() as f64)
    }
    .min(400.0)
}

/// `Sigma_nu(pi(z) g)(t) = sum_k e^{2 pi i k nu} e^{2 pi i xi (t-k)} g(t-k-x)`,
/// truncated through the window's decay envelope.
pub fn periodize_shift(
    g: &Window,
    z: CylinderPoint,
    nu: f64,
    t: f64,
    pol: &TruncationPolicy,
) -> Result<Complex64> {
    let decay = g.decay_required("periodize_shift")?;
    let reach = decay.reach(pol.abs_tol);
    let center = t - z.x;
    let lo = (center - reach).floor() as i64;
    let hi = (center + reach).ceil() as i64;
    if (hi - lo) as usize > pol.max_terms {
        return Err(Error::Convergence {
            what: "periodize_shift",
            tail: decay.amplitude * (-decay.rate * reach * reach).exp(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in lo..=hi {
        let s = t - k as f64;
        acc += Complex64::new(0.0, 2.0 * PI * (k as f64 * nu + z.xi * s)).exp() * g.time(s - z.x);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::trapezoid_periodic;
    use crate::special::jacobi_theta;

    const POL: TruncationPolicy = TruncationPolicy {
        abs_tol: 1e-12,
        max_terms: 512,
    };

    #[test]
    fn make_signal_basic() {
        let f = QPSignal::new(0.0, &[(0, Complex64::new(1.0, 0.0))]).unwrap();
        assert!((f.eval(17.3) - Complex64::new(1.0, 0.0)).norm() < 1e-12);

        let z = QPSignal::new(0.3, &[]).unwrap();
        assert_eq!(z.norm(), 0.0);

        let two = QPSignal::new(
            0.3,
            &[
                (-1, Complex64::new(0.0, 1.0)),
                (2, Complex64::new(1.0, 0.0)),
            ],
        )
        .unwrap();
        assert!((two.norm_sq() - 2.0).abs() < 1e-15);
        assert_eq!(two.truncation_radius(), 2);

        assert!(QPSignal::new(
            0.0,
            &[(1, Complex64::new(1.0, 0.0)), (1, Complex64::new(2.0, 0.0))]
        )
        .is_err());
    }

    #[test]
    fn eval_two_coefficient_at_zero() {
        let f = QPSignal::new(
            0.3,
            &[
                (-1, Complex64::new(0.0, 1.0)),
                (2, Complex64::new(1.0, 0.0)),
            ],
        )
        .unwrap();
        assert!((f.eval(0.0) - Complex64::new(1.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn quasi_periodicity_exact() {
        let f = QPSignal::new(
            0.37,
            &[
                (-2, Complex64::new(0.4, -1.1)),
                (0, Complex64::new(0.2, 0.3)),
                (3, Complex64::new(-0.7, 0.9)),
            ],
        )
        .unwrap();
        for n in -3i64..=3 {
            for &t in &[0.0, 0.21, 0.77, 1.5, -0.4] {
                let lhs = f.eval(t + n as f64);
                let rhs = Complex64::new(0.0, 2.0 * PI * n as f64 * 0.37).exp() * f.eval(t);
                assert!((lhs - rhs).norm() < 1e-12, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn inner_product_orthonormal_basis() {
        let e0 = QPSignal::basis(0.3, 0);
        let e1 = QPSignal::basis(0.3, 1);
        assert_eq!(e0.inner_product(&e1).unwrap(), Complex64::new(0.0, 0.0));
        let f = QPSignal::new(
            0.3,
            &[
                (0, Complex64::new(1.0, 2.0)),
                (4, Complex64::new(0.0, -1.0)),
            ],
        )
        .unwrap();
        let ip = f.inner_product(&f).unwrap();
        assert!(ip.im.abs() < 1e-15 && ip.re >= 0.0);
        assert!(e0.inner_product(&QPSignal::basis(0.2, 0)).is_err());
    }

    #[test]
    fn inner_product_matches_quadrature() {
        // coefficient form vs trapezoid of f1 conj(f2) on [0,1] (the product is
        // 1-periodic for equal nu).
        let f1 = QPSignal::new(
            0.3,
            &[
                (-2, Complex64::new(0.3, 0.1)),
                (1, Complex64::new(-0.2, 0.8)),
            ],
        )
        .unwrap();
        let f2 = QPSignal::new(
            0.3,
            &[
                (1, Complex64::new(1.0, -0.4)),
                (3, Complex64::new(0.5, 0.0)),
            ],
        )
        .unwrap();
        let coeff = f1.inner_product(&f2).unwrap();
        let quad = trapezoid_periodic(|t| f1.eval(t) * f2.eval(t).conj(), 64);
        assert!((coeff - quad).norm() < 1e-8);
    }

    #[test]
    fn json_round_trip_bit_faithful() {
        let f = QPSignal::new(
            0.1234567890123456,
            &[
                (-3, Complex64::new(0.1, -0.9876543210987654)),
                (7, Complex64::new(1e-17, 3.5)),
            ],
        )
        .unwrap();
        let s = serde_json::to_string(&f.to_json()).unwrap();
        let back = QPSignal::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn window_constructors() {
        let g = Window::gaussian();
        assert!((g.time(0.0).re - 2f64.powf(0.25)).abs() < 1e-14);
        let h1 = Window::hermite(1).unwrap();
        assert!(h1.time(0.0).norm() < 1e-14);
        // F(conj h_1)(xi) = -i h_1(xi)
        let v = h1.ft_conj(0.5);
        let expect = Complex64::new(0.0, -1.0) * hermite_fn(1, 0.5).unwrap();
        assert!((v - expect).norm() < 1e-14);
        // zero window rejected
        assert!(Window::custom(
            |_| Complex64::new(0.0, 0.0),
            |_| Complex64::new(0.0, 0.0),
            None
        )
        .is_err());
    }

    #[test]
    fn custom_window_requires_honest_envelope() {
        // correct gaussian with a too-small declared amplitude must fail
        let r = Window::custom(
            |t| Complex64::new(2f64.powf(0.25) * (-PI * t * t).exp(), 0.0),
            |xi| Complex64::new(2f64.powf(0.25) * (-PI * xi * xi).exp(), 0.0),
            Some(DecayBound {
                amplitude: 0.5,
                rate: PI,
            }),
        );
        assert!(r.is_err());
    }

    #[test]
    fn periodize_gaussian_matches_direct_sum() {
        let g = Window::gaussian();
        let v = periodize_shift(&g, CylinderPoint::new(0.0, 0.0), 0.0, 0.5, &POL).unwrap();
        let mut oracle = Complex64::new(0.0, 0.0);
        for k in -20i64..=20 {
            oracle += Complex64::new(
                2f64.powf(0.25) * (-PI * (0.5 - k as f64).powi(2)).exp(),
                0.0,
            );
        }
        assert!((v - oracle).norm() < 1e-12);
    }

    #[test]
    fn periodize_is_quasi_periodic() {
        let g = Window::hermite(2).unwrap();
        let z = CylinderPoint::new(0.3, 1.2);
        let nu = 0.4;
        for &t in &[0.1, 0.6, -0.3] {
            let lhs = periodize_shift(&g, z, nu, t + 1.0, &POL).unwrap();
            let rhs = Complex64::new(0.0, 2.0 * PI * nu).exp()
                * periodize_shift(&g, z, nu, t, &POL).unwrap();
            assert!((lhs - rhs).norm() < 1e-11);
        }
    }

    #[test]
    fn periodize_gaussian_is_a_theta_function() {
        // Sigma_0 h_0(t) = 2^{1/4} e^{-pi t^2} theta_{0,0}(-i t)
        let g = Window::gaussian();
        for &t in &[0.0, 0.3, 0.8] {
            let v = periodize_shift(&g, CylinderPoint::new(0.0, 0.0), 0.0, t, &POL).unwrap();
            let theta = jacobi_theta(0.0, 0.0, Complex64::new(0.0, -t), &POL).unwrap();
            let expect = 2f64.powf(0.25) * (-PI * t * t).exp() * theta;
            assert!((v - expect).norm() < 1e-11);
        }
    }

    #[test]
    fn periodize_requires_decay() {
        let w = Window::custom(
            |t| Complex64::new(2f64.powf(0.25) * (-PI * t * t).exp(), 0.0),
            |xi| Complex64::new(2f64.powf(0.25) * (-PI * xi * xi).exp(), 0.0),
            None,
        )
        .unwrap();
        assert!(matches!(
            periodize_shift(&w, CylinderPoint::new(0.0, 0.0), 0.0, 0.5, &POL),
            Err(Error::RequiresDecay(_))
        ));
    }

    #[test]
    fn periodize_stable_under_window_doubling() {
        let g = Window::gaussian();
        let wide = TruncationPolicy {
            abs_tol: 1e-24,
            max_terms: 2048,
        };
        let a = periodize_shift(&g, CylinderPoint::new(0.2, 0.7), 0.3, 0.4, &POL).unwrap();
        let b = periodize_shift(&g, CylinderPoint::new(0.2, 0.7), 0.3, 0.4, &wide).unwrap();
        assert!((a - b).norm() < 10.0 * POL.abs_tol);
    }
}
