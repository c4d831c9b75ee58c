//! Gabor frame machinery on `L^2_nu(0,1)` for the vertical lattice
//! `Z_beta = i beta Z`: analysis matrices, frame-bound estimation by Hermitian
//! eigendecomposition, Walnut correlation functions, Janssen coefficients,
//! Wexler-Raz residuals, canonical dual windows, reconstruction and
//! sufficient-condition predicates.
//!
//! The analysis operator in coefficient space has entries
//! `M[n][k] = F(conj g)(beta n - nu - k)` (the STFT of the basis signal
//! `e_{k,nu}` at the lattice point `(0, beta n)`), so the frame operator is
//! the Hermitian matrix `M^H M` and the frame bounds are its extremal
//! eigenvalues, reported together with a truncation-doubling diagnostic.
//!
//! The canonical dual window is constructed on `L^2(R)` through the
//! Wexler-Raz relations: it is the minimal-norm solution of
//! `<gamma, M_k T_{n/beta} g> = beta delta_{k,0} delta_{n,0}`, hence a
//! finite combination of adjoint-lattice atoms `M_k T_{n/beta} g` whose
//! coefficients solve a truncated Gram system.

use crate::numerics::integrate_panels;
use crate::signal::{DecayBound, QPSignal, Window, WindowKind};
use crate::special::TruncationPolicy;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

/// Parameters of a Gabor frame problem on the lattice `i beta Z`.
#[derive(Debug, Clone)]
pub struct FrameSpec {
    pub window: Window,
    pub beta: f64,
    pub nu: f64,
    /// Coefficient truncation radius `K`: modes `|k| <= K` are retained.
    pub modes: usize,
    pub tol: f64,
}

impl FrameSpec {
    pub fn new(window: Window, beta: f64, nu: f64, modes: usize, tol: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::Invalid("frame spec: beta must be positive".into()));
        }
        if modes == 0 {
            return Err(Error::Invalid("frame spec: need at least one mode".into()));
        }
        if !(tol > 0.0) {
            return Err(Error::Invalid("frame spec: tol must be positive".into()));
        }
        Ok(Self {
            window,
            beta,
            nu,
            modes,
            tol,
        })
    }
}

/// Estimated frame bounds with truncation diagnostics.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct FrameBounds {
    /// Lower bound (minimal eigenvalue of the truncated `M^H M`, clamped at 0).
    pub a: f64,
    /// Upper bound (maximal eigenvalue).
    pub b: f64,
    /// Coefficient radius used.
    pub k_used: usize,
    /// Number of lattice rows used.
    pub n_rows_used: usize,
    /// Relative change of `A` under the last truncation doubling
    /// (comparison against the `K/2` run).
    pub convergence: f64,
}

/// Dense analysis matrix: rows indexed by lattice points `n in [-N, N]`,
/// columns by coefficient modes `k in [-K, K]`.
pub struct AnalysisMatrix {
    pub matrix: DMatrix<Complex64>,
    pub n_max: i64,
    pub k_max: i64,
}

/// Builds the analysis matrix with the row range certified by the window's
/// decay envelope: rows beyond `N` contribute less than `tol` to every
/// column's squared mass.
pub fn analysis_matrix(spec: &FrameSpec) -> Result<AnalysisMatrix> {
    let decay = spec.window.decay_required("analysis_matrix")?;
    let reach = decay.reach(spec.tol * 1e-2);
    let k_max = spec.modes as i64;
    let n_max = ((k_max as f64 + spec.nu.abs() + reach) / spec.beta).ceil() as i64;
    let rows = (2 * n_max + 1) as usize;
    let cols = (2 * k_max + 1) as usize;
    let mut m = DMatrix::from_element(rows, cols, Complex64::new(0.0, 0.0));
    for (i, n) in (-n_max..=n_max).enumerate() {
        for (j, k) in (-k_max..=k_max).enumerate() {
            m[(i, j)] = spec
                .window
                .ft_conj(spec.beta * n as f64 - spec.nu - k as f64);
        }
    }
    Ok(AnalysisMatrix {
        matrix: m,
        n_max,
        k_max,
    })
}

fn gram_extremes(m: &DMatrix<Complex64>) -> (f64, f64) {
    let gram = m.adjoint() * m;
    let eig = gram.symmetric_eigen();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in eig.eigenvalues.iter() {
        lo = lo.min(*v);
        hi = hi.max(*v);
    }
    (lo, hi)
}

/// Frame bounds as extremal eigenvalues of the truncated frame matrix, with a
/// `K` vs `K/2` convergence diagnostic.
pub fn frame_bounds(spec: &FrameSpec) -> Result<FrameBounds> {
    if spec.modes > 512 {
        return Err(Error::Invalid("frame_bounds: modes capped at 512".into()));
    }
    let full = analysis_matrix(spec)?;
    let (lo, hi) = gram_extremes(&full.matrix);
    let half_spec = FrameSpec {
        modes: (spec.modes / 2).max(1),
        ..spec.clone()
    };
    let half = analysis_matrix(&half_spec)?;
    let (lo_half, _) = gram_extremes(&half.matrix);
    let a = lo.max(0.0);
    let convergence = if a > 0.0 {
        (a - lo_half.max(0.0)).abs() / a
    } else {
        0.0
    };
    Ok(FrameBounds {
        a,
        b: hi.max(0.0),
        k_used: spec.modes,
        n_rows_used: (2 * full.n_max + 1) as usize,
        convergence,
    })
}

/// Applies the frame operator `S = M^H M` to a coefficient signal (modes
/// outside the requested mode radius are dropped).
pub fn frame_apply(spec: &FrameSpec, f: &QPSignal) -> Result<QPSignal> {
    if f.nu() != spec.nu {
        return Err(Error::NuMismatch {
            left: f.nu(),
            right: spec.nu,
        });
    }
    let am = analysis_matrix(spec)?;
    let cols = (2 * am.k_max + 1) as usize;
    let mut a = DVector::from_element(cols, Complex64::new(0.0, 0.0));
    for (j, k) in (-am.k_max..=am.k_max).enumerate() {
        a[j] = f.coeff(k);
    }
    let out = am.matrix.adjoint() * (&am.matrix * a);
    let entries: Vec<(i64, Complex64)> = (-am.k_max..=am.k_max)
        .enumerate()
        .map(|(j, k)| (k, out[j]))
        .collect();
    QPSignal::new(spec.nu, &entries)
}

/// A time-side evaluator with a Gaussian decay envelope: the common interface
/// for unit windows and (non-unit) dual windows in the Walnut/Janssen/
/// Wexler-Raz machinery.
#[derive(Clone)]
pub struct AnalysisFn {
    time: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    decay: DecayBound,
}

impl AnalysisFn {
    pub fn new(time: impl Fn(f64) -> Complex64 + Send + Sync + 'static, decay: DecayBound) -> Self {
        Self {
            time: Arc::new(time),
            decay,
        }
    }

    pub fn from_window(w: &Window) -> Result<Self> {
        let decay = w.decay_required("analysis function")?;
        let w = w.clone();
        Ok(Self {
            time: Arc::new(move |t| w.time(t)),
            decay,
        })
    }

    /// Uses the dual's exact atom expansion (the cubic grid interpolant is a
    /// portable export format, not an integration kernel).
    pub fn from_sampled(s: &SampledWindow) -> Self {
        let s = s.clone();
        let decay = s.decay;
        Self {
            time: Arc::new(move |t| s.eval_exact(t)),
            decay,
        }
    }

    pub fn time(&self, t: f64) -> Complex64 {
        (self.time)(t)
    }

    pub fn decay(&self) -> DecayBound {
        self.decay
    }
}

/// Walnut correlation function
/// `G_n(x) = sum_k conj(g)(x - n/beta - k) gamma(x - k)`, 1-periodic in `x`.
pub fn correlation_fn(
    g: &AnalysisFn,
    gamma: &AnalysisFn,
    beta: f64,
    n: i64,
    x: f64,
    pol: &TruncationPolicy,
) -> Result<Complex64> {
    let reach = g
        .decay()
        .reach(pol.abs_tol)
        .max(gamma.decay().reach(pol.abs_tol));
    let shift = n as f64 / beta;
    let lo = (x - shift.abs() - reach).floor() as i64;
    let hi = (x + shift.abs() + reach).ceil() as i64;
    if (hi - lo) as usize > pol.max_terms {
        return Err(Error::Convergence {
            what: "correlation_fn",
            tail: pol.abs_tol,
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in lo..=hi {
        acc += g.time(x - shift - k as f64).conj() * gamma.time(x - k as f64);
    }
    Ok(acc)
}

/// Janssen coefficient `<gamma, M_k T_{n/beta} g>` by Gauss-Legendre panel
/// quadrature over the decay-certified interval.
pub fn janssen_coeffs(
    g: &AnalysisFn,
    gamma: &AnalysisFn,
    beta: f64,
    k: i64,
    n: i64,
    tol: f64,
) -> Result<Complex64> {
    if !(tol > 0.0) {
        return Err(Error::Invalid(
            "janssen_coeffs: tol must be positive".into(),
        ));
    }
    let shift = n as f64 / beta;
    let reach_g = g.decay().reach(tol * 1e-2);
    let reach_gam = gamma.decay().reach(tol * 1e-2);
    let lo = (shift - reach_g).min(-reach_gam);
    let hi = (shift + reach_g).max(reach_gam);
    let panels = (((hi - lo) * (2.0 + k.abs() as f64)).ceil() as usize).max(8);
    Ok(integrate_panels(
        |t| {
            gamma.time(t)
                * g.time(t - shift).conj()
                * Complex64::new(0.0, -2.0 * PI * k as f64 * t).exp()
        },
        lo,
        hi,
        panels,
        12,
    ))
}

/// Maximal Wexler-Raz residual
/// `max_{k,l} | beta^{-1} sum_{|n|<=n_tail} <gamma, M_k T_{n/beta} g> e^{2 pi i n l / beta} - delta_{k,0} |`.
pub fn wexler_raz_residual(
    g: &AnalysisFn,
    gamma: &AnalysisFn,
    beta: f64,
    k_range: std::ops::RangeInclusive<i64>,
    l_range: std::ops::RangeInclusive<i64>,
    n_tail: i64,
    tol: f64,
) -> Result<f64> {
    let ks: Vec<i64> = k_range.collect();
    let ls: Vec<i64> = l_range.collect();
    let coeffs: Vec<Vec<Complex64>> = ks
        .par_iter()
        .map(|&k| {
            (-n_tail..=n_tail)
                .map(|n| janssen_coeffs(g, gamma, beta, k, n, tol))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for (ki, &k) in ks.iter().enumerate() {
        for &l in &ls {
            let mut s = Complex64::new(0.0, 0.0);
            for (ni, n) in (-n_tail..=n_tail).enumerate() {
                s += coeffs[ki][ni]
                    * Complex64::new(0.0, 2.0 * PI * n as f64 * l as f64 / beta).exp();
            }
            s /= beta;
            let target = if k == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((s - target).norm());
        }
    }
    Ok(worst)
}

/// Canonical dual window sampled on a uniform grid, kept together with its
/// adjoint-lattice atom expansion `gamma = sum c_{k,n} M_k T_{n/beta} g`.
#[derive(Clone)]
pub struct SampledWindow {
    base: Window,
    beta: f64,
    radius: i64,
    coeffs: Vec<Complex64>,
    grid_step: f64,
    half_width: f64,
    grid: Vec<Complex64>,
    /// Minimal eigenvalue of `beta^{-1} Gram` (coarse lower frame bound).
    pub min_gram_eigenvalue: f64,
    pub decay: DecayBound,
}

impl SampledWindow {
    fn coeff(&self, k: i64, n: i64) -> Complex64 {
        let r = self.radius;
        let side = (2 * r + 1) as usize;
        self.coeffs[(k + r) as usize * side + (n + r) as usize]
    }

    /// Exact atom-expansion value (used to build the grid and the transform).
    pub fn eval_exact(&self, t: f64) -> Complex64 {
        let r = self.radius;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in -r..=r {
            for n in -r..=r {
                let c = self.coeff(k, n);
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                acc += c
                    * Complex64::new(0.0, 2.0 * PI * k as f64 * t).exp()
                    * self.base.time(t - n as f64 / self.beta);
            }
        }
        acc
    }

    /// Piecewise-cubic (4-point Lagrange) interpolation of the sampled grid;
    /// zero outside the stored half-width.
    pub fn eval(&self, t: f64) -> Complex64 {
        let pos = (t + self.half_width) / self.grid_step;
        if pos < 1.0 || pos + 2.0 > (self.grid.len() - 1) as f64 {
            return if t.abs() <= self.half_width {
                self.eval_exact(t)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        let i = pos.floor() as usize;
        let s = pos - i as f64;
        let (p0, p1, p2, p3) = (
            self.grid[i - 1],
            self.grid[i],
            self.grid[i + 1],
            self.grid[i + 2],
        );
        p0 * (-s * (s - 1.0) * (s - 2.0) / 6.0)
            + p1 * ((s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0)
            + p2 * (-(s + 1.0) * s * (s - 2.0) / 2.0)
            + p3 * ((s + 1.0) * s * (s - 1.0) / 6.0)
    }

    /// `F(conj gamma)(s)` from the atom expansion (real base window).
    pub fn ft_conj(&self, s: f64) -> Complex64 {
        let r = self.radius;
        let xi = -s;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in -r..=r {
            for n in -r..=r {
                let c = self.coeff(k, n);
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                acc += c
                    * Complex64::new(0.0, -2.0 * PI * (xi - k as f64) * n as f64 / self.beta).exp()
                    * self.base.ft_conj(xi - k as f64);
            }
        }
        acc.conj()
    }
}

/// Ambiguity-type bracket `<M_a T_b g, M_c T_d g>` for a real window, by
/// quadrature over the decay reach.
fn atom_bracket(g: &Window, decay: DecayBound, dk: i64, db: f64, bsum: f64) -> Complex64 {
    // <M_a T_b g, M_c T_d g> = e^{pi i (a-c)(b+d)} V(dk, Delta) with
    // V(dk, Delta) = int g(s + Delta/2) g(s - Delta/2) e^{2 pi i dk s} ds.
    let reach = decay.reach(1e-15);
    let half = db.abs() / 2.0;
    if half > reach {
        return Complex64::new(0.0, 0.0);
    }
    // panel density scales with the modulation index so each panel sees well
    // under one oscillation period
    let len = 2.0 * (reach - half);
    let panels = ((len * (4.0 + dk.abs() as f64)).ceil() as usize).max(8);
    let v = integrate_panels(
        |s| {
            g.time(s + half)
                * g.time(s - half).conj()
                * Complex64::new(0.0, 2.0 * PI * dk as f64 * s).exp()
        },
        -(reach - half),
        reach - half,
        panels,
        12,
    );
    Complex64::new(0.0, PI * dk as f64 * bsum).exp() * v
}

/// Canonical dual of the Gabor system `G(g, Z x beta Z)` on `L^2(R)` for
/// rational `beta = p/q`, via the minimal-norm Wexler-Raz solution on the
/// adjoint lattice. Returns the dual sampled on
/// `[-half_width, half_width]` with step `grid_step`.
///
/// Errors with [`Error::NotAFrame`] when the minimal eigenvalue of the
/// normalized adjoint-lattice Gram matrix falls below `tol`.
pub fn dual_window(
    g: &Window,
    beta_p: u32,
    beta_q: u32,
    grid_step: f64,
    half_width: f64,
    tol: f64,
) -> Result<SampledWindow> {
    if beta_p == 0 || beta_q == 0 {
        return Err(Error::Invalid(
            "dual_window: beta must be a positive rational p/q".into(),
        ));
    }
    if !(grid_step > 0.0) || !(half_width > 0.0) {
        return Err(Error::Invalid(
            "dual_window: grid parameters must be positive".into(),
        ));
    }
    let beta = beta_p as f64 / beta_q as f64;
    let decay = g.decay_required("dual_window")?;
    // Atom index radius: inverse-Gram coefficients decay exponentially; 12
    // covers duals to ~1e-12 for moderate beta (scaled for sparse lattices).
    let radius: i64 = (12.0f64.max(8.0 * beta).ceil()) as i64;
    let side = (2 * radius + 1) as usize;
    let dim = side * side;
    // Gram entries depend on (k - k', n - n') and the phase on (n + n').
    let mut v_cache =
        vec![Complex64::new(0.0, 0.0); (4 * radius + 1) as usize * (4 * radius + 1) as usize];
    let vc_side = (4 * radius + 1) as usize;
    let v_entries: Vec<((usize, usize), Complex64)> = (-2 * radius..=2 * radius)
        .flat_map(|dk| (-2 * radius..=2 * radius).map(move |dn| (dk, dn)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(dk, dn)| {
            let idx = ((dk + 2 * radius) as usize, (dn + 2 * radius) as usize);
            let val = atom_bracket(g, decay, dk, dn as f64 / beta, 0.0);
            (idx, val)
        })
        .collect();
    for ((i, j), v) in v_entries {
        v_cache[i * vc_side + j] = v;
    }
    let bracket = |k: i64, n: i64, kp: i64, np: i64| -> Complex64 {
        let dk = k - kp;
        let dn = np - n; // Delta = d - b = (np - n)/beta
        let v = v_cache[(dk + 2 * radius) as usize * vc_side + (dn + 2 * radius) as usize];
        Complex64::new(0.0, PI * dk as f64 * (n + np) as f64 / beta).exp() * v
    };
    let mut gram = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let flat: Vec<(i64, i64)> = (-radius..=radius)
        .flat_map(|k| (-radius..=radius).map(move |n| (k, n)))
        .collect();
    for (i, &(k, n)) in flat.iter().enumerate() {
        for (j, &(kp, np)) in flat.iter().enumerate() {
            gram[(i, j)] = bracket(k, n, kp, np);
        }
    }
    // Coarse frame check: min eigenvalue of beta^{-1} Gram approximates the
    // lower frame bound (duality of the adjoint-lattice Riesz bounds).
    let eig = gram.clone().symmetric_eigen();
    let min_eig = eig.eigenvalues.iter().fold(f64::INFINITY, |a, b| a.min(*b)) / beta;
    if min_eig < tol {
        return Err(Error::NotAFrame {
            min_singular: min_eig,
        });
    }
    let mut rhs = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    let center = flat.iter().position(|&(k, n)| k == 0 && n == 0).unwrap();
    rhs[center] = Complex64::new(beta, 0.0);
    let sol = gram
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Invalid("dual_window: Gram solve failed".into()))?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
    for (i, &(k, n)) in flat.iter().enumerate() {
        coeffs[(k + radius) as usize * side + (n + radius) as usize] = sol[i];
    }
    // Effective decay of the dual: Gaussian envelope fitted on the atoms.
    let amp_scale: f64 = sol.iter().map(|c| c.norm()).sum::<f64>().max(1.0);
    let dual_decay = DecayBound {
        amplitude: decay.amplitude * amp_scale,
        rate: decay.rate / 2.0,
    };
    let mut sw = SampledWindow {
        base: g.clone(),
        beta,
        radius,
        coeffs,
        grid_step,
        half_width,
        grid: Vec::new(),
        min_gram_eigenvalue: min_eig,
        decay: dual_decay,
    };
    let steps = (2.0 * half_width / grid_step).round() as usize;
    sw.grid = (0..=steps)
        .into_par_iter()
        .map(|i| sw.eval_exact(-half_width + i as f64 * grid_step))
        .collect();
    Ok(sw)
}

/// Synthesis `sum_n c_n Sigma_nu(M_{beta n} gamma)` in coefficient space:
/// `a_m = sum_n c_n conj(F(conj gamma)(beta n - nu - m))`.
pub fn reconstruct(
    spec: &FrameSpec,
    samples: &[(i64, Complex64)],
    gamma: &SampledWindow,
) -> Result<QPSignal> {
    let k_max = spec.modes as i64;
    let entries: Vec<(i64, Complex64)> = (-k_max..=k_max)
        .into_par_iter()
        .map(|m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(n, c) in samples {
                acc += c * gamma
                    .ft_conj(spec.beta * n as f64 - spec.nu - m as f64)
                    .conj();
            }
            (m, acc)
        })
        .collect();
    QPSignal::new(spec.nu, &entries)
}

/// Frame verdicts for the sufficient-condition predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Frame,
    NotFrame,
    Unknown,
}

/// Sufficient/characterizing conditions for `G_nu(g, i beta Z)`:
/// Gaussian windows are a frame exactly when `beta < 1` (density
/// characterization); Hermite windows of order `r` are a frame when
/// `beta < 1/(r+1)` (sufficient only); totally positive windows with rational
/// `beta < 1` are a frame (sufficient only).
pub fn sufficient_frame_predicate(kind: &WindowKind, beta: f64) -> (Verdict, String) {
    match kind {
        WindowKind::Gaussian => {
            if beta < 1.0 {
                (
                    Verdict::Frame,
                    "gaussian window: frame iff beta < 1 (lattice density 1/beta > 1)".into(),
                )
            } else {
                (
                    Verdict::NotFrame,
                    "gaussian window: frame iff beta < 1; density at or below critical".into(),
                )
            }
        }
        WindowKind::Hermite(r) => {
            let bound = 1.0 / (*r as f64 + 1.0);
            if beta < bound {
                (
                    Verdict::Frame,
                    format!(
                        "hermite({r}) window: sufficient condition beta < 1/(r+1) = {bound:.6}"
                    ),
                )
            } else {
                (
                    Verdict::Unknown,
                    format!("hermite({r}) window: outside the sufficient region beta < {bound:.6}"),
                )
            }
        }
        WindowKind::TotallyPositive(_) => {
            if beta < 1.0 && is_rational(beta) {
                (
                    Verdict::Frame,
                    "totally positive window: sufficient condition rational beta < 1".into(),
                )
            } else {
                (
                    Verdict::Unknown,
                    "totally positive window: sufficiency known only for rational beta < 1".into(),
                )
            }
        }
        WindowKind::Custom => (
            Verdict::Unknown,
            "custom window: no applicable criterion".into(),
        ),
    }
}

fn is_rational(beta: f64) -> bool {
    for q in 1..=64u32 {
        let p = beta * q as f64;
        if (p - p.round()).abs() < 1e-9 && p.round() >= 1.0 {
            return true;
        }
    }
    false
}

/// Walnut-form application of the frame operator,
/// `S f = beta^{-1} sum_n G_n T_{n/beta} f`, computed from pointwise
/// correlation-function samples (trapezoid Fourier coefficients of `G_n`).
/// Independent verification route for [`frame_apply`].
pub fn walnut_apply(
    g: &AnalysisFn,
    gamma: &AnalysisFn,
    beta: f64,
    f: &QPSignal,
    n_range: i64,
    j_range: i64,
    modes: i64,
    pol: &TruncationPolicy,
) -> Result<QPSignal> {
    let nu = f.nu();
    let mesh = (4 * j_range as usize + 8).next_power_of_two();
    let mut out: std::collections::BTreeMap<i64, Complex64> = Default::default();
    for n in -n_range..=n_range {
        // Fourier coefficients of G_n by the periodic trapezoid rule.
        let samples: Vec<Complex64> = (0..mesh)
            .map(|i| correlation_fn(g, gamma, beta, n, i as f64 / mesh as f64, pol))
            .collect::<Result<Vec<_>>>()?;
        for j in -j_range..=j_range {
            let mut cj = Complex64::new(0.0, 0.0);
            for (i, s) in samples.iter().enumerate() {
                cj += s * Complex64::new(0.0, -2.0 * PI * j as f64 * i as f64 / mesh as f64).exp();
            }
            cj /= mesh as f64;
            // G_n's mode j times T_{n/beta} f contributes to out[m + j].
            for (&m, &a) in f.coeffs() {
                let shifted =
                    a * Complex64::new(0.0, -2.0 * PI * (n as f64 / beta) * (nu + m as f64)).exp();
                let target = m + j;
                if target.abs() <= modes {
                    *out.entry(target).or_insert(Complex64::new(0.0, 0.0)) += cj * shifted / beta;
                }
            }
        }
    }
    let entries: Vec<(i64, Complex64)> = out.into_iter().collect();
    QPSignal::new(nu, &entries)
}

/// Janssen-form application of the frame operator,
/// `S f = beta^{-1} sum_{k,n} <gamma, M_k T_{n/beta} g> M_k T_{n/beta} f`,
/// with brackets from time-domain quadrature. Independent verification route
/// for [`frame_apply`].
pub fn janssen_apply(
    g: &AnalysisFn,
    gamma: &AnalysisFn,
    beta: f64,
    f: &QPSignal,
    n_range: i64,
    k_range: i64,
    modes: i64,
    tol: f64,
) -> Result<QPSignal> {
    let nu = f.nu();
    let mut out: std::collections::BTreeMap<i64, Complex64> = Default::default();
    for n in -n_range..=n_range {
        for k in -k_range..=k_range {
            let c = janssen_coeffs(g, gamma, beta, k, n, tol)?;
            for (&m, &a) in f.coeffs() {
                let shifted =
                    a * Complex64::new(0.0, -2.0 * PI * (n as f64 / beta) * (nu + m as f64)).exp();
                let target = m + k;
                if target.abs() <= modes {
                    *out.entry(target).or_insert(Complex64::new(0.0, 0.0)) += c * shifted / beta;
                }
            }
        }
    }
    let entries: Vec<(i64, Complex64)> = out.into_iter().collect();
    QPSignal::new(nu, &entries)
}

/// `<f, Sigma_nu(pi(z) g)>` by quadrature over one period: the sampling
/// identity route to `V_g f(z)`.
pub fn sampled_bracket_quadrature(
    f: &QPSignal,
    g: &Window,
    z: crate::stft::CylinderPoint,
    nu: f64,
    pol: &TruncationPolicy,
) -> Result<Complex64> {
    let fcl = f.clone();
    let gcl = g.clone();
    Ok(integrate_panels(
        move |t| {
            let per = crate::signal::periodize_shift(&gcl, z, nu, t, pol).unwrap();
            fcl.eval(t) * per.conj()
        },
        0.0,
        1.0,
        16,
        12,
    ))
}
