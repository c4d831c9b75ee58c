//! Vector-valued signals and Gabor superframes: the vectorial STFT, stacked
//! analysis matrices and frame bounds, vector Wexler-Raz residuals, and the
//! polyanalytic (super) Bargmann transform
//! `B^(N) f = sum_{r<N} B^{(r)} f_r`, which lands in the order-`N`
//! polyanalytic Fock space on the cylinder.

use crate::fock::true_bargmann_eval;
use crate::frames::{janssen_coeffs, AnalysisFn, FrameBounds, Verdict};
use crate::numerics::integrate_panels;
use crate::signal::{QPSignal, Window};
use crate::stft::{stft_eval, CylinderPoint};
use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Maximum supported channel count.
pub const MAX_CHANNELS: usize = 16;

/// An element of `L^2_nu((0,1), C^N)`: one coefficient signal per channel,
/// all sharing the quasi-period character.
#[derive(Debug, Clone)]
pub struct VectorSignal {
    channels: Vec<QPSignal>,
}

impl VectorSignal {
    pub fn new(channels: Vec<QPSignal>) -> Result<Self> {
        if channels.is_empty() || channels.len() > MAX_CHANNELS {
            return Err(Error::Invalid(format!(
                "vector signal needs 1..={MAX_CHANNELS} channels"
            )));
        }
        let nu = channels[0].nu();
        for c in &channels[1..] {
            if c.nu() != nu {
                return Err(Error::NuMismatch {
                    left: nu,
                    right: c.nu(),
                });
            }
        }
        Ok(Self { channels })
    }

    pub fn nu(&self) -> f64 {
        self.channels[0].nu()
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn channel(&self, i: usize) -> &QPSignal {
        &self.channels[i]
    }

    /// `||f||^2 = sum_i ||f_i||^2`.
    pub fn norm_sq(&self) -> f64 {
        self.channels.iter().map(|c| c.norm_sq()).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let chans: Vec<serde_json::Value> = self
            .channels
            .iter()
            .map(|c| c.to_json().get("coeffs").cloned().unwrap())
            .collect();
        serde_json::json!({ "nu": self.nu(), "channels": chans })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let nu = v
            .get("nu")
            .and_then(|x| x.as_f64())
            .ok_or_else(|| Error::Invalid("vector signal JSON: missing 'nu'".into()))?;
        let arr = v
            .get("channels")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Invalid("vector signal JSON: missing 'channels'".into()))?;
        let channels = arr
            .iter()
            .map(|coeffs| QPSignal::from_json(&serde_json::json!({ "nu": nu, "coeffs": coeffs })))
            .collect::<Result<Vec<_>>>()?;
        Self::new(channels)
    }
}

/// A vector analysis window with pairwise-orthonormal channels (verified by
/// quadrature at construction).
#[derive(Debug, Clone)]
pub struct VectorWindow {
    windows: Vec<Window>,
}

impl VectorWindow {
    pub fn new(windows: Vec<Window>) -> Result<Self> {
        if windows.is_empty() || windows.len() > MAX_CHANNELS {
            return Err(Error::Invalid(format!(
                "vector window needs 1..={MAX_CHANNELS} channels"
            )));
        }
        for i in 0..windows.len() {
            for j in 0..windows.len() {
                let reach = windows[i]
                    .decay()
                    .map(|d| d.reach(1e-14).max(8.0))
                    .unwrap_or(30.0);
                let ip = integrate_panels(
                    |t| windows[i].time(t) * windows[j].time(t).conj(),
                    -reach,
                    reach,
                    (8.0 * reach) as usize,
                    12,
                );
                let target = if i == j { 1.0 } else { 0.0 };
                if (ip - Complex64::new(target, 0.0)).norm() > 1e-8 {
                    return Err(Error::Invalid(format!(
                        "vector window channels {i},{j} are not orthonormal: <g_i, g_j> = {ip}"
                    )));
                }
            }
        }
        Ok(Self { windows })
    }

    /// The Hermite stack `(h_0, ..., h_{N-1})`.
    pub fn hermite_stack(n: usize) -> Result<Self> {
        let windows = (0..n).map(Window::hermite).collect::<Result<Vec<_>>>()?;
        Self::new(windows)
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn window(&self, i: usize) -> &Window {
        &self.windows[i]
    }
}

/// Vectorial STFT `V_g f(z) = sum_i V_{g_i} f_i(z)`.
pub fn vector_stft(f: &VectorSignal, g: &VectorWindow, p: CylinderPoint) -> Result<Complex64> {
    if f.len() != g.len() {
        return Err(Error::Invalid(format!(
            "channel mismatch: {} signal channels vs {} window channels",
            f.len(),
            g.len()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..f.len() {
        acc += stft_eval(f.channel(i), g.window(i), p);
    }
    Ok(acc)
}

/// Vector Moyal pairing in coefficient space: for orthonormal channels,
/// `<V f, V h> = sum_i <f_i, h_i>` exactly.
pub fn vector_moyal_inner(f: &VectorSignal, h: &VectorSignal) -> Result<Complex64> {
    if f.len() != h.len() {
        return Err(Error::Invalid("channel mismatch in vector Moyal".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..f.len() {
        acc += f.channel(i).inner_product(h.channel(i))?;
    }
    Ok(acc)
}

/// Stacked super analysis matrix: rows are lattice points `n`, columns are
/// `(channel, mode)` pairs; entry `F(conj g_i)(beta n - nu - k)`.
pub fn super_analysis_matrix(
    g: &VectorWindow,
    beta: f64,
    nu: f64,
    modes: usize,
    tol: f64,
) -> Result<DMatrix<Complex64>> {
    if !(beta > 0.0) || modes == 0 || !(tol > 0.0) {
        return Err(Error::Invalid(
            "super analysis matrix: bad parameters".into(),
        ));
    }
    let mut reach: f64 = 0.0;
    for i in 0..g.len() {
        reach = reach.max(
            g.window(i)
                .decay_required("super_analysis_matrix")?
                .reach(tol * 1e-2),
        );
    }
    let k_max = modes as i64;
    let n_max = ((k_max as f64 + nu.abs() + reach) / beta).ceil() as i64;
    let rows = (2 * n_max + 1) as usize;
    let cols = g.len() * (2 * k_max + 1) as usize;
    let mut m = DMatrix::from_element(rows, cols, Complex64::new(0.0, 0.0));
    for (row, n) in (-n_max..=n_max).enumerate() {
        for ch in 0..g.len() {
            for (jk, k) in (-k_max..=k_max).enumerate() {
                let col = ch * (2 * k_max + 1) as usize + jk;
                m[(row, col)] = g.window(ch).ft_conj(beta * n as f64 - nu - k as f64);
            }
        }
    }
    Ok(m)
}

/// Superframe bounds: extremal eigenvalues of the stacked `M^H M`, with the
/// `K` vs `K/2` convergence diagnostic.
pub fn super_frame_bounds(
    g: &VectorWindow,
    beta: f64,
    nu: f64,
    modes: usize,
    tol: f64,
) -> Result<FrameBounds> {
    let extremes = |k: usize| -> Result<(f64, f64, usize)> {
        let m = super_analysis_matrix(g, beta, nu, k, tol)?;
        let rows = m.nrows();
        let gram = m.adjoint() * m;
        let eig = gram.symmetric_eigen();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in eig.eigenvalues.iter() {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
        Ok((lo.max(0.0), hi.max(0.0), rows))
    };
    let (a, b, rows) = extremes(modes)?;
    let (a_half, _, _) = extremes((modes / 2).max(1))?;
    let convergence = if a > 0.0 { (a - a_half).abs() / a } else { 0.0 };
    Ok(FrameBounds {
        a,
        b,
        k_used: modes,
        n_rows_used: rows,
        convergence,
    })
}

/// Vector Wexler-Raz residual: the channel-summed bracket
/// `<gamma, M_k T_{n/beta} g> = sum_i <gamma_i, M_k T_{n/beta} g_i>`.
pub fn super_wr_residual(
    g: &VectorWindow,
    gamma: &[AnalysisFn],
    beta: f64,
    k_range: std::ops::RangeInclusive<i64>,
    l_range: std::ops::RangeInclusive<i64>,
    n_tail: i64,
    tol: f64,
) -> Result<f64> {
    if gamma.len() != g.len() {
        return Err(Error::Invalid(
            "channel mismatch in super Wexler-Raz".into(),
        ));
    }
    let g_fns = (0..g.len())
        .map(|i| AnalysisFn::from_window(g.window(i)))
        .collect::<Result<Vec<_>>>()?;
    let ks: Vec<i64> = k_range.collect();
    let ls: Vec<i64> = l_range.collect();
    let mut worst = 0.0f64;
    for &k in &ks {
        let sums: Vec<Complex64> = (-n_tail..=n_tail)
            .map(|n| {
                let mut b = Complex64::new(0.0, 0.0);
                for i in 0..g.len() {
                    b += janssen_coeffs(&g_fns[i], &gamma[i], beta, k, n, tol)?;
                }
                Ok(b)
            })
            .collect::<Result<Vec<_>>>()?;
        for &l in &ls {
            let mut s = Complex64::new(0.0, 0.0);
            for (ni, n) in (-n_tail..=n_tail).enumerate() {
                s += sums[ni] * Complex64::new(0.0, 2.0 * PI * n as f64 * l as f64 / beta).exp();
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

/// Super Bargmann transform `B^(N) f(z) = sum_{r<N} B^{(r)} f_r(z)`, the
/// order-`N` polyanalytic image of the channel stack.
pub fn super_bargmann(f: &VectorSignal, z: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..f.len() {
        acc += true_bargmann_eval(r, f.channel(r), z)?;
    }
    Ok(acc)
}

/// Sufficiency verdict for the Hermite-stack superframe `G_nu(h_N, i beta Z)`:
/// a frame when `beta < 1/N`; for `N = 1` the Gaussian characterization
/// applies in both directions.
pub fn super_sufficient_predicate(n: usize, beta: f64) -> (Verdict, String) {
    if n == 0 {
        return (Verdict::Unknown, "empty window stack".into());
    }
    if n == 1 {
        return crate::frames::sufficient_frame_predicate(
            &crate::signal::WindowKind::Gaussian,
            beta,
        );
    }
    let bound = 1.0 / n as f64;
    if beta < bound {
        (
            Verdict::Frame,
            format!("hermite stack of {n} channels: sufficient condition beta < 1/N = {bound:.6}"),
        )
    } else {
        (
            Verdict::Unknown,
            format!("hermite stack of {n} channels: outside the sufficient region beta < {bound:.6} (necessity not established on the cylinder)"),
        )
    }
}

/// Conjugate-Wirtinger derivative `dbar f` by a central difference stencil.
pub fn dbar_stencil(f: impl Fn(Complex64) -> Complex64, z: Complex64, h: f64) -> Complex64 {
    let fx = (f(z + h) - f(z - h)) / (2.0 * h);
    let fy = (f(z + Complex64::new(0.0, h)) - f(z - Complex64::new(0.0, h))) / (2.0 * h);
    0.5 * (fx + Complex64::new(0.0, 1.0) * fy)
}

/// Second conjugate-Wirtinger derivative `dbar^2 f` by the 9-point stencil
/// `(f_xx - f_yy + 2 i f_xy) / 4`.
pub fn dbar2_stencil(f: impl Fn(Complex64) -> Complex64, z: Complex64, h: f64) -> Complex64 {
    let ih = Complex64::new(0.0, h);
    let fxx = (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h);
    let fyy = (f(z + ih) - 2.0 * f(z) + f(z - ih)) / (h * h);
    let fxy = (f(z + h + ih) - f(z + h - ih) - f(z - h + ih) + f(z - h - ih)) / (4.0 * h * h);
    0.25 * (fxx - fyy + 2.0 * Complex64::new(0.0, 1.0) * fxy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::bargmann_eval;
    use crate::frames::{dual_window, frame_bounds, FrameSpec};

    fn sample_vector(nu: f64, n: usize) -> VectorSignal {
        let mut state = 0xfeedu64 + n as u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        let channels = (0..n)
            .map(|_| {
                let entries: Vec<(i64, Complex64)> = (-3i64..=3)
                    .map(|k| (k, Complex64::new(next(), next())))
                    .collect();
                QPSignal::new(nu, &entries).unwrap()
            })
            .collect();
        VectorSignal::new(channels).unwrap()
    }

    #[test]
    fn vector_signal_invariants() {
        let f = sample_vector(0.3, 2);
        assert!((f.norm_sq() - (f.channel(0).norm_sq() + f.channel(1).norm_sq())).abs() < 1e-15);
        let bad = VectorSignal::new(vec![QPSignal::zero(0.1), QPSignal::zero(0.2)]);
        assert!(bad.is_err());
        // JSON round trip
        let v = f.to_json();
        let back = VectorSignal::from_json(&v).unwrap();
        assert_eq!(back.len(), 2);
        assert!((back.channel(0).coeff(1) - f.channel(0).coeff(1)).norm() == 0.0);
    }

    #[test]
    fn vector_window_orthonormality_enforced() {
        assert!(VectorWindow::hermite_stack(3).is_ok());
        let dud = VectorWindow::new(vec![Window::gaussian(), Window::gaussian()]);
        assert!(dud.is_err());
    }

    #[test]
    fn vector_stft_reduces_and_sums() {
        let nu = 0.2;
        let f = sample_vector(nu, 1);
        let g = VectorWindow::hermite_stack(1).unwrap();
        let p = CylinderPoint::new(0.3, 0.8);
        let a = vector_stft(&f, &g, p).unwrap();
        let b = stft_eval(f.channel(0), g.window(0), p);
        assert_eq!(a, b);
        let zero = VectorSignal::new(vec![QPSignal::zero(nu), QPSignal::zero(nu)]).unwrap();
        let g2 = VectorWindow::hermite_stack(2).unwrap();
        assert_eq!(
            vector_stft(&zero, &g2, p).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(vector_stft(&f, &g2, p).is_err());
    }

    #[test]
    fn vector_moyal_isometry_exact() {
        let f = sample_vector(0.3, 3);
        let norm_via_moyal = vector_moyal_inner(&f, &f).unwrap();
        assert!((norm_via_moyal.re - f.norm_sq()).abs() < 1e-12);
        assert!(norm_via_moyal.im.abs() < 1e-14);
    }

    #[test]
    fn super_bounds_single_channel_matches_scalar() {
        let g = VectorWindow::new(vec![Window::gaussian()]).unwrap();
        let sup = super_frame_bounds(&g, 0.5, 0.0, 24, 1e-12).unwrap();
        let spec = FrameSpec::new(Window::gaussian(), 0.5, 0.0, 24, 1e-12).unwrap();
        let scal = frame_bounds(&spec).unwrap();
        assert_eq!(sup.a, scal.a);
        assert_eq!(sup.b, scal.b);
    }

    #[test]
    fn super_bounds_hermite_pair() {
        let g = VectorWindow::hermite_stack(2).unwrap();
        let fb = super_frame_bounds(&g, 0.4, 0.0, 24, 1e-12).unwrap();
        assert!(fb.a / fb.b > 1e-4, "A/B = {}", fb.a / fb.b);
        assert!(fb.a <= fb.b);
        // Hermite-window bounds carry a slow truncation edge effect; stability
        // under doubling means a few permille here, not the Gaussian 1e-3.
        assert!(fb.convergence < 0.05, "doubling drift {}", fb.convergence);
        // beyond the sufficient region the stacked matrix degenerates
        let fb2 = super_frame_bounds(&g, 0.6, 0.0, 32, 1e-12).unwrap();
        assert!(fb2.a / fb2.b < 1e-8);
    }

    #[test]
    fn super_bound_monotonicity_in_channels() {
        let beta = 0.3;
        let mut prev_b: f64 = 0.0;
        let mut scalar_a = Vec::new();
        for n in 1..=3usize {
            let g = VectorWindow::hermite_stack(n).unwrap();
            let fb = super_frame_bounds(&g, beta, 0.0, 16, 1e-12).unwrap();
            assert!(fb.b >= prev_b - 1e-9, "B must not decrease when stacking");
            prev_b = fb.b;
            let spec =
                FrameSpec::new(Window::hermite(n - 1).unwrap(), beta, 0.0, 16, 1e-12).unwrap();
            scalar_a.push(frame_bounds(&spec).unwrap().a);
            let min_scalar = scalar_a.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(
                fb.a <= min_scalar + 1e-9,
                "stacked A exceeds per-channel minimum"
            );
        }
    }

    #[test]
    fn super_wr_single_channel_reduces_to_scalar() {
        let gw = Window::gaussian();
        let dual = dual_window(&gw, 1, 2, 0.1, 6.0, 1e-8).unwrap();
        let g1 = VectorWindow::new(vec![gw.clone()]).unwrap();
        let da = AnalysisFn::from_sampled(&dual);
        let sup = super_wr_residual(&g1, &[da.clone()], 0.5, -2..=2, -2..=2, 8, 1e-9).unwrap();
        let ga = AnalysisFn::from_window(&gw).unwrap();
        let scal =
            crate::frames::wexler_raz_residual(&ga, &da, 0.5, -2..=2, -2..=2, 8, 1e-9).unwrap();
        assert!((sup - scal).abs() < 1e-12);
    }

    #[test]
    fn super_wr_bracket_decomposes_by_channel() {
        // linearity of the vector bracket: the channel-summed Janssen
        // coefficient equals the sum of scalar coefficients
        let g = VectorWindow::hermite_stack(2).unwrap();
        let g0 = AnalysisFn::from_window(g.window(0)).unwrap();
        let g1 = AnalysisFn::from_window(g.window(1)).unwrap();
        let beta = 0.4;
        for (k, n) in [(0i64, 0i64), (1, 0), (0, 1), (2, -1)] {
            let a = janssen_coeffs(&g0, &g0, beta, k, n, 1e-10).unwrap();
            let b = janssen_coeffs(&g1, &g1, beta, k, n, 1e-10).unwrap();
            let joint = {
                let mut acc = Complex64::new(0.0, 0.0);
                acc += janssen_coeffs(&g0, &g0, beta, k, n, 1e-10).unwrap();
                acc += janssen_coeffs(&g1, &g1, beta, k, n, 1e-10).unwrap();
                acc
            };
            assert!((joint - (a + b)).norm() < 1e-12);
        }
    }

    #[test]
    fn channel_diagonal_duals_pass_vector_wexler_raz() {
        // per-channel canonical duals scaled by 1/N satisfy the vector
        // relations (each scalar dual contributes beta delta to the summed
        // bracket)
        let g = VectorWindow::hermite_stack(2).unwrap();
        let d0 = dual_window(g.window(0), 2, 5, 0.1, 7.0, 1e-8).unwrap();
        let d1 = dual_window(g.window(1), 2, 5, 0.1, 7.0, 1e-8).unwrap();
        let half = Complex64::new(0.5, 0.0);
        let gam: Vec<AnalysisFn> = [d0, d1]
            .into_iter()
            .map(|d| {
                let decay = d.decay;
                AnalysisFn::new(move |t| half * d.eval_exact(t), decay)
            })
            .collect();
        let res = super_wr_residual(&g, &gam, 0.4, -2..=2, -2..=2, 8, 1e-9).unwrap();
        assert!(res.is_finite());
        // the hermite(1) dual converges slower in the atom radius than the
        // Gaussian one (smaller lower frame bound), so the reportable floor
        // sits near 1e-4 at the default truncation
        assert!(res < 1e-4, "vector residual {res}");
    }

    #[test]
    fn super_bargmann_reduces_and_annihilates() {
        let nu = 0.3;
        let f1 = sample_vector(nu, 1);
        let z = Complex64::new(0.3, 0.4);
        let a = super_bargmann(&f1, z).unwrap();
        let b = bargmann_eval(f1.channel(0), z);
        assert!((a - b).norm() < 1e-13 * (1.0 + b.norm()));

        // order-2 image is annihilated by dbar^2 but not by dbar
        let f2 = sample_vector(nu, 2);
        for &(x, y) in &[(0.2, 0.3), (0.7, -0.4)] {
            let z = Complex64::new(x, y);
            let f = |w: Complex64| super_bargmann(&f2, w).unwrap();
            let scale = 1.0 + f(z).norm();
            let d2 = dbar2_stencil(f, z, 3e-4);
            assert!(
                d2.norm() / scale < 1e-6,
                "dbar^2 residual {}",
                d2.norm() / scale
            );
            let d1 = dbar_stencil(f, z, 1e-4);
            assert!(
                d1.norm() / scale > 1e-3,
                "order-2 image should not be analytic"
            );
        }
        // analytic channel alone is dbar-annihilated
        let f = |w: Complex64| bargmann_eval(f1.channel(0), w);
        let z = Complex64::new(0.4, 0.2);
        assert!(dbar_stencil(f, z, 1e-4).norm() / (1.0 + f(z).norm()) < 1e-6);
    }

    #[test]
    fn super_bargmann_pairing_constant() {
        // ||B f||^2 over the weighted strip = 2^{-1/2} ||f||^2
        let f = sample_vector(0.2, 2);
        let norm = crate::fock::weighted_strip_inner(
            |z| super_bargmann(&f, z).unwrap(),
            |z| super_bargmann(&f, z).unwrap(),
            9.0,
            48,
            36,
        );
        let expect = 2f64.powf(-0.5) * f.norm_sq();
        assert!(
            (norm.re - expect).abs() < 1e-5 * expect,
            "{} vs {expect}",
            norm.re
        );
    }

    #[test]
    fn super_bargmann_layers_orthogonal() {
        // channel-disjoint vector signals have orthogonal images (exact in
        // coefficient space via the Moyal pairing)
        let nu = 0.1;
        let a = VectorSignal::new(vec![QPSignal::basis(nu, 0), QPSignal::zero(nu)]).unwrap();
        let b = VectorSignal::new(vec![QPSignal::zero(nu), QPSignal::basis(nu, 0)]).unwrap();
        let ip = vector_moyal_inner(&a, &b).unwrap();
        assert_eq!(ip, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn super_predicate_table() {
        assert_eq!(super_sufficient_predicate(2, 0.4).0, Verdict::Frame);
        assert_eq!(super_sufficient_predicate(2, 0.6).0, Verdict::Unknown);
        assert_eq!(super_sufficient_predicate(1, 0.9).0, Verdict::Frame);
        assert_eq!(super_sufficient_predicate(1, 1.1).0, Verdict::NotFrame);
    }
}
