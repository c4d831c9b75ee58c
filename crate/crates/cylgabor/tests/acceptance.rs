//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with its measured value and runtime. Tolerances are pinned in code.

use cylgabor::fock::{fock_kernel_poly, fock_kernel_true};
use cylgabor::frames::{
    dual_window, frame_bounds, reconstruct, wexler_raz_residual, AnalysisFn, FrameSpec,
};
use cylgabor::sampling::{
    beurling_density, interpolate_true, sample_reconstruct, NodeSet, PointSet,
};
use cylgabor::signal::{QPSignal, Window};
use cylgabor::special::{laguerre, TruncationPolicy};
use cylgabor::stft::{moyal_inner, stft_eval, CylinderPoint};
use cylgabor::superframe::{super_frame_bounds, vector_moyal_inner, VectorSignal, VectorWindow};
use cylgabor::verify::{
    bargmann_functional_equation_residual, basis_gram_deviation, moyal_quadrature, run_all, Stream,
};
use num_complex::Complex64;
use std::time::Instant;

const POL: TruncationPolicy = TruncationPolicy {
    abs_tol: 1e-12,
    max_terms: 512,
};

struct Criterion {
    number: usize,
    what: &'static str,
    start: Instant,
    budget_secs: f64,
}

impl Criterion {
    fn begin(number: usize, what: &'static str, budget_secs: f64) -> Self {
        Self {
            number,
            what,
            start: Instant::now(),
            budget_secs,
        }
    }

    fn finish(self, measured: f64, tolerance: f64) {
        let elapsed = self.start.elapsed().as_secs_f64();
        let ok = measured <= tolerance && elapsed <= self.budget_secs;
        println!(
            "[{}] criterion {:>2}: {} (measured {measured:.3e} vs tolerance {tolerance:.1e}, {elapsed:.1}s of {:.0}s budget)",
            if ok { "PASS" } else { "FAIL" },
            self.number,
            self.what,
            self.budget_secs,
        );
        assert!(
            measured <= tolerance,
            "criterion {}: measured {measured:.6e} exceeds tolerance {tolerance:.1e}",
            self.number
        );
        assert!(
            elapsed <= self.budget_secs,
            "criterion {}: runtime {elapsed:.1}s exceeds budget {:.0}s",
            self.number,
            self.budget_secs
        );
    }
}

#[test]
fn criterion_01_basis_orthonormality() {
    let c = Criterion::begin(
        1,
        "quadrature Gram of the STFT basis images is the identity",
        60.0,
    );
    let mut worst = 0.0f64;
    for g in [
        Window::gaussian(),
        Window::hermite(1).unwrap(),
        Window::hermite(2).unwrap(),
    ] {
        for nu in [0.0, 0.3] {
            worst = worst.max(basis_gram_deviation(&g, nu, 16, 8.0));
        }
    }
    c.finish(worst, 1e-6);
}

#[test]
fn criterion_02_moyal_isometry() {
    let c = Criterion::begin(
        2,
        "Moyal identity: exact in coefficients, 1e-6 by quadrature",
        120.0,
    );
    let g = Window::gaussian();
    let mut rng = Stream::new(0xac2);
    let mut worst_exact = 0.0f64;
    for _ in 0..100 {
        let nu = 0.5 * rng.sym();
        let f1 = rng.signal(nu, 6);
        let f2 = rng.signal(nu, 6);
        let lhs = moyal_inner(&f1, &f2, &g, &g).unwrap();
        let rhs = f1.inner_product(&f2).unwrap();
        worst_exact = worst_exact.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
    }
    assert!(
        worst_exact <= 1e-12,
        "coefficient-space Moyal residual {worst_exact:.3e}"
    );
    let mut worst_quad = 0.0f64;
    for _ in 0..10 {
        let nu = 0.4 * rng.sym();
        let f1 = rng.signal(nu, 3);
        let f2 = rng.signal(nu, 3);
        let quad = moyal_quadrature(&f1, &f2, &g, 14.0);
        let exact = f1.inner_product(&f2).unwrap();
        worst_quad = worst_quad.max((quad - exact).norm() / (1.0 + exact.norm()));
    }
    c.finish(worst_quad, 1e-6);
}

#[test]
fn criterion_03_gaussian_frame_threshold() {
    let c = Criterion::begin(
        3,
        "Gaussian bounds: stable A/B > 0.05 at beta=0.5, collapse at 1.25",
        120.0,
    );
    let mut bounds = Vec::new();
    for modes in [32usize, 64, 128] {
        let spec = FrameSpec::new(Window::gaussian(), 0.5, 0.0, modes, 1e-12).unwrap();
        bounds.push(frame_bounds(&spec).unwrap());
    }
    let last = bounds[2];
    let prev = bounds[1];
    let drift = (last.a - prev.a).abs() / last.a;
    assert!(drift < 1e-3, "A drift at the last doubling: {drift:.3e}");
    assert!(last.a / last.b > 0.05, "A/B = {}", last.a / last.b);
    let spec = FrameSpec::new(Window::gaussian(), 1.25, 0.0, 128, 1e-12).unwrap();
    let super_crit = frame_bounds(&spec).unwrap();
    c.finish(super_crit.a / super_crit.b, 1e-6);
}

#[test]
fn criterion_04_hermite_sufficiency() {
    let c = Criterion::begin(
        4,
        "Hermite(1) bounds at beta=0.4: A/B > 1e-4, stable under doubling",
        120.0,
    );
    let spec32 = FrameSpec::new(Window::hermite(1).unwrap(), 0.4, 0.0, 32, 1e-12).unwrap();
    let spec64 = FrameSpec::new(Window::hermite(1).unwrap(), 0.4, 0.0, 64, 1e-12).unwrap();
    let fb32 = frame_bounds(&spec32).unwrap();
    let fb64 = frame_bounds(&spec64).unwrap();
    let drift = (fb64.a - fb32.a).abs() / fb64.a;
    assert!(drift < 0.05, "A drift under doubling: {drift:.3e}");
    let ratio = fb64.a / fb64.b;
    // report the margin by which A/B clears 1e-4
    c.finish(if ratio > 1e-4 { 0.0 } else { 1.0 }, 0.5);
}

#[test]
fn criterion_05_wexler_raz_end_to_end() {
    let c = Criterion::begin(
        5,
        "Wexler-Raz residual of the canonical Gaussian dual at beta=1/2",
        60.0,
    );
    let g = Window::gaussian();
    let dual = dual_window(&g, 1, 2, 0.05, 8.0, 1e-8).unwrap();
    let ga = AnalysisFn::from_window(&g).unwrap();
    let da = AnalysisFn::from_sampled(&dual);
    let residual = wexler_raz_residual(&ga, &da, 0.5, -3..=3, -3..=3, 12, 1e-9).unwrap();
    c.finish(residual, 1e-6);
}

#[test]
fn criterion_06_vasilevski_kernel_identity() {
    let c = Criterion::begin(
        6,
        "polyanalytic kernel equals the sum of true polyanalytic layers",
        120.0,
    );
    let mut rng = Stream::new(0xac6);
    let mut worst = 0.0f64;
    for n in 1..=4usize {
        for i in 0..100 {
            let nu = if i % 2 == 0 { 0.0 } else { 0.3 };
            let z = Complex64::new(rng.unit(), 3.0 * rng.sym());
            let w = Complex64::new(rng.unit(), 3.0 * rng.sym());
            let poly = fock_kernel_poly(n, nu, z, w, &POL).unwrap();
            let mut layered = Complex64::new(0.0, 0.0);
            for r in 0..n {
                layered += fock_kernel_true(r, nu, z, w, &POL).unwrap();
            }
            worst = worst.max((poly - layered).norm() / (1.0 + poly.norm()));
        }
    }
    c.finish(worst, 1e-9);
}

#[test]
fn criterion_07_laguerre_summation() {
    let c = Criterion::begin(
        7,
        "Laguerre partial sums match the alpha=1 polynomials",
        30.0,
    );
    let mut worst = 0.0f64;
    for n in 0..=16usize {
        for j in 0..20 {
            let x = 0.5 * j as f64;
            let lhs: f64 = (0..=n).map(|r| laguerre(r, 0.0, x).unwrap()).sum();
            let rhs = laguerre(n, 1.0, x).unwrap();
            worst = worst.max((lhs - rhs).abs());
        }
    }
    c.finish(worst, 1e-12);
}

#[test]
fn criterion_08_sampling_reconstruction() {
    let c = Criterion::begin(
        8,
        "node samples of a kernel section reconstruct it on the strip",
        60.0,
    );
    let nodes = NodeSet::from_lattice(0.5, 0.0, 80).unwrap();
    let w0 = Complex64::new(0.4, 0.7);
    let f = |z: Complex64| cylgabor::fock::fock_kernel_analytic(0.0, z, w0, &POL).unwrap();
    let values: Vec<Complex64> = (0..nodes.len())
        .map(|j| f(nodes.node(j).to_complex()))
        .collect();
    let mut rng = Stream::new(0xac8);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let z = Complex64::new(rng.unit(), rng.sym());
        let rec = sample_reconstruct(&nodes, &values, z, &POL).unwrap();
        let tru = f(z);
        worst = worst.max((rec - tru).norm() / (1.0 + tru.norm()));
    }
    c.finish(worst, 1e-4);
}

#[test]
fn criterion_09_interpolation() {
    let c = Criterion::begin(
        9,
        "order-1 interpolant: node exactness and weighted boundedness",
        60.0,
    );
    let nodes = NodeSet::from_lattice(3.0, 0.0, 10).unwrap();
    let mut rng = Stream::new(0xac9);
    let a: Vec<Complex64> = (0..nodes.len()).map(|_| rng.complex()).collect();
    let mut worst = 0.0f64;
    for j in 0..nodes.len() {
        let v = interpolate_true(1, &nodes, &a, nodes.node(j).to_complex(), &POL).unwrap();
        worst = worst.max((v - a[j]).norm());
    }
    // weighted boundedness on the central probe grid
    for t in 0..27 {
        let z = Complex64::new(0.1 + 0.3 * (t % 3) as f64, -4.0 + (t / 3) as f64);
        let v = interpolate_true(1, &nodes, &a, z, &POL).unwrap();
        let weighted = v.norm() * (-std::f64::consts::PI * z.norm_sqr() / 2.0).exp();
        assert!(
            weighted.is_finite() && weighted < 1e3,
            "weighted value {weighted} at z={z}"
        );
    }
    c.finish(worst, 1e-8);
}

#[test]
fn criterion_10_density() {
    let c = Criterion::begin(
        10,
        "lattice Beurling densities: exact 1/beta, sweep within 5 percent",
        60.0,
    );
    let mut worst = 0.0f64;
    for &beta in &[0.2, 0.25, 0.5, 2.0] {
        let lat = PointSet::vertical_lattice(beta, 0.1).unwrap();
        let d = beurling_density(&lat, 200.0, 6).unwrap();
        let exact = d.exact.unwrap();
        assert!(
            (exact - 1.0 / beta).abs() < 1e-12,
            "beta={beta}: exact {exact}"
        );
        worst = worst.max((d.lower - exact).abs() / exact);
        worst = worst.max((d.upper - exact).abs() / exact);
    }
    c.finish(worst, 0.05);
}

#[test]
fn criterion_11_bargmann_functional_equation() {
    let c = Criterion::begin(
        11,
        "Bargmann images satisfy the cylinder functional equation",
        60.0,
    );
    c.finish(bargmann_functional_equation_residual(50, 0xac11), 1e-9);
}

#[test]
fn criterion_12_superframe_sufficiency() {
    let c = Criterion::begin(
        12,
        "Hermite pair at beta=0.4: stable A/B > 1e-4, exact vector Moyal",
        120.0,
    );
    let g = VectorWindow::hermite_stack(2).unwrap();
    let fb32 = super_frame_bounds(&g, 0.4, 0.0, 32, 1e-12).unwrap();
    let fb64 = super_frame_bounds(&g, 0.4, 0.0, 64, 1e-12).unwrap();
    let drift = (fb64.a - fb32.a).abs() / fb64.a;
    assert!(drift < 0.05, "A drift under doubling: {drift:.3e}");
    assert!(fb64.a / fb64.b > 1e-4, "A/B = {}", fb64.a / fb64.b);
    let mut rng = Stream::new(0xac12);
    let nu = 0.3;
    let f = VectorSignal::new(vec![rng.signal(nu, 5), rng.signal(nu, 5)]).unwrap();
    let ip = vector_moyal_inner(&f, &f).unwrap();
    c.finish((ip.re - f.norm_sq()).abs() + ip.im.abs(), 1e-12);
}

#[test]
fn criterion_13_full_verify_suite() {
    let c = Criterion::begin(
        13,
        "all verification suites pass inside the time budget",
        600.0,
    );
    let reports = run_all().unwrap();
    let mut failed = 0usize;
    for rep in &reports {
        for check in &rep.checks {
            if !check.passed {
                eprintln!(
                    "failed check {}/{}: measured {:.3e} vs tolerance {:.3e}",
                    rep.suite, check.name, check.measured, check.tolerance
                );
                failed += 1;
            }
        }
    }
    c.finish(failed as f64, 0.0);
}

#[test]
fn reconstruction_round_trip_supplement() {
    // the criterion-5 machinery also has to reproduce signals end to end
    let g = Window::gaussian();
    let nu = 0.3;
    let spec = FrameSpec::new(g.clone(), 0.5, nu, 24, 1e-12).unwrap();
    let dual = dual_window(&g, 1, 2, 0.05, 8.0, 1e-8).unwrap();
    let f = QPSignal::basis(nu, 0);
    let samples: Vec<(i64, Complex64)> = (-70i64..=70)
        .map(|n| {
            (
                n,
                stft_eval(&f, &g, CylinderPoint::new(0.0, 0.5 * n as f64)),
            )
        })
        .collect();
    let rec = reconstruct(&spec, &samples, &dual).unwrap();
    let err = rec.sub(&f).unwrap().norm() / f.norm();
    assert!(err < 1e-5, "round trip error {err}");
}
