//! Point-set geometry on the strip (separation constants, Beurling
//! densities), the explicit sampling-reconstruction series for the analytic
//! space, and the polyanalytic interpolation construction.
//!
//! The node products are Weierstrass-type factors over a vertical node
//! sequence `z_k` (Im increasing, index split at `k = 0`):
//!
//! `g(z) = e^{pi z^2/2} prod_{k>=0} (1 - e^{2 pi i (z_k - z)}) prod_{k<0} (1 - e^{2 pi i (z - z_k)})`.
//!
//! All products are accumulated in log space (the factors span hundreds of
//! orders of magnitude across a long node range); ratios of products are the
//! only quantities ever exponentiated.

use crate::numerics::{binomial, factorial, log1m_exp, q_over_one_minus_q};
use crate::special::TruncationPolicy;
use crate::stft::CylinderPoint;
use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Maximum supported interpolation order.
pub const MAX_INTERPOLATION_ORDER: usize = 4;

/// A point set on the strip, finite or structured.
#[derive(Debug, Clone)]
pub enum PointSet {
    /// An explicit finite set; `vertical_extent` declares the band
    /// `|Im z| <= extent` outside which the set is known to be empty.
    Finite {
        points: Vec<CylinderPoint>,
        vertical_extent: Option<f64>,
    },
    /// The vertical lattice `{ i (beta n + offset) : n in Z }`.
    VerticalLattice { beta: f64, offset: f64 },
    /// A vertically periodic set: `base + i period Z`.
    Periodic {
        period: f64,
        base: Vec<CylinderPoint>,
    },
}

impl PointSet {
    pub fn finite(points: Vec<CylinderPoint>, vertical_extent: Option<f64>) -> Result<Self> {
        validate_distinct(&points)?;
        Ok(Self::Finite {
            points,
            vertical_extent,
        })
    }

    pub fn vertical_lattice(beta: f64, offset: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::Invalid("vertical lattice needs beta > 0".into()));
        }
        Ok(Self::VerticalLattice { beta, offset })
    }

    pub fn periodic(period: f64, base: Vec<CylinderPoint>) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::Invalid("periodic set needs period > 0".into()));
        }
        validate_distinct(&base)?;
        for p in &base {
            if p.xi < 0.0 || p.xi >= period {
                return Err(Error::Invalid(
                    "periodic base points must lie in [0, period)".into(),
                ));
            }
        }
        Ok(Self::Periodic { period, base })
    }

    /// Number of points with `Im z` in `[lo, hi]` (exact closed form for
    /// structured sets).
    pub fn count_in_band(&self, lo: f64, hi: f64) -> usize {
        match self {
            Self::Finite { points, .. } => {
                points.iter().filter(|p| p.xi >= lo && p.xi <= hi).count()
            }
            Self::VerticalLattice { beta, offset } => count_arithmetic(*beta, *offset, lo, hi),
            Self::Periodic { period, base } => base
                .iter()
                .map(|p| count_arithmetic(*period, p.xi, lo, hi))
                .sum(),
        }
    }
}

fn validate_distinct(points: &[CylinderPoint]) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        for b in points.iter().skip(i + 1) {
            if a.canonicalize().distance(b.canonicalize()) < 1e-12 {
                return Err(Error::Invalid(format!(
                    "points coincide on the cylinder: ({}, {}) and ({}, {})",
                    a.x, a.xi, b.x, b.xi
                )));
            }
        }
    }
    Ok(())
}

fn count_arithmetic(step: f64, offset: f64, lo: f64, hi: f64) -> usize {
    let first = ((lo - offset) / step).ceil() as i64;
    let last = ((hi - offset) / step).floor() as i64;
    (last - first + 1).max(0) as usize
}

/// Separation constant: the infimum of pairwise cylinder distances.
///
/// Finite sets use a vertical plane sweep (the quadratic scan is kept as the
/// test oracle); structured sets are exact.
pub fn separation(set: &PointSet) -> Result<f64> {
    match set {
        PointSet::VerticalLattice { beta, .. } => Ok(*beta),
        PointSet::Periodic { period, base } => {
            let mut all: Vec<CylinderPoint> = Vec::new();
            for shift in [-1.0, 0.0, 1.0] {
                for p in base {
                    all.push(CylinderPoint::new(p.x, p.xi + shift * period));
                }
            }
            separation_sweep(&all)
        }
        PointSet::Finite { points, .. } => {
            if points.len() < 2 {
                return Err(Error::Invalid(
                    "separation needs at least two points".into(),
                ));
            }
            separation_sweep(points)
        }
    }
}

fn separation_sweep(points: &[CylinderPoint]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Invalid(
            "separation needs at least two points".into(),
        ));
    }
    let mut pts: Vec<CylinderPoint> = points.iter().map(|p| p.canonicalize()).collect();
    pts.sort_by(|a, b| a.xi.total_cmp(&b.xi));
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if pts[j].xi - pts[i].xi >= best {
                break;
            }
            best = best.min(pts[i].distance(pts[j]));
        }
    }
    Ok(best)
}

/// Beurling density estimates from the sliding-window sweep, with the exact
/// value attached for structured sets.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DensityEstimate {
    pub lower: f64,
    pub upper: f64,
    pub exact: Option<f64>,
    /// Set when the sweep windows exceed a finite set's declared extent, so
    /// the estimates are window-limited rather than asymptotic.
    pub window_limited: bool,
}

/// Sweeps windows `I_{w,r} = [0,1] x [Im w - r/2, Im w + r/2]` over a center
/// grid (64 centers per unit height) for geometrically increasing `r` up to
/// `r_max`, and reports the last inf/sup of `count / r`.
pub fn beurling_density(set: &PointSet, r_max: f64, r_steps: usize) -> Result<DensityEstimate> {
    if !(r_max > 0.0) || r_steps == 0 {
        return Err(Error::Invalid(
            "density sweep needs r_max > 0 and r_steps >= 1".into(),
        ));
    }
    let (exact, window_limited, center_lo, center_hi) = match set {
        PointSet::VerticalLattice { beta, .. } => (Some(1.0 / beta), false, 0.0, *beta),
        PointSet::Periodic { period, base } => {
            (Some(base.len() as f64 / period), false, 0.0, *period)
        }
        PointSet::Finite {
            points,
            vertical_extent,
        } => {
            let ext = vertical_extent.ok_or_else(|| {
                Error::Invalid(
                    "finite point sets need a declared vertical extent for the density sweep"
                        .into(),
                )
            })?;
            if points.iter().any(|p| p.xi.abs() > ext) {
                return Err(Error::Invalid(
                    "points outside the declared vertical extent".into(),
                ));
            }
            (None, true, -ext, ext)
        }
    };
    let mut lower = f64::INFINITY;
    let mut upper: f64 = 0.0;
    for step in 0..r_steps {
        // geometric increments from r_max / 2^(steps-1) up to r_max
        let r = r_max * 0.5f64.powi((r_steps - 1 - step) as i32);
        let centers = (((center_hi - center_lo) * 64.0).ceil() as usize).max(2);
        let mut inf_count = f64::INFINITY;
        let mut sup_count: f64 = 0.0;
        for i in 0..=centers {
            let c = center_lo + (center_hi - center_lo) * i as f64 / centers as f64;
            let n = set.count_in_band(c - r / 2.0, c + r / 2.0) as f64;
            inf_count = inf_count.min(n);
            sup_count = sup_count.max(n);
        }
        lower = inf_count / r;
        upper = sup_count / r;
    }
    Ok(DensityEstimate {
        lower,
        upper,
        exact,
        window_limited,
    })
}

/// An ordered vertical node sequence for the canonical products: `Im`
/// strictly increasing, with the index origin at the first node with
/// nonnegative imaginary part.
#[derive(Debug, Clone)]
pub struct NodeSet {
    nodes: Vec<CylinderPoint>,
    zero_index: usize,
    /// Mean vertical spacing (the lattice parameter for regular sets).
    pub spacing: f64,
}

impl NodeSet {
    pub fn from_points(points: Vec<CylinderPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Invalid("node set needs at least two nodes".into()));
        }
        for w in points.windows(2) {
            if w[1].xi <= w[0].xi {
                return Err(Error::Domain(
                    "node ordering violation: Im must be strictly increasing".into(),
                ));
            }
        }
        let zero_index = points
            .iter()
            .position(|p| p.xi >= 0.0)
            .unwrap_or(points.len());
        let spacing = (points.last().unwrap().xi - points[0].xi) / (points.len() as f64 - 1.0);
        Ok(Self {
            nodes: points,
            zero_index,
            spacing,
        })
    }

    /// Lattice nodes `i (beta n + offset)` for `|n| <= n_max`.
    pub fn from_lattice(beta: f64, offset: f64, n_max: usize) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::Invalid("node lattice needs beta > 0".into()));
        }
        let points = (-(n_max as i64)..=(n_max as i64))
            .map(|n| CylinderPoint::new(0.0, beta * n as f64 + offset))
            .collect();
        Self::from_points(points)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> CylinderPoint {
        self.nodes[i]
    }

    /// Signed index `k` of the node at position `i` (`k >= 0` branch begins
    /// at the first node with `Im >= 0`).
    pub fn signed_index(&self, i: usize) -> i64 {
        i as i64 - self.zero_index as i64
    }

    fn branch_positive(&self, i: usize) -> bool {
        i >= self.zero_index
    }

    /// `v` such that the node factor is `1 - e^v`: orientation `z_k - z` on
    /// the upper branch and `z - z_k` on the lower branch.
    fn factor_exponent(&self, i: usize, z: Complex64) -> Complex64 {
        let zk = self.nodes[i].to_complex();
        let sign = if self.branch_positive(i) { 1.0 } else { -1.0 };
        Complex64::new(0.0, 2.0 * PI * sign) * (zk - z)
    }

    fn factor_orientation(&self, i: usize) -> f64 {
        if self.branch_positive(i) {
            1.0
        } else {
            -1.0
        }
    }

    /// Complex log of the full node product (including `e^{pi z^2/2}`).
    pub fn log_product(&self, z: Complex64) -> Complex64 {
        let mut acc = PI * z * z / 2.0;
        for i in 0..self.nodes.len() {
            acc += log1m_exp(self.factor_exponent(i, z));
        }
        acc
    }

    /// Complex log of `g'(z_j)`: the vanishing factor is removed analytically
    /// and replaced by its derivative `-(d/dz) e^{v_j}` at the node.
    pub fn log_product_deriv_at(&self, j: usize) -> Complex64 {
        let zj = self.nodes[j].to_complex();
        let mut acc = PI * zj * zj / 2.0;
        // d/dz (1 - e^{s 2 pi i (z_j - z)}) at z_j is s * 2 pi i
        acc += (Complex64::new(0.0, 2.0 * PI * self.factor_orientation(j))).ln();
        for i in 0..self.nodes.len() {
            if i != j {
                acc += log1m_exp(self.factor_exponent(i, zj));
            }
        }
        acc
    }

    fn nearest_node(&self, z: Complex64, skip: Option<usize>) -> Option<(usize, f64)> {
        let zp = CylinderPoint::from_complex(z);
        let mut best: Option<(usize, f64)> = None;
        for (i, p) in self.nodes.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            let d = zp.distance(*p);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        best
    }
}

/// `g(z)`: value of the node product (errors if the magnitude leaves the
/// double range; prefer the log forms for wide node sets).
pub fn node_product_g(nodes: &NodeSet, z: Complex64, _pol: &TruncationPolicy) -> Result<Complex64> {
    let l = nodes.log_product(z);
    if l.re > 700.0 {
        return Err(Error::Domain(format!(
            "node product magnitude e^{:.0} exceeds double range; use the log form",
            l.re
        )));
    }
    Ok(l.exp())
}

/// `g'(z_j)` by the analytic product rule (vanishing factor removed).
pub fn node_product_deriv(nodes: &NodeSet, j: usize, _pol: &TruncationPolicy) -> Result<Complex64> {
    let l = nodes.log_product_deriv_at(j);
    if l.re > 700.0 {
        return Err(Error::Domain(format!(
            "node product derivative magnitude e^{:.0} exceeds double range; use the log form",
            l.re
        )));
    }
    Ok(l.exp())
}

/// Explicit sampling reconstruction for the analytic space:
/// `f(z) = 2 pi i sum_k f(z_k) g(z) / (g'(z_k) (1 - e^{2 pi i (z_k - z)}))`.
///
/// Needs node density above critical (`spacing < 1`) and one value per node;
/// at a node the stored value is returned exactly.
pub fn sample_reconstruct(
    nodes: &NodeSet,
    values: &[Complex64],
    z: Complex64,
    _pol: &TruncationPolicy,
) -> Result<Complex64> {
    if values.len() != nodes.len() {
        return Err(Error::Invalid(format!(
            "sample_reconstruct: {} values for {} nodes",
            values.len(),
            nodes.len()
        )));
    }
    if nodes.spacing >= 1.0 {
        return Err(Error::Domain(format!(
            "sample_reconstruct needs node density 1/beta > 1 (spacing {:.3})",
            nodes.spacing
        )));
    }
    if let Some((j, d)) = nodes.nearest_node(z, None) {
        if d < 1e-12 {
            return Ok(values[j]);
        }
    }
    let lz = nodes.log_product(z);
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, value) in values.iter().enumerate() {
        let zj = nodes.node(j).to_complex();
        let denom = log1m_exp(Complex64::new(0.0, 2.0 * PI) * (zj - z));
        let ex = lz - nodes.log_product_deriv_at(j) - denom;
        if ex.re < -700.0 || !ex.re.is_finite() {
            continue;
        }
        acc += value * ex.exp();
    }
    Ok(Complex64::new(0.0, 2.0 * PI) * acc)
}

/// Derivatives `u^{(i)}(z)`, `i = 0..=max_order`, of a node factor power
/// `u = (1 - q)^power` with `q(zeta) = e^{s 2 pi i (z_k - zeta)}`, by the
/// closed polynomial recursion (each derivative is a polynomial in `q` times
/// powers of `1-q`, so the lattice zeros are exact floating zeros).
fn factor_power_derivs(
    q: Complex64,
    orientation: f64,
    power: usize,
    max_order: usize,
) -> Vec<Complex64> {
    let c = Complex64::new(0.0, -2.0 * PI * orientation);
    let one = Complex64::new(1.0, 0.0);
    // terms: map (power of (1-q)) -> polynomial coefficients in q
    let mut terms: BTreeMap<usize, Vec<Complex64>> = BTreeMap::new();
    terms.insert(power, vec![one]);
    let evaluate = |terms: &BTreeMap<usize, Vec<Complex64>>| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&m, poly) in terms {
            let mut pv = Complex64::new(0.0, 0.0);
            let mut qp = one;
            for &co in poly {
                pv += co * qp;
                qp *= q;
            }
            acc += pv * (one - q).powu(m as u32);
        }
        acc
    };
    let mut out = vec![evaluate(&terms)];
    for _ in 0..max_order {
        let mut next: BTreeMap<usize, Vec<Complex64>> = BTreeMap::new();
        let mut add = |key: usize, poly: Vec<Complex64>| {
            let entry = next.entry(key).or_default();
            if entry.len() < poly.len() {
                entry.resize(poly.len(), Complex64::new(0.0, 0.0));
            }
            for (i, co) in poly.into_iter().enumerate() {
                entry[i] += co;
            }
        };
        for (&m, poly) in &terms {
            // d/dzeta [poly(q) (1-q)^m] with q' = c q:
            //   c q poly'(q) (1-q)^m  - m c q poly(q) (1-q)^{m-1}
            let dp: Vec<Complex64> = poly
                .iter()
                .enumerate()
                .map(|(t, co)| c * t as f64 * co)
                .collect();
            if dp.iter().any(|v| v.norm_sqr() != 0.0) {
                add(m, dp);
            }
            if m > 0 {
                let mut shifted = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
                for (t, co) in poly.iter().enumerate() {
                    shifted[t + 1] = -(m as f64) * c * co;
                }
                add(m - 1, shifted);
            }
        }
        terms = next;
        out.push(evaluate(&terms));
    }
    out
}

/// Polyanalytic interpolant of order `r`: the Hermite-type sum over nodes
/// whose `n`-th term carries the weight
/// `e^{pi (z - z_n) conj(w_n) + pi/2 ((z-w_n)^2 - (z_n-w_n)^2)}` with
/// `w_n = x_n + i floor(y_n)`, the shifted derivative factor
/// `(d/dz + 2 pi i (Im z - floor(y_n)))^r G_n(z)` and the normalization
/// `r! (2 pi i)^r (g_n(z_n))^{r+1}` that makes `f(z_k) = a_k` exact.
pub fn interpolate_true(
    r: usize,
    nodes: &NodeSet,
    values: &[Complex64],
    z: Complex64,
    _pol: &TruncationPolicy,
) -> Result<Complex64> {
    if r > MAX_INTERPOLATION_ORDER {
        return Err(Error::UnsupportedOrder {
            what: "interpolate_true",
            max: MAX_INTERPOLATION_ORDER,
            got: r,
        });
    }
    if values.len() != nodes.len() {
        return Err(Error::Invalid(format!(
            "interpolate_true: {} values for {} nodes",
            values.len(),
            nodes.len()
        )));
    }
    let density = 1.0 / nodes.spacing;
    if density >= 1.0 / (r as f64 + 1.0) {
        return Err(Error::Domain(format!(
            "interpolate_true needs D+ < 1/(r+1): measured density {density:.4}, bound {:.4}",
            1.0 / (r as f64 + 1.0)
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (n_idx, value) in values.iter().enumerate() {
        if value.norm_sqr() == 0.0 {
            continue;
        }
        if let Some(term) = interpolation_term(r, nodes, n_idx, z)? {
            acc += value * term;
        }
    }
    Ok(acc)
}

/// One normalized interpolation bump (`None` when it underflows or is an
/// exact lattice zero).
fn interpolation_term(
    r: usize,
    nodes: &NodeSet,
    n_idx: usize,
    z: Complex64,
) -> Result<Option<Complex64>> {
    let zn = nodes.node(n_idx).to_complex();
    let beta = nodes.spacing;
    // far bumps decay like e^{-pi (1 - (r+1)/beta) delta^2 / 2}
    let delta = (z.im - zn.im).abs();
    if PI * (1.0 - (r as f64 + 1.0) / beta) * delta * delta / 2.0 - 4.0 * PI * (delta + 1.0) > 250.0
    {
        return Ok(None);
    }
    let yn_floor = zn.im.floor();
    let wn = Complex64::new(zn.re, yn_floor);
    let lambda = Complex64::new(0.0, 2.0 * PI * (z.im - yn_floor));
    let near_limit = 0.45_f64.min(beta / 3.0);
    // factored bases carrying the exact lattice zeros near z
    let own_dist = CylinderPoint::from_complex(z).distance(nodes.node(n_idx));
    let own_factored = r > 0 && own_dist < near_limit;
    let foreign = nodes
        .nearest_node(z, Some(n_idx))
        .filter(|&(_, d)| d < near_limit)
        .map(|(i, _)| i);
    if let Some(fi) = foreign {
        let q = nodes.factor_exponent(fi, z).exp();
        if q == Complex64::new(1.0, 0.0) {
            // the (r+1)-fold zero kills every derivative up to order r
            return Ok(None);
        }
    }
    // u = own^r * foreign^{r+1}, derivatives 0..r by Leibniz over the bases
    let mut u_der = vec![Complex64::new(0.0, 0.0); r + 1];
    u_der[0] = Complex64::new(1.0, 0.0);
    let apply_base = |u_der: &mut Vec<Complex64>, q: Complex64, orient: f64, power: usize| {
        let fd = factor_power_derivs(q, orient, power, r);
        let prev = u_der.clone();
        for i in 0..=r {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=i {
                acc += binomial(i, j) * prev[j] * fd[i - j];
            }
            u_der[i] = acc;
        }
    };
    if own_factored {
        // the standalone own-node factor always carries the upper-branch
        // orientation
        let q = (Complex64::new(0.0, 2.0 * PI) * (zn - z)).exp();
        apply_base(&mut u_der, q, 1.0, r);
    }
    if let Some(fi) = foreign {
        let q = nodes.factor_exponent(fi, z).exp();
        apply_base(&mut u_der, q, nodes.factor_orientation(fi), r + 1);
    }
    // normalizer log g_n(z_n)
    let mut lgn_zn = Complex64::new(0.0, 0.0);
    for i in 0..nodes.len() {
        if i != n_idx {
            lgn_zn += log1m_exp(nodes.factor_exponent(i, zn));
        }
    }
    // closed-form linear tilt of the remaining log-product at z:
    // d/dzeta log(1 - e^{v}) = s 2 pi i q/(1-q) for v = s 2 pi i (z_i - zeta)
    let mut tilt = Complex64::new(0.0, 0.0);
    if r > 0 && !own_factored {
        let v = Complex64::new(0.0, 2.0 * PI) * (zn - z);
        tilt += r as f64 * Complex64::new(0.0, 2.0 * PI) * q_over_one_minus_q(v);
    }
    for i in 0..nodes.len() {
        if i == n_idx || Some(i) == foreign {
            continue;
        }
        let v = nodes.factor_exponent(i, z);
        tilt += (r as f64 + 1.0)
            * Complex64::new(0.0, 2.0 * PI * nodes.factor_orientation(i))
            * q_over_one_minus_q(v);
    }
    // flat remainder on the Cauchy ring
    let log_rest = |zeta: Complex64| -> Complex64 {
        let mut v = PI * (zeta - z) * (zeta - z) / 2.0 - (r as f64 + 1.0) * lgn_zn;
        if r > 0 && !own_factored {
            v += r as f64 * log1m_exp(Complex64::new(0.0, 2.0 * PI) * (zn - zeta));
        }
        for i in 0..nodes.len() {
            if i == n_idx || Some(i) == foreign {
                continue;
            }
            v += (r as f64 + 1.0) * log1m_exp(nodes.factor_exponent(i, zeta));
        }
        v - tilt * (zeta - z)
    };
    let radius = 0.3_f64.min(beta / 4.0);
    let nq = 64 * (r + 1);
    let mut ring = Vec::with_capacity(nq);
    let mut kappa = f64::NEG_INFINITY;
    for j in 0..nq {
        let theta = 2.0 * PI * j as f64 / nq as f64;
        let l = log_rest(z + radius * Complex64::new(0.0, theta).exp());
        if l.re.is_finite() {
            kappa = kappa.max(l.re);
        }
        ring.push((theta, l));
    }
    if !kappa.is_finite() {
        return Ok(None);
    }
    let scaled: Vec<(f64, Complex64)> = ring
        .into_iter()
        .map(|(theta, l)| {
            let v = if l.re.is_finite() {
                (l - kappa).exp()
            } else {
                Complex64::new(0.0, 0.0)
            };
            (theta, v)
        })
        .collect();
    let ring_deriv = |order: usize| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(theta, v) in &scaled {
            acc += v * Complex64::new(0.0, -(order as f64) * theta).exp();
        }
        acc * factorial(order) / (nq as f64 * radius.powi(order as i32))
    };
    let rest_derivs: Vec<Complex64> = (0..=r).map(ring_deriv).collect();
    let mu = lambda + tilt;
    let mut shifted = Complex64::new(0.0, 0.0);
    for j in 0..=r {
        let mut dj = Complex64::new(0.0, 0.0);
        for i in 0..=j {
            dj += binomial(j, i) * u_der[i] * rest_derivs[j - i];
        }
        shifted += binomial(r, j) * mu.powu((r - j) as u32) * dj;
    }
    if shifted == Complex64::new(0.0, 0.0) {
        return Ok(None);
    }
    let log_weight =
        PI * (z - zn) * wn.conj() + PI / 2.0 * ((z - wn) * (z - wn) - (zn - wn) * (zn - wn));
    let log_term = log_weight + kappa + shifted.ln()
        - factorial(r).ln()
        - (r as f64) * Complex64::new(0.0, 2.0 * PI).ln();
    if log_term.re < -700.0 {
        return Ok(None);
    }
    if log_term.re > 700.0 {
        return Err(Error::Domain(format!(
            "interpolation term magnitude e^{:.0} exceeds double range at z = {z}",
            log_term.re
        )));
    }
    Ok(Some(log_term.exp()))
}
