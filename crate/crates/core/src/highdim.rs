//! Curves in `R^n`: the cross-polytope family, the reduction of one curve in
//! `R^{2n}` to `2n` curves from the origin in `R^n`, dyadic decompositions,
//! Gaussian measures of slabs and balls, and direction certificates.

use serde::Serialize;

use crate::curve::{CurveFamily, Polyline};
use crate::error::{Error, Result};
use crate::hull::{contains_unit_sphere_with, minimize_support, origin_inradius_minimax_with, MinimaxOptions, PointCloud};
use crate::linalg::{dot, norm, orthogonal_complement};
use crate::{par, rng};

/// Constant from the segment case: `2√e/δ` with `δ = 0.95²`.
pub fn segment_constant() -> f64 {
    2.0 * 0.5f64.exp() / (0.95 * 0.95)
}

/// Default constant used by the direction and point checks.
pub const DEFAULT_C: f64 = 3.65;

/// Default truncation depth of dyadic decompositions.
pub const DEFAULT_DEPTH: usize = 20;

// ---------------------------------------------------------------------------
// Cross polytope
// ---------------------------------------------------------------------------

/// Path through `e₁, …, e_n, −e₁, …, −e_n`, closed back to `e₁` if asked.
pub fn cross_polytope_curve(n: usize, closed: bool) -> Result<Polyline> {
    if n < 2 {
        return Err(Error::InvalidArgument("cross polytope needs n >= 2".into()));
    }
    let mut coords = vec![0.0; 2 * n * n];
    for i in 0..n {
        coords[i * n + i] = 1.0;
        coords[(n + i) * n + i] = -1.0;
    }
    Polyline::new(n, coords, closed)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossPolytopeReport {
    pub n: usize,
    pub closed: bool,
    pub length: f64,
    /// Origin-centred inradius from minimax, with its witness direction.
    pub inradius: f64,
    pub witness: Vec<f64>,
    pub ratio: f64,
    /// `2√2·n√n` closed, `√2(2n−1)√n` open.
    pub expected_ratio: f64,
    /// The constant `2n√n` quoted for this family.
    pub quoted_bound: f64,
    /// `ratio / quoted_bound`; about √2, so the quoted bound does not hold.
    pub quoted_factor: f64,
}

pub fn cross_polytope_report(n: usize, closed: bool) -> Result<CrossPolytopeReport> {
    let poly = cross_polytope_curve(n, closed)?;
    let cloud = PointCloud::from_polyline(&poly);
    let r = origin_inradius_minimax_with(&cloud, MinimaxOptions { restarts: 32, ..Default::default() })?;
    let length = poly.length();
    let nf = n as f64;
    let ratio = length / r.radius;
    let segments = if closed { 2.0 * nf } else { 2.0 * nf - 1.0 };
    let quoted_bound = 2.0 * nf * nf.sqrt();
    Ok(CrossPolytopeReport {
        n,
        closed,
        length,
        inradius: r.radius,
        witness: r.witness_direction.unwrap_or_default(),
        ratio,
        expected_ratio: std::f64::consts::SQRT_2 * segments * nf.sqrt(),
        quoted_bound,
        quoted_factor: ratio / quoted_bound,
    })
}

// ---------------------------------------------------------------------------
// Split and project
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct SplitFamily {
    /// `2n` curves in `R^n`, each starting at the origin.
    pub family: CurveFamily,
    /// Arclength interval of the input covered by each curve, in curve order.
    /// Odd-indexed curves run forward from the interval start, even-indexed
    /// ones backward from the interval end.
    pub intervals: Vec<(f64, f64)>,
    /// Orthonormal basis of the subspace, as rows in `R^{2n}`.
    pub basis: Vec<Vec<f64>>,
}

/// Splits a curve in `R^{2n}` at `n` equally spaced parameters, projects it
/// onto an `n`-dimensional subspace orthogonal to the `n` interval midpoints,
/// and cuts each interval at its midpoint into two curves from the origin.
pub fn split_and_project(poly: &Polyline) -> Result<SplitFamily> {
    let dim = poly.dim();
    if dim % 2 == 1 {
        return Err(Error::UnsupportedDimension { dim, expected: "even" });
    }
    let n = dim / 2;
    let cum = poly.cumulative_lengths();
    let total = *cum.last().unwrap();
    let t = |i: usize| total * i as f64 / n as f64;
    let mids: Vec<f64> = (1..=n).map(|i| 0.5 * (t(i - 1) + t(i))).collect();
    let anchors: Vec<Vec<f64>> = mids.iter().map(|&s| poly.point_at(s)).collect();
    let basis = orthogonal_complement(&anchors, dim, n);
    debug_assert_eq!(basis.len(), n);
    let project = |x: &[f64]| -> Vec<f64> { basis.iter().map(|h| dot(h, x)).collect() };

    let mut curves = Vec::with_capacity(2 * n);
    let mut intervals = Vec::with_capacity(2 * n);
    for i in 1..=n {
        let (a, m, b) = (t(i - 1), mids[i - 1], t(i));
        let mut left: Vec<Vec<f64>> = chain(poly, &cum, a, m).iter().map(|x| project(x)).collect();
        left.reverse();
        let right: Vec<Vec<f64>> = chain(poly, &cum, m, b).iter().map(|x| project(x)).collect();
        for (k, pts) in [left, right].into_iter().enumerate() {
            curves.push(from_origin(pts, 2 * (i - 1) + k)?);
        }
        intervals.push((a, m));
        intervals.push((m, b));
    }
    Ok(SplitFamily { family: CurveFamily::new(curves, true)?, intervals, basis })
}

/// Points of the chain between arclengths `s0 < s1`: both end points and the
/// vertices strictly between.
fn chain(poly: &Polyline, cum: &[f64], s0: f64, s1: f64) -> Vec<Vec<f64>> {
    let n = poly.len();
    let mut out = vec![poly.point_at_with(cum, s0)];
    for (j, &c) in cum.iter().enumerate() {
        if c > s0 && c < s1 {
            out.push(poly.vertex(j % n).to_vec());
        }
    }
    out.push(poly.point_at_with(cum, s1));
    out
}

/// Polyline from projected points, the first of which is the origin up to
/// rounding. Repeated points are dropped.
fn from_origin(pts: Vec<Vec<f64>>, index: usize) -> Result<Polyline> {
    let scale = pts.iter().map(|p| norm(p)).fold(1.0, f64::max);
    let mut kept: Vec<Vec<f64>> = vec![vec![0.0; pts[0].len()]];
    for p in pts.into_iter().skip(1) {
        let last = kept.last().unwrap();
        if crate::linalg::dist(last, &p) > 1e-13 * scale {
            kept.push(p);
        }
    }
    if kept.len() < 2 {
        return Err(Error::InvalidCurve(format!("sub-curve {index} collapses to a point under projection")));
    }
    Polyline::from_points(&kept, false)
}

// ---------------------------------------------------------------------------
// Dyadic decomposition
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicRow {
    pub t: f64,
    /// `t_1, …, t_K`.
    pub grid: Vec<f64>,
    /// `v_k = γ(t_k) − γ(t_{k−1})`.
    pub vectors: Vec<Vec<f64>>,
    /// `Σ v_k = γ(t_K)`.
    pub sum: Vec<f64>,
    /// `|γ(t) − Σ v_k|`.
    pub error: f64,
    /// `L·2^{−K}`, which bounds `error`.
    pub tail_bound: f64,
}

fn check_from_origin(curve: &Polyline) -> Result<()> {
    if norm(curve.vertex(0)) > 1e-12 {
        return Err(Error::InvalidArgument("curve must start at the origin".into()));
    }
    Ok(())
}

/// Decomposes `γ(t)` (parameter normalized to `[0, 1]` by arclength) along the
/// dyadic grid that moves `1/2^k` toward `t` at step `k`.
pub fn dyadic_decomposition(curve: &Polyline, t: f64, depth: usize) -> Result<DyadicRow> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("parameter {t} is outside [0, 1]")));
    }
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    check_from_origin(curve)?;
    let cum = curve.cumulative_lengths();
    let total = *cum.last().unwrap();
    let at = |s: f64| curve.point_at_with(&cum, s * total);
    let mut grid = Vec::with_capacity(depth);
    let mut vectors = Vec::with_capacity(depth);
    let mut prev_t = 0.0;
    let mut prev = at(0.0);
    for k in 1..=depth {
        let h = 0.5f64.powi(k as i32);
        let tk = if t < prev_t { prev_t - h } else { prev_t + h };
        let p = at(tk);
        vectors.push(p.iter().zip(&prev).map(|(a, b)| a - b).collect::<Vec<_>>());
        grid.push(tk);
        prev_t = tk;
        prev = p;
    }
    let mut sum = vec![0.0; curve.dim()];
    for v in &vectors {
        sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
    }
    let error = crate::linalg::dist(&at(t), &sum);
    Ok(DyadicRow { t, grid, vectors, sum, error, tail_bound: total * 0.5f64.powi(depth as i32) })
}

/// The `2^{k−1}` possible values of `v_k` over all `t`, ordered by the grid
/// point they start from and then left before right.
pub fn dyadic_vector_set(curve: &Polyline, k: usize) -> Result<Vec<Vec<f64>>> {
    if k == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    check_from_origin(curve)?;
    let cum = curve.cumulative_lengths();
    let total = *cum.last().unwrap();
    let at = |s: f64| curve.point_at_with(&cum, s * total);
    let diff = |a: f64, b: f64| -> Vec<f64> { at(b).iter().zip(at(a)).map(|(x, y)| x - y).collect() };
    if k == 1 {
        return Ok(vec![diff(0.0, 0.5)]);
    }
    let h = 0.5f64.powi(k as i32);
    let step = 0.5f64.powi(k as i32 - 1);
    let mut out = Vec::with_capacity(1 << (k - 1));
    for j in 0..(1usize << (k - 2)) {
        let s = (2 * j + 1) as f64 * step;
        out.push(diff(s, s - h));
        out.push(diff(s, s + h));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Gaussian measures
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl GaussianEstimate {
    fn from_hits(hits: u64, samples: u64, seed: u64) -> Self {
        let mean = hits as f64 / samples as f64;
        GaussianEstimate { mean, stderr: (mean * (1.0 - mean) / samples as f64).sqrt(), samples, seed }
    }
}

/// Monte Carlo standard Gaussian measure of `{x : member(x)}` in `R^n`.
/// Samples are drawn in fixed blocks, block `b` from stream `(seed, b)`.
pub fn gaussian_measure_mc<F>(member: F, n: usize, samples: u64, seed: u64) -> Result<GaussianEstimate>
where
    F: Fn(&[f64]) -> bool + Sync,
{
    if samples < 100 {
        return Err(Error::InvalidArgument("at least 100 samples are required".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let block = par::CHUNK as u64;
    let blocks = samples.div_ceil(block) as usize;
    let hits: u64 = par::map_indexed(blocks, |b| {
        let mut s = rng::stream(seed, b as u64);
        let count = block.min(samples - b as u64 * block);
        let mut x = vec![0.0; n];
        let mut h = 0u64;
        for _ in 0..count {
            s.fill_normal(&mut x);
            h += member(&x) as u64;
        }
        h
    })
    .into_iter()
    .sum();
    Ok(GaussianEstimate::from_hits(hits, samples, seed))
}

/// `P(|Z| ≤ a)` for a standard normal `Z`, i.e. `erf(a/√2)`.
pub fn slab_measure_1d(a: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    libm::erf(a / std::f64::consts::SQRT_2)
}

/// The lower bound `1 − e^{−a²/2}` for `slab_measure_1d(a)`.
pub fn slab_measure_lower_bound(a: f64) -> f64 {
    1.0 - (-0.5 * a * a).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Slab {
    pub normal: Vec<f64>,
    pub half_width: f64,
}

impl Slab {
    pub fn contains(&self, x: &[f64]) -> bool {
        dot(&self.normal, x).abs() <= self.half_width
    }

    /// Gaussian measure of the slab.
    pub fn measure(&self) -> f64 {
        slab_measure_1d(self.half_width / norm(&self.normal))
    }
}

/// Origin-symmetric slabs `{x : |⟨x, v⟩| ≤ w}` in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlabFamily {
    dim: usize,
    slabs: Vec<Slab>,
}

impl SlabFamily {
    pub fn new(dim: usize, slabs: Vec<Slab>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        for (i, s) in slabs.iter().enumerate() {
            if s.normal.len() != dim {
                return Err(Error::InvalidArgument(format!("slab {i} has the wrong dimension")));
            }
            if !(norm(&s.normal) > 0.0) || !(s.half_width > 0.0) || !s.half_width.is_finite() {
                return Err(Error::InvalidArgument(format!("slab {i} needs a nonzero normal and positive width")));
            }
        }
        Ok(SlabFamily { dim, slabs })
    }

    /// `count` slabs with uniform random normals and half-widths in `[lo, hi]`.
    pub fn random(dim: usize, count: usize, lo: f64, hi: f64, seed: u64) -> Result<Self> {
        let slabs = (0..count)
            .map(|i| {
                let mut s = rng::stream(seed, i as u64);
                let normal = s.unit_vector(dim);
                Slab { normal, half_width: lo + (hi - lo) * s.uniform() }
            })
            .collect();
        SlabFamily::new(dim, slabs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slabs(&self) -> &[Slab] {
        &self.slabs
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.slabs.iter().all(|s| s.contains(x))
    }

    /// `∏ μ(S)` over the slabs.
    pub fn product_measure(&self) -> f64 {
        self.slabs.iter().map(Slab::measure).product()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SidakReport {
    pub lhs: GaussianEstimate,
    pub rhs_product: f64,
    pub pass: bool,
}

/// Compares the Gaussian measure of the intersection with the product of the
/// slab measures; passes when `lhs ≥ rhs − 3σ`.
pub fn sidak_check(family: &SlabFamily, samples: u64, seed: u64) -> Result<SidakReport> {
    if family.slabs.len() > 64 || family.dim > 32 {
        return Err(Error::InvalidArgument("at most 64 slabs in dimension at most 32".into()));
    }
    let lhs = gaussian_measure_mc(|x| family.contains(x), family.dim, samples, seed)?;
    let rhs_product = family.product_measure();
    Ok(SidakReport { lhs, rhs_product, pass: lhs.mean >= rhs_product - 3.0 * lhs.stderr })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallBoundReport {
    pub n: usize,
    pub r: f64,
    pub mc: GaussianEstimate,
    /// `(√e·r/√n)^n`.
    pub bound: f64,
    pub pass: bool,
}

pub fn gaussian_ball_bound_check(n: usize, r: f64, samples: u64, seed: u64) -> Result<BallBoundReport> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let r2 = r * r;
    let mc = gaussian_measure_mc(|x| x.iter().map(|v| v * v).sum::<f64>() <= r2, n, samples, seed)?;
    let bound = (0.5f64.exp() * r / (n as f64).sqrt()).powi(n as i32);
    Ok(BallBoundReport { n, r, mc, bound, pass: mc.mean <= bound + 3.0 * mc.stderr })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaReport {
    pub depth: usize,
    /// `a_k = 2^k/k²`.
    pub a: Vec<f64>,
    /// `μ` of a slab of normalized half-width `a_k`.
    pub slab_measures: Vec<f64>,
    /// `∏_k μ_k^{2^{k−1}}`, which bounds `√δ` from below.
    pub sqrt_delta: f64,
    /// `exp(−Σ 2^k e^{−a_k²/2})`, the closed-form lower bound.
    pub sqrt_delta_closed_form: f64,
    pub delta: f64,
    /// `2√e/δ`.
    pub constant: f64,
}

/// The constant obtained from the full slab family with `a_k = 2^k/k²`,
/// computed from the exact slab measures up to `depth`.
pub fn delta_report(depth: usize) -> DeltaReport {
    let a: Vec<f64> = (1..=depth).map(|k| 2f64.powi(k as i32) / (k * k) as f64).collect();
    let slab_measures: Vec<f64> = a.iter().map(|&x| slab_measure_1d(x)).collect();
    let log: f64 = slab_measures.iter().enumerate().map(|(i, m)| 2f64.powi(i as i32) * m.ln()).sum();
    let closed: f64 = a.iter().enumerate().map(|(i, x)| 2f64.powi(i as i32 + 1) * (-0.5 * x * x).exp()).sum();
    let sqrt_delta = log.exp();
    let delta = sqrt_delta * sqrt_delta;
    DeltaReport {
        depth,
        a,
        slab_measures,
        sqrt_delta,
        sqrt_delta_closed_form: (-closed).exp(),
        delta,
        constant: 2.0 * 0.5f64.exp() / delta,
    }
}

// ---------------------------------------------------------------------------
// Direction certificates
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum DirectionMethod {
    Minimax {
        restarts: usize,
        iters: usize,
    },
    /// Rejection sampling from the intersection of the dyadic slabs.
    SlabRejection {
        depth: usize,
        /// Slab half-width factors `b_k` (slab `|⟨x,v⟩| ≤ √n·b_k`); `None`
        /// means `b_k = 1/k²`.
        weights: Option<Vec<f64>>,
        /// Minimum accepted `|u₀|`; `None` means `δ√n/√e` with `δ` from the
        /// exact product of the slab measures.
        radius: Option<f64>,
        budget: u64,
    },
}

impl Default for DirectionMethod {
    fn default() -> Self {
        DirectionMethod::Minimax { restarts: 64, iters: crate::hull::DEFAULT_ITERS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlabSampling {
    pub slab_count: usize,
    pub samples: u64,
    pub in_slabs: u64,
    pub radius: f64,
    pub u0_norm: f64,
    /// `(Σ_k √n·b_k)/|u₀| + max_i L_i·2^{−K}`: the bound the slab argument
    /// certifies for the returned direction.
    pub slab_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionCertificate {
    pub u: Vec<f64>,
    /// Largest `⟨v, u⟩` over the vertices of each curve.
    pub per_curve_max: Vec<f64>,
    pub bound: f64,
    pub sampling: Option<SlabSampling>,
}

impl DirectionCertificate {
    /// Exact certificate for `u` (normalized here).
    pub fn new(family: &CurveFamily, u: &[f64]) -> Result<Self> {
        if u.len() != family.dim() {
            return Err(Error::InvalidArgument("direction dimension differs from the family".into()));
        }
        let l = norm(u);
        if !(l > 0.0) {
            return Err(Error::InvalidArgument("direction must be nonzero".into()));
        }
        let u: Vec<f64> = u.iter().map(|x| x / l).collect();
        let per_curve_max: Vec<f64> = family
            .curves()
            .iter()
            .map(|c| c.vertices().map(|v| dot(v, &u)).fold(f64::NEG_INFINITY, f64::max))
            .collect();
        let bound = per_curve_max.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(DirectionCertificate { u, per_curve_max, bound, sampling: None })
    }
}

/// Finds `u` with `⟨γᵢ(t), u⟩` small for every curve and point.
pub fn find_direction(family: &CurveFamily, method: &DirectionMethod, seed: u64) -> Result<DirectionCertificate> {
    if !family.base_point_at_origin() {
        return Err(Error::InvalidArgument("curves must start at the origin".into()));
    }
    match method {
        DirectionMethod::Minimax { restarts, iters } => {
            if *restarts == 0 {
                return Err(Error::InvalidArgument("at least one restart is required".into()));
            }
            let pts: Vec<&[f64]> = family.curves().iter().flat_map(|c| c.vertices()).collect();
            let cloud = PointCloud::from_points(&pts)?;
            let best = minimize_support(&cloud, MinimaxOptions { restarts: *restarts, iters: *iters, seed }, &[]);
            DirectionCertificate::new(family, &best.direction)
        }
        DirectionMethod::SlabRejection { depth, weights, radius, budget } => {
            slab_rejection(family, *depth, weights.as_deref(), *radius, *budget, seed)
        }
    }
}

/// The slabs `|⟨x, v⟩| ≤ √n·b_k` for `v ∈ V_ik`, all curves, `k ≤ depth`.
pub fn dyadic_slabs(family: &CurveFamily, depth: usize, weights: Option<&[f64]>) -> Result<SlabFamily> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    if let Some(w) = weights {
        if w.len() < depth || w[..depth].iter().any(|x| !(*x > 0.0)) {
            return Err(Error::InvalidArgument(format!("need {depth} positive slab weights")));
        }
    }
    let n = family.dim();
    let root = (n as f64).sqrt();
    let mut slabs = Vec::new();
    for c in family.curves() {
        for k in 1..=depth {
            let b = weights.map_or(1.0 / (k * k) as f64, |w| w[k - 1]);
            for v in dyadic_vector_set(c, k)? {
                // Zero vectors give the whole space.
                if norm(&v) > 0.0 {
                    slabs.push(Slab { normal: v, half_width: root * b });
                }
            }
        }
    }
    SlabFamily::new(n, slabs)
}

fn slab_rejection(
    family: &CurveFamily,
    depth: usize,
    weights: Option<&[f64]>,
    radius: Option<f64>,
    budget: u64,
    seed: u64,
) -> Result<DirectionCertificate> {
    let n = family.dim();
    let slabs = dyadic_slabs(family, depth, weights)?;
    let root = (n as f64).sqrt();
    let radius = match radius {
        Some(r) => r,
        None => {
            let delta = slabs.product_measure().powf(1.0 / n as f64);
            delta * root / 0.5f64.exp()
        }
    };
    let block = par::CHUNK as u64;
    let mut samples = 0u64;
    let mut in_slabs = 0u64;
    let mut b = 0u64;
    while samples < budget {
        // Process blocks in batches so the first accepted sample in block
        // order wins regardless of scheduling.
        let batch = 8u64.min(budget.saturating_sub(samples).div_ceil(block));
        let results = par::map_indexed(batch as usize, |j| {
            let key = b + j as u64;
            let mut s = rng::stream(seed, key);
            let count = block.min(budget - key * block);
            let mut x = vec![0.0; n];
            let mut inside = 0u64;
            for i in 0..count {
                s.fill_normal(&mut x);
                if slabs.contains(&x) {
                    inside += 1;
                    if norm(&x) >= radius {
                        return (i + 1, inside, Some(x));
                    }
                }
            }
            (count, inside, None)
        });
        for (count, inside, hit) in results {
            samples += count;
            in_slabs += inside;
            if let Some(u0) = hit {
                let u0_norm = norm(&u0);
                let weight_sum: f64 = (1..=depth).map(|k| weights.map_or(1.0 / (k * k) as f64, |w| w[k - 1])).sum();
                let tail = family.curves().iter().map(|c| c.length()).fold(0.0, f64::max) * 0.5f64.powi(depth as i32);
                let mut cert = DirectionCertificate::new(family, &u0)?;
                cert.sampling = Some(SlabSampling {
                    slab_count: slabs.slabs().len(),
                    samples,
                    in_slabs,
                    radius,
                    u0_norm,
                    slab_bound: root * weight_sum / u0_norm + tail,
                });
                return Ok(cert);
            }
        }
        b += batch;
    }
    Err(Error::BudgetExhausted { samples, in_slabs, accepted: 0 })
}

/// `count` curves from the origin in `R^n`, each a monotone staircase of
/// `steps` axis-parallel moves (one sign per coordinate) with total length
/// `length`.
pub fn random_staircase_family(n: usize, count: usize, steps: usize, length: f64, seed: u64) -> Result<CurveFamily> {
    if n == 0 || count == 0 || steps == 0 || !(length > 0.0) {
        return Err(Error::InvalidArgument("staircase sizes must be positive".into()));
    }
    let curves = (0..count)
        .map(|i| {
            let mut s = rng::stream(seed, i as u64);
            let signs: Vec<f64> = (0..n).map(|_| if s.uniform() < 0.5 { -1.0 } else { 1.0 }).collect();
            let raw: Vec<f64> = (0..steps).map(|_| 0.05 + s.uniform()).collect();
            let scale = length / raw.iter().sum::<f64>();
            let mut p = vec![0.0; n];
            let mut pts = vec![p.clone()];
            let mut last_axis = usize::MAX;
            for r in raw {
                let mut axis = (s.uniform() * n as f64) as usize % n;
                if axis == last_axis && n > 1 {
                    axis = (axis + 1) % n;
                }
                p[axis] += signs[axis] * r * scale;
                if axis == last_axis {
                    // Same direction as the previous move: extend it.
                    *pts.last_mut().unwrap() = p.clone();
                } else {
                    pts.push(p.clone());
                }
                last_axis = axis;
            }
            Polyline::from_points(&pts, false)
        })
        .collect::<Result<Vec<_>>>()?;
    CurveFamily::new(curves, true)
}

/// Segments from the origin to `±√n·e_j`.
pub fn cross_polytope_segments(n: usize) -> Result<CurveFamily> {
    let root = (n as f64).sqrt();
    let curves = (0..2 * n)
        .map(|i| {
            let mut p = vec![0.0; 2 * n];
            p[n + i % n] = if i < n { root } else { -root };
            Polyline::new(n, p, false)
        })
        .collect::<Result<Vec<_>>>()?;
    CurveFamily::new(curves, true)
}

// ---------------------------------------------------------------------------
// Points whose hull contains the sphere
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    HypothesisNotMet,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TikhomirovReport {
    pub n: usize,
    pub count: usize,
    pub constant: f64,
    /// Smallest support value of the hull found by minimax.
    pub min_support: f64,
    pub hypothesis_holds: bool,
    pub max_norm: f64,
    /// `√n/C`.
    pub threshold: f64,
    /// Cosine of the largest cap radius in the dual covering, `1/max|Pᵢ|`.
    pub cos_rho: f64,
    /// `C/√n`.
    pub cos_rho_bound: f64,
    pub verdict: Verdict,
}

/// If at most `2n` points have a hull containing the unit sphere, one of
/// them has norm at least `√n/C`.
pub fn tikhomirov_check(points: &[Vec<f64>], constant: f64, seed: u64) -> Result<TikhomirovReport> {
    let cloud = PointCloud::from_points(points)?;
    let n = cloud.dim();
    let containment = contains_unit_sphere_with(&cloud, 2000, seed)?;
    let min_support = 1.0 + containment.min_slack;
    let max_norm = cloud.max_norm();
    let root = (n as f64).sqrt();
    let threshold = root / constant;
    let hypothesis_holds = containment.contains && points.len() <= 2 * n;
    let verdict = if !hypothesis_holds {
        Verdict::HypothesisNotMet
    } else if max_norm >= threshold {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(TikhomirovReport {
        n,
        count: points.len(),
        constant,
        min_support,
        hypothesis_holds,
        max_norm,
        threshold,
        cos_rho: 1.0 / max_norm,
        cos_rho_bound: constant / root,
        verdict,
    })
}

/// `±√n·e_j` in `R^n`.
pub fn scaled_cross_polytope_vertices(n: usize) -> Vec<Vec<f64>> {
    let root = (n as f64).sqrt();
    (0..2 * n)
        .map(|i| {
            let mut p = vec![0.0; n];
            p[i % n] = if i < n { root } else { -root };
            p
        })
        .collect()
}
