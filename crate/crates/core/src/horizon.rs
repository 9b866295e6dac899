//! Horizon `H(γ)` and efficiency `E(γ) = H/L` of polylines in R³.
//!
//! For a unit direction `p`, the tangent plane `{x : ⟨x,p⟩ = 1}` of S² meets a
//! segment `AB` iff `⟨A,p⟩ − 1` and `⟨B,p⟩ − 1` change sign, i.e. iff `p` lies
//! in exactly one of the caps `C_A = {p : ⟨A,p⟩ > 1}` and `C_B`. A segment's
//! horizon is therefore `area(C_A Δ C_B)`, evaluated here as
//! `area(C_A ∖ C_B) + area(C_B ∖ C_A)` so that short segments do not lose
//! digits to cancellation.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::curve::Polyline;
use crate::error::{Error, Result};
use crate::linalg::{angle_between, dot3, norm3};
use crate::quadrature::GaussLegendre;
use crate::{par, rng};

/// Nodes of the Gauss–Legendre rule used by [`segment_horizon`].
pub const DEFAULT_QUAD_POINTS: usize = 32;

const MIN_QUAD_POINTS: usize = 16;
const PIECE_TOL: f64 = 1e-15;
const MAX_DEPTH: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HorizonMethod {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonReport {
    pub total: f64,
    pub per_segment: Vec<f64>,
    pub method: HorizonMethod,
    pub mc_stderr: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub horizon: f64,
    pub length: f64,
    pub efficiency: f64,
}

/// Area of the open cap `{p ∈ S² : ⟨A,p⟩ > 1}`.
pub fn cap_area(a: [f64; 3]) -> f64 {
    let r = norm3(a);
    if r <= 1.0 {
        0.0
    } else {
        2.0 * PI * (1.0 - 1.0 / r)
    }
}

fn default_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(DEFAULT_QUAD_POINTS))
}

/// Which part of the circle of latitude around `C_A`'s centre to measure.
#[derive(Clone, Copy, PartialEq)]
enum Part {
    InsideB,
    OutsideB,
}

/// Area of `C_A ∩ C_B` or `C_A ∖ C_B` for caps with centre separation `psi`,
/// `C_A` of angular radius `arccos(cos_a)` and `C_B` of radius `beta`.
///
/// In the coordinate `z = cos φ` (φ measured from `C_A`'s centre) the area
/// element is `dz dλ`, and the circle at height `z` meets `C_B` in an arc of
/// azimuthal width `2·arccos((cos β − z cos ψ)/(√(1−z²) sin ψ))`.
fn cap_part(rule: &GaussLegendre, cos_a: f64, beta: f64, psi: f64, part: Part) -> f64 {
    let alpha = cos_a.acos();
    let cap_a = 2.0 * PI * (1.0 - cos_a);
    let cos_b = beta.cos();
    if psi >= alpha + beta {
        return if part == Part::InsideB { 0.0 } else { cap_a };
    }
    if psi + alpha <= beta {
        return if part == Part::InsideB { cap_a } else { 0.0 };
    }
    let (sin_psi, cos_psi) = psi.sin_cos();
    if sin_psi < 1e-300 {
        let inside = 2.0 * PI * (1.0 - cos_b.max(cos_a));
        return if part == Part::InsideB { inside } else { cap_a - inside };
    }
    let width = |z: f64| -> f64 {
        let s = (1.0 - z * z).max(0.0).sqrt();
        let num = cos_b - z * cos_psi;
        let den = s * sin_psi;
        let c = if den > 0.0 { (num / den).clamp(-1.0, 1.0) } else if num > 0.0 { 1.0 } else { -1.0 };
        let inside = 2.0 * c.acos();
        if part == Part::InsideB {
            inside
        } else {
            2.0 * (-c).acos()
        }
    };
    // Breakpoints where the latitude circle becomes tangent to ∂C_B.
    let mut cuts = vec![cos_a, 1.0];
    for phi in [psi + beta, (psi - beta).abs()] {
        let z = phi.cos();
        if z > cos_a && z < 1.0 {
            cuts.push(z);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        // z = lo + (hi − lo)(1 − cos τ)/2 smooths the square-root endpoints.
        let half = 0.5 * (hi - lo);
        let g = |tau: f64| {
            let (s, c) = tau.sin_cos();
            width(lo + half * (1.0 - c)) * half * s
        };
        total += rule.adaptive(&g, 0.0, PI, PIECE_TOL, MAX_DEPTH);
    }
    total
}

fn cap_geometry(a: [f64; 3], b: [f64; 3]) -> Option<(f64, f64, f64)> {
    let (ra, rb) = (norm3(a), norm3(b));
    if ra <= 1.0 || rb <= 1.0 {
        return None;
    }
    Some((1.0 / ra, (1.0 / rb).acos(), angle_between(&a, &b)))
}

/// Area of `C_A ∩ C_B` by adaptive quadrature with a `quad_points`-node
/// Gauss–Legendre rule (at least 16 nodes are used).
pub fn cap_intersection_area(a: [f64; 3], b: [f64; 3], quad_points: usize) -> f64 {
    match cap_geometry(a, b) {
        None => 0.0,
        Some((cos_a, beta, psi)) => {
            let rule = GaussLegendre::new(quad_points.max(MIN_QUAD_POINTS));
            cap_part(&rule, cos_a, beta, psi, Part::InsideB).clamp(0.0, cap_area(a).min(cap_area(b)))
        }
    }
}

fn cap_difference(rule: &GaussLegendre, a: [f64; 3], b: [f64; 3]) -> f64 {
    if norm3(a) <= 1.0 {
        return 0.0;
    }
    match cap_geometry(a, b) {
        None => cap_area(a),
        Some((cos_a, beta, psi)) => cap_part(rule, cos_a, beta, psi, Part::OutsideB).clamp(0.0, cap_area(a)),
    }
}

/// Measure of directions whose tangent plane crosses segment `AB`.
pub fn segment_horizon(a: [f64; 3], b: [f64; 3]) -> f64 {
    let rule = default_rule();
    cap_difference(rule, a, b) + cap_difference(rule, b, a)
}

/// Exact horizon, summed over segments in index order.
pub fn horizon(poly: &Polyline) -> Result<HorizonReport> {
    let pts = poly.points3()?;
    let n = pts.len();
    let per_segment = par::map_indexed(poly.segment_count(), |j| segment_horizon(pts[j], pts[(j + 1) % n]));
    let total = per_segment.iter().sum();
    Ok(HorizonReport { total, per_segment, method: HorizonMethod::Exact, mc_stderr: None })
}

/// Number of strict sign changes of `⟨γ_j, p⟩ − 1` along the chain. Zero
/// values are skipped; the sign is taken from the next nonzero value.
fn crossings(pts: &[[f64; 3]], closed: bool, p: [f64; 3]) -> u64 {
    let mut first: i8 = 0;
    let mut prev: i8 = 0;
    let mut count = 0u64;
    for &v in pts {
        let s = dot3(v, p) - 1.0;
        let sign = if s > 0.0 {
            1
        } else if s < 0.0 {
            -1
        } else {
            continue;
        };
        if first == 0 {
            first = sign;
        } else if sign != prev {
            count += 1;
        }
        prev = sign;
    }
    if closed && first != 0 && first != prev {
        count += 1;
    }
    count
}

/// Monte Carlo horizon: `samples` uniform directions keyed by
/// `(seed, sample index)`, each contributing `4π × #crossings`.
pub fn horizon_mc(poly: &Polyline, samples: u64, seed: u64) -> Result<HorizonReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let pts = poly.points3()?;
    let closed = poly.is_closed();
    let sums = par::map_chunks(samples as usize, par::CHUNK, |range| {
        let (mut s1, mut s2) = (0u64, 0u64);
        for i in range {
            let u = rng::stream(seed, i as u64).unit_vector(3);
            let c = crossings(&pts, closed, [u[0], u[1], u[2]]);
            s1 += c;
            s2 += c * c;
        }
        (s1, s2)
    });
    let (s1, s2) = sums.iter().fold((0u64, 0u64), |acc, &(a, b)| (acc.0 + a, acc.1 + b));
    let n = samples as f64;
    let mean = s1 as f64 / n;
    let var = if samples > 1 { ((s2 as f64 - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    let scale = 4.0 * PI;
    Ok(HorizonReport {
        total: scale * mean,
        per_segment: Vec::new(),
        method: HorizonMethod::MonteCarlo,
        mc_stderr: Some(scale * (var / n).sqrt()),
    })
}

pub fn efficiency(poly: &Polyline) -> Result<EfficiencyReport> {
    let h = horizon(poly)?;
    let length = poly.length();
    Ok(EfficiencyReport { horizon: h.total, length, efficiency: h.total / length })
}

/// Horizon of a planar circle of radius `r` about o: `8π√(1 − 1/r²)`.
pub fn circle_horizon(r: f64) -> f64 {
    if r <= 1.0 {
        0.0
    } else {
        8.0 * PI * (1.0 - 1.0 / (r * r)).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(r: f64, n: usize) -> Polyline {
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                vec![r * t.cos(), r * t.sin(), 0.0]
            })
            .collect();
        Polyline::from_points(&pts, true).unwrap()
    }

    /// Brute-force cap measures on a fine Fibonacci grid (independent of the
    /// quadrature path).
    fn grid_measure(pred: impl Fn([f64; 3]) -> bool, n: usize) -> f64 {
        let pts = crate::sphere::fibonacci(n);
        4.0 * PI * pts.iter().filter(|&&p| pred(p)).count() as f64 / n as f64
    }

    #[test]
    fn cap_area_examples() {
        assert_eq!(cap_area([1.0, 0.0, 0.0]), 0.0);
        let a = cap_area([2f64.sqrt(), 0.0, 0.0]);
        assert!((a - 1.840302).abs() < 1e-6);
        assert!((cap_area([1e12, 0.0, 0.0]) - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn cap_area_matches_monte_carlo() {
        let a = [2f64.sqrt(), 0.0, 0.0];
        let n = 1_000_000u64;
        let hits = (0..n).filter(|&i| dot3(rng::stream(5, i).unit_vector(3).try_into().unwrap(), a) > 1.0).count();
        let p = hits as f64 / n as f64;
        let se = 4.0 * PI * (p * (1.0 - p) / n as f64).sqrt();
        assert!((4.0 * PI * p - cap_area(a)).abs() < 3.0 * se);
    }

    #[test]
    fn intersection_examples() {
        let a = [1.3, -0.4, 0.9];
        assert!((cap_intersection_area(a, a, 32) - cap_area(a)).abs() < 1e-12);
        assert_eq!(cap_intersection_area([2.0, 0.0, 0.0], [-2.0, 0.0, 0.0], 32), 0.0);
        assert_eq!(cap_intersection_area([0.5, 0.0, 0.0], [2.0, 0.0, 0.0], 32), 0.0);

        let (a, b) = ([2.0, 0.0, 0.0], [0.0, 2.0, 0.0]);
        let q = cap_intersection_area(a, b, 32);
        let g = grid_measure(|p| dot3(p, a) > 1.0 && dot3(p, b) > 1.0, 2_000_000);
        assert!((q - g).abs() < 1e-4, "{q} vs {g}");
        assert!(q > 0.0);
    }

    #[test]
    fn intersection_is_stable_in_rule_size() {
        let (a, b) = ([1.7, 0.2, -0.3], [0.4, 1.9, 0.8]);
        let v16 = cap_intersection_area(a, b, 16);
        let v64 = cap_intersection_area(a, b, 64);
        assert!((v16 - v64).abs() < 1e-12);
    }

    #[test]
    fn segment_examples() {
        let a = [1.5, 0.3, -0.2];
        let b = [1.5 + 1e-12, 0.3, -0.2];
        assert!(segment_horizon(a, b) <= 1e-9);
        let inside = [0.2, 0.1, 0.0];
        let far = [2.0, 0.0, 0.0];
        assert_eq!(segment_horizon(inside, far), cap_area(far));

        let (a, b) = ([2.0, 0.0, 0.0], [0.0, 2.0, 0.0]);
        let h = segment_horizon(a, b);
        let (ca, cb) = (cap_area(a), cap_area(b));
        assert!(h >= (ca - cb).abs() && h <= ca + cb);
        assert!((h - (ca + cb - 2.0 * cap_intersection_area(a, b, 32))).abs() < 1e-12);
        let seg = Polyline::from_points(&[a.to_vec(), b.to_vec()], false).unwrap();
        let mc = horizon_mc(&seg, 1_000_000, 3).unwrap();
        assert!((mc.total - h).abs() < 3.0 * mc.mc_stderr.unwrap());
    }

    #[test]
    fn short_segment_matches_symmetric_difference_by_grid() {
        let a = [1.2, 0.5, 0.1];
        let b = [1.25, 0.45, 0.15];
        let h = segment_horizon(a, b);
        let g = grid_measure(|p| (dot3(p, a) > 1.0) != (dot3(p, b) > 1.0), 4_000_000);
        assert!((h - g).abs() < 2e-4, "{h} vs {g}");
    }

    #[test]
    fn circle_formula() {
        let h = horizon(&circle(2f64.sqrt(), 4000)).unwrap();
        assert!((h.total - 17.7715).abs() < 1e-3);
        let r = horizon(&circle(2.0, 10_000)).unwrap();
        assert!((r.total - circle_horizon(2.0)).abs() < 1e-6);
        let s: f64 = r.per_segment.iter().sum();
        assert!((s - r.total).abs() < 1e-9);
    }

    /// A planar convex curve around o is crossed twice by every tangent plane
    /// whose trace line `⟨x, q⟩ = 1` lies inside its support function, giving
    /// `H = 4 ∫ √(1 − 1/h(λ)²) dλ`. For the inscribed regular N-gon,
    /// `h(λ) = R cos δ` with δ the offset to the nearest vertex direction.
    fn regular_polygon_horizon(r: f64, n: usize) -> f64 {
        let half = PI / n as f64;
        let steps = 20_000;
        let f = |d: f64| {
            let h = r * d.cos();
            if h > 1.0 {
                (1.0 - 1.0 / (h * h)).sqrt()
            } else {
                0.0
            }
        };
        let dx = 2.0 * half / steps as f64;
        let mut s = f(-half) + f(half);
        for i in 1..steps {
            s += f(-half + i as f64 * dx) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        4.0 * n as f64 * s * dx / 3.0
    }

    #[test]
    fn regular_polygons_match_support_integral() {
        for (r, n) in [(1.1, 10_000), (2f64.sqrt(), 64), (2.0, 7), (10.0, 1000)] {
            let h = horizon(&circle(r, n)).unwrap().total;
            assert!((h - regular_polygon_horizon(r, n)).abs() < 1e-9, "r={r} n={n}");
        }
    }

    #[test]
    fn inside_curve_has_no_horizon() {
        let c = circle(0.9, 50);
        assert_eq!(horizon(&c).unwrap().total, 0.0);
        let mc = horizon_mc(&c, 1000, 1).unwrap();
        assert_eq!(mc.total, 0.0);
        assert_eq!(mc.mc_stderr, Some(0.0));
    }

    #[test]
    fn mc_circle_radius_two() {
        let mc = horizon_mc(&circle(2.0, 2000), 1_000_000, 0x5EED).unwrap();
        let target = 8.0 * PI * 3f64.sqrt() / 2.0;
        assert!((mc.total - target).abs() < 3.0 * mc.mc_stderr.unwrap());
    }

    #[test]
    fn efficiency_examples() {
        let e = efficiency(&circle(2f64.sqrt(), 4000)).unwrap();
        assert!((e.efficiency - 2.0).abs() < 1e-3);
        let e = efficiency(&circle(10.0, 4000)).unwrap();
        assert!((e.efficiency - 8.0 * PI * 0.99f64.sqrt() / (20.0 * PI)).abs() < 1e-4);
        assert!((e.efficiency - e.horizon / e.length).abs() < 1e-12);
    }

    #[test]
    fn planar_input_is_lifted() {
        let pts: Vec<Vec<f64>> = (0..200)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 200.0;
                vec![2.0 * t.cos(), 2.0 * t.sin()]
            })
            .collect();
        let flat = Polyline::from_points(&pts, true).unwrap();
        assert_eq!(horizon(&flat).unwrap().total, horizon(&circle(2.0, 200)).unwrap().total);
        let four = Polyline::from_points(&[vec![0.0; 4], vec![1.0; 4]], false).unwrap();
        assert!(matches!(horizon(&four), Err(Error::UnsupportedDimension { dim: 4, .. })));
    }

    #[test]
    fn crossings_skip_zero_values() {
        let p = [1.0, 0.0, 0.0];
        // Values −1, 0, +1: one crossing through the zero.
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]];
        assert_eq!(crossings(&pts, false, p), 1);
        // Touching the plane and returning is not a crossing.
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        assert_eq!(crossings(&pts, false, p), 0);
    }
}

