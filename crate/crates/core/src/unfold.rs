//! Planar unfolding of space curves and its spiral decomposition.
//!
//! The unfolding keeps the distance to o and the arclength, and replaces the
//! direction `γ/|γ|` by a planar angle that grows by the angle each segment
//! subtends at o. Each segment of the source is mapped to a congruent planar
//! segment, because the triangle `(o, A, B)` is rebuilt with the same two
//! sides and the same angle at o. Through o the curve continues on the
//! opposite ray, recorded by the branch index.

use std::f64::consts::PI;

use serde::Serialize;

use crate::curve::{origin_passages, Polyline, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::horizon::segment_horizon;
use crate::linalg::{angle_between, dist, dot, norm};
use crate::par;

/// Radii at or below this are treated as the origin.
const ORIGIN_EPS: f64 = 1e-12;

/// Angular tolerance for the orthogonal-start test.
pub const START_ANGLE_TOL: f64 = 1e-6;

/// Minimum radius increase for a segment to count as strictly monotone.
const STRICT_STEP: f64 = 1e-12;

/// Tolerance of the sign tests in the local convexity certificate.
const SIGN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnfoldedCurve {
    radii: Vec<f64>,
    angles: Vec<f64>,
    branch: Vec<i64>,
    planar: Vec<[f64; 2]>,
    /// Source vertex behind each unfolded vertex; `None` for an inserted origin.
    source_index: Vec<Option<usize>>,
    #[serde(skip)]
    source: Vec<Vec<f64>>,
}

impl UnfoldedCurve {
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Cumulative angle θ at each vertex.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn branch_index(&self) -> &[i64] {
        &self.branch
    }

    pub fn planar_points(&self) -> &[[f64; 2]] {
        &self.planar
    }

    pub fn source_index(&self) -> &[Option<usize>] {
        &self.source_index
    }

    /// Source points aligned with the unfolded vertices (inserted origins
    /// included).
    pub fn aligned_source(&self) -> &[Vec<f64>] {
        &self.source
    }

    pub fn segment_lengths(&self) -> Vec<f64> {
        self.planar.windows(2).map(|w| dist(&w[0], &w[1])).collect()
    }

    pub fn length(&self) -> f64 {
        self.segment_lengths().iter().sum()
    }

    /// The planar curve as an open polyline in R².
    pub fn to_polyline(&self) -> Result<Polyline> {
        Polyline::from_points(&self.planar, false)
    }

    /// Horizon of each planar segment, lifted to `R² × {0}`.
    pub fn segment_horizons(&self) -> Vec<f64> {
        let p = &self.planar;
        par::map_indexed(p.len() - 1, |j| segment_horizon([p[j][0], p[j][1], 0.0], [p[j + 1][0], p[j + 1][1], 0.0]))
    }
}

/// Unfolds `poly` into the plane. Closed curves are first rotated to start at
/// the vertex of smallest radius (lowest index on ties) and the unfolding
/// ends at the image of that vertex after the closing segment.
pub fn unfold(poly: &Polyline) -> Result<UnfoldedCurve> {
    let n = poly.len();
    let start = if poly.is_closed() {
        (0..n)
            .min_by(|&a, &b| norm(poly.vertex(a)).total_cmp(&norm(poly.vertex(b))).then(a.cmp(&b)))
            .unwrap_or(0)
    } else {
        0
    };
    let shifted = if start == 0 { poly.clone() } else { poly.cyclic_shift(start) };
    let original = |i: usize| (i + start) % n;

    // Origin passages: vertices within tolerance are snapped, interior
    // passages get an inserted origin vertex.
    let cum = shifted.cumulative_lengths();
    let mut snap = vec![false; n];
    let mut insert = vec![false; shifted.segment_count()];
    for s in origin_passages(&shifted, DEFAULT_TOL) {
        let j = match cum.windows(2).position(|w| s <= w[1]) {
            Some(j) => j,
            None => cum.len() - 2,
        };
        let seg = cum[j + 1] - cum[j];
        if s - cum[j] <= DEFAULT_TOL {
            snap[j] = true;
        } else if cum[j + 1] - s <= DEFAULT_TOL {
            snap[(j + 1) % n] = true;
        } else if seg > 0.0 {
            insert[j] = true;
        }
    }
    for (i, v) in shifted.vertices().enumerate() {
        if norm(v) <= ORIGIN_EPS {
            snap[i] = true;
        }
    }

    let dim = poly.dim();
    let mut source: Vec<Vec<f64>> = Vec::new();
    let mut source_index: Vec<Option<usize>> = Vec::new();
    let mut at_origin: Vec<bool> = Vec::new();
    let mut push = |i: usize| {
        source.push(shifted.vertex(i).to_vec());
        source_index.push(Some(original(i)));
        at_origin.push(snap[i]);
    };
    push(0);
    for j in 0..shifted.segment_count() {
        if insert[j] {
            source.push(vec![0.0; dim]);
            source_index.push(None);
            at_origin.push(true);
        }
        let next = (j + 1) % n;
        source.push(shifted.vertex(next).to_vec());
        source_index.push(Some(original(next)));
        at_origin.push(snap[next]);
    }

    let m = source.len();
    let mut radii = Vec::with_capacity(m);
    let mut angles = Vec::with_capacity(m);
    let mut branch = Vec::with_capacity(m);
    let (mut theta, mut k) = (0.0f64, 1i64);
    for idx in 0..m {
        let here = at_origin[idx];
        if idx > 0 {
            let prev = at_origin[idx - 1];
            match (prev, here) {
                (true, true) => {
                    return Err(Error::InvalidCurve(format!(
                        "segment ending at vertex {idx} has both endpoints at the origin"
                    )))
                }
                (false, true) => k += 1,
                (true, false) => {}
                (false, false) => theta += angle_between(&source[idx - 1], &source[idx]),
            }
        }
        radii.push(if here { 0.0 } else { norm(&source[idx]) });
        angles.push(theta);
        branch.push(k);
    }
    let planar = radii
        .iter()
        .zip(&angles)
        .zip(&branch)
        .map(|((&r, &t), &b)| {
            let phase = t + (b - 1) as f64 * PI;
            [r * phase.cos(), r * phase.sin()]
        })
        .collect();
    for (s, &o) in source.iter_mut().zip(&at_origin) {
        if o {
            s.iter_mut().for_each(|x| *x = 0.0);
        }
    }
    Ok(UnfoldedCurve { radii, angles, branch, planar, source_index, source })
}

/// Largest mismatch, over segments, between the radial speed
/// `(ρ_{j+1} − ρ_j)/chord` and the cosine of the angle between the chord and
/// the position of its midpoint, on both the source and the unfolded curve,
/// and between the two cosines.
pub fn verify_alpha(poly: &Polyline, unf: &UnfoldedCurve) -> Result<f64> {
    let referenced = unf.source_index.iter().flatten().copied();
    let distinct = {
        let mut v: Vec<usize> = referenced.collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    if distinct.len() != poly.len() || distinct.last().is_some_and(|&i| i >= poly.len()) {
        return Err(Error::InvalidArgument(format!(
            "unfolding covers {} source vertices, curve has {}",
            distinct.len(),
            poly.len()
        )));
    }
    let src: Vec<Vec<f64>> = unf
        .source_index
        .iter()
        .zip(&unf.radii)
        .map(|(i, &r)| match i {
            Some(i) if r > 0.0 => poly.vertex(*i).to_vec(),
            _ => vec![0.0; poly.dim()],
        })
        .collect();
    let planar: Vec<Vec<f64>> = unf.planar.iter().map(|p| p.to_vec()).collect();
    let mut worst = 0.0f64;
    for j in 0..unf.len() - 1 {
        let a = alpha_pair(&src[j], &src[j + 1]);
        let b = alpha_pair(&planar[j], &planar[j + 1]);
        worst = worst.max((a.0 - a.1).abs()).max((b.0 - b.1).abs()).max((a.1 - b.1).abs());
    }
    Ok(worst)
}

/// `(radial speed, cos of angle between midpoint position and chord)`.
fn alpha_pair(a: &[f64], b: &[f64]) -> (f64, f64) {
    let chord: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let c = norm(&chord);
    let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
    let speed = (norm(b) - norm(a)) / c;
    let m = norm(&mid);
    let cos = if m > 0.0 { dot(&mid, &chord) / (m * c) } else { speed };
    (speed, cos)
}

// ---------------------------------------------------------------------------
// Spiral decomposition
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpiralDirection {
    Forward,
    Reversed,
}

/// How the start of a spiral was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StartCondition {
    /// Start radius within tolerance of zero.
    AtOrigin,
    /// First chord orthogonal to the start position within the angular
    /// tolerance, or not pointing outward past the line orthogonal to it.
    Orthogonal,
    /// Interior vertex where the radius has a discrete local minimum.
    RadialMinimum,
    Unverified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpiralSegment {
    /// Vertex where the radius is smallest.
    pub start_index: usize,
    pub end_index: usize,
    pub direction: SpiralDirection,
    pub strict: bool,
    pub start_radius: f64,
    pub end_radius: f64,
    pub start_condition: StartCondition,
}

impl SpiralSegment {
    /// Vertex range in curve order.
    pub fn span(&self) -> (usize, usize) {
        (self.start_index.min(self.end_index), self.start_index.max(self.end_index))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "index")]
pub enum Piece {
    Spiral(usize),
    Residual,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyTerm {
    pub piece: Piece,
    pub length: f64,
    pub horizon: f64,
    pub efficiency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateFailure {
    pub spiral: usize,
    pub vertex: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub spirals: Vec<SpiralSegment>,
    /// Segment indices (segment `j` joins vertices `j` and `j + 1`).
    pub residual_indices: Vec<usize>,
    pub efficiency_terms: Vec<EfficiencyTerm>,
    pub identity_residual: f64,
    pub total_length: f64,
    pub total_horizon: f64,
    pub certificate_failures: Vec<CertificateFailure>,
}

#[derive(Clone, Copy, PartialEq)]
enum Trend {
    Up,
    Down,
    Flat,
}

fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub2(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn start_condition(unf: &UnfoldedCurve, start: usize, next: usize, other: Option<usize>, tol: f64) -> StartCondition {
    let r = &unf.radii;
    if r[start] <= tol {
        return StartCondition::AtOrigin;
    }
    if let Some(o) = other {
        if r[o] >= r[start] {
            return StartCondition::RadialMinimum;
        }
    }
    let p = unf.planar[start];
    let c = sub2(unf.planar[next], p);
    let (pn, cn) = ((p[0] * p[0] + p[1] * p[1]).sqrt(), (c[0] * c[0] + c[1] * c[1]).sqrt());
    let along = (p[0] * c[0] + p[1] * c[1]) / (pn * cn);
    if along.abs() <= START_ANGLE_TOL.sin() || along <= tol {
        return StartCondition::Orthogonal;
    }
    StartCondition::Unverified
}

/// Splits the unfolded curve into maximal runs of strictly monotone radius.
/// Runs of decreasing radius are reported reversed so every spiral is read
/// outward. Segments with a radius change of at most 1e-12 go to the
/// residual piece. Each run is checked for local convexity with respect to o;
/// failures are listed in the report rather than raised.
pub fn spiral_decomposition(unf: &UnfoldedCurve, tol: f64) -> DecompositionReport {
    let nseg = unf.len().saturating_sub(1);
    let r = &unf.radii;
    let trend: Vec<Trend> = (0..nseg)
        .map(|j| {
            let d = r[j + 1] - r[j];
            if d > STRICT_STEP {
                Trend::Up
            } else if d < -STRICT_STEP {
                Trend::Down
            } else {
                Trend::Flat
            }
        })
        .collect();

    let mut spirals = Vec::new();
    let mut residual = Vec::new();
    let mut failures = Vec::new();
    let mut j = 0;
    while j < nseg {
        if trend[j] == Trend::Flat {
            residual.push(j);
            j += 1;
            continue;
        }
        let t = trend[j];
        let first = j;
        while j < nseg && trend[j] == t {
            j += 1;
        }
        let (lo, hi) = (first, j);
        let (start, end, direction, next, other) = match t {
            Trend::Up => (lo, hi, SpiralDirection::Forward, lo + 1, lo.checked_sub(1)),
            _ => (hi, lo, SpiralDirection::Reversed, hi - 1, (hi + 1 < unf.len()).then_some(hi + 1)),
        };
        let id = spirals.len();
        let cond = start_condition(unf, start, next, other, tol);
        if cond == StartCondition::Unverified {
            failures.push(CertificateFailure { spiral: id, vertex: start, reason: "start not orthogonal".into() });
        }
        for v in lo + 1..hi {
            if let Some(reason) = convexity_violation(unf, v) {
                failures.push(CertificateFailure { spiral: id, vertex: v, reason });
            }
        }
        spirals.push(SpiralSegment {
            start_index: start,
            end_index: end,
            direction,
            strict: true,
            start_radius: r[start],
            end_radius: r[end],
            start_condition: cond,
        });
    }

    let lengths = unf.segment_lengths();
    let horizons = unf.segment_horizons();
    let total_length: f64 = lengths.iter().sum();
    let total_horizon: f64 = horizons.iter().sum();
    let mut terms: Vec<EfficiencyTerm> = spirals
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let (a, b) = s.span();
            term(Piece::Spiral(i), &lengths[a..b], &horizons[a..b])
        })
        .collect();
    if !residual.is_empty() {
        let l: Vec<f64> = residual.iter().map(|&j| lengths[j]).collect();
        let h: Vec<f64> = residual.iter().map(|&j| horizons[j]).collect();
        terms.push(term(Piece::Residual, &l, &h));
    }
    let pieces: f64 = terms.iter().map(|t| t.horizon).sum();
    DecompositionReport {
        spirals,
        residual_indices: residual,
        efficiency_terms: terms,
        identity_residual: (total_horizon - pieces).abs(),
        total_length,
        total_horizon,
        certificate_failures: failures,
    }
}

fn term(piece: Piece, lengths: &[f64], horizons: &[f64]) -> EfficiencyTerm {
    let length: f64 = lengths.iter().sum();
    let horizon: f64 = horizons.iter().sum();
    EfficiencyTerm { piece, length, horizon, efficiency: if length > 0.0 { horizon / length } else { 0.0 } }
}

/// Local convexity with respect to o at vertex `v`: the curve turns toward o,
/// and o lies on the curve's side of the line through `v` along the mean of
/// the two chord directions.
fn convexity_violation(unf: &UnfoldedCurve, v: usize) -> Option<String> {
    let p = unf.planar[v];
    if unf.radii[v] <= ORIGIN_EPS {
        return None;
    }
    let a = sub2(p, unf.planar[v - 1]);
    let b = sub2(unf.planar[v + 1], p);
    let (na, nb) = ((a[0] * a[0] + a[1] * a[1]).sqrt(), (b[0] * b[0] + b[1] * b[1]).sqrt());
    let (ua, ub) = ([a[0] / na, a[1] / na], [b[0] / nb, b[1] / nb]);
    let turn = cross2(ua, ub);
    if turn < -SIGN_TOL {
        return Some(format!("turns away from the origin ({turn:.3e})"));
    }
    let t = [ua[0] + ub[0], ua[1] + ub[1]];
    let tn = (t[0] * t[0] + t[1] * t[1]).sqrt();
    let side = cross2([p[0] / unf.radii[v], p[1] / unf.radii[v]], [t[0] / tn, t[1] / tn]);
    if side < -SIGN_TOL {
        return Some(format!("origin outside the support line ({side:.3e})"));
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PieceCheck {
    pub piece: Piece,
    pub efficiency: f64,
    /// `efficiency ≤ 2 + tol`.
    pub pass: bool,
    /// Set for spirals starting strictly inside the unit circle, where the
    /// efficiency must be strictly below 2.
    pub strict_expected: bool,
    pub strict_pass: Option<bool>,
}

/// Checks every piece of a decomposition against the efficiency bound 2.
pub fn spiral_efficiency_check(report: &DecompositionReport, tol: f64) -> Vec<PieceCheck> {
    par::map_indexed(report.efficiency_terms.len(), |i| {
        let t = &report.efficiency_terms[i];
        let strict_expected = match t.piece {
            Piece::Spiral(s) => report.spirals[s].start_radius < 1.0 - tol,
            Piece::Residual => false,
        };
        PieceCheck {
            piece: t.piece,
            efficiency: t.efficiency,
            pass: t.efficiency <= 2.0 + tol,
            strict_expected,
            strict_pass: strict_expected.then_some(t.efficiency < 2.0),
        }
    })
}
