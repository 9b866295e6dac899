//! Length minimization under the inspection constraint, and the chord
//! structure check for candidate minimizers.
//!
//! The merit function is `L(x) + w·Σ_u max(0, 1 − h_u(x))²` over a sampled
//! direction set, where `h_u(x) = max_i ⟨x_i, u⟩` is the support function of
//! the vertex set. Each stage runs steepest descent with backtracking on the
//! merit for one weight `w`. After a stage the most violated directions found
//! by support minimax are appended. The last step scales the curve radially
//! by the smallest facet offset of its hull, so the returned curve contains
//! the unit sphere.

use std::io::Write;

use serde::Serialize;

use crate::curve::{resample_constant_speed, Polyline};
use crate::error::{Error, Result};
use crate::generate::baseball_distance;
use crate::hull::{contains_unit_sphere_with, convex_hull_3d, support_local_minima, MinimaxOptions, PointCloud};
use crate::linalg::{dot3, norm3, sub3};
use crate::{par, rng, sphere};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub vertex_count: usize,
    pub penalty_directions: usize,
    pub penalty_weights: Vec<f64>,
    /// Descent iterations per penalty stage.
    pub max_iters: usize,
    /// Largest vertex displacement per step.
    pub step: f64,
    pub seed: u64,
    pub tol_feasibility: f64,
    /// Vertices are re-equalized every this many accepted steps; 0 never.
    pub resample_every: usize,
    /// Directions appended per refinement.
    pub refine_directions: usize,
    /// Refinement runs every this many accepted steps and after each stage.
    pub refine_every: usize,
    /// Directions used for the final containment check.
    pub check_directions: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            vertex_count: 200,
            penalty_directions: 2000,
            penalty_weights: vec![10.0, 100.0, 1000.0, 10_000.0],
            max_iters: 1500,
            step: 1e-2,
            seed: 0,
            tol_feasibility: 1e-6,
            resample_every: 100,
            refine_directions: 32,
            refine_every: 5,
            check_directions: 10_000,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.vertex_count < 4
            || self.penalty_directions == 0
            || self.max_iters == 0
            || self.refine_every == 0
            || self.check_directions == 0
        {
            return Err(Error::InvalidArgument("optimizer counts must be positive (at least 4 vertices)".into()));
        }
        if self.penalty_weights.is_empty()
            || self.penalty_weights[0] <= 0.0
            || self.penalty_weights.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::InvalidArgument("penalty weights must be positive and strictly increasing".into()));
        }
        if !(self.step > 0.0) || !(self.tol_feasibility >= 0.0) {
            return Err(Error::InvalidArgument("step must be positive and tolerance nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceEvent {
    Step,
    Rejected,
    Resample,
    Refine,
    Inflate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub stage: usize,
    pub iteration: usize,
    pub length: f64,
    /// Smallest `h_u − 1` over the current direction set.
    pub worst_slack: f64,
    pub merit: f64,
    pub step: f64,
    pub event: TraceEvent,
}

impl TraceRow {
    pub fn accepted(&self) -> bool {
        self.event == TraceEvent::Step
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerTrace {
    pub rows: Vec<TraceRow>,
    #[serde(skip)]
    pub final_curve: Polyline,
    pub initial_length: f64,
    pub final_length: f64,
    /// `min_u h(u) − 1` of the final curve, from the facets of its hull.
    pub final_slack: f64,
    pub direction_count: usize,
}

impl OptimizerTrace {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["stage", "iteration", "length", "worst_slack", "merit", "step", "event"])?;
        for r in &self.rows {
            let event = match r.event {
                TraceEvent::Step => "step",
                TraceEvent::Rejected => "rejected",
                TraceEvent::Resample => "resample",
                TraceEvent::Refine => "refine",
                TraceEvent::Inflate => "inflate",
            };
            w.write_record([
                r.stage.to_string(),
                r.iteration.to_string(),
                crate::curve::fmt_num(r.length),
                crate::curve::fmt_num(r.worst_slack),
                crate::curve::fmt_num(r.merit),
                crate::curve::fmt_num(r.step),
                event.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Smallest `max_v ⟨v, u⟩ − 1` over the given directions.
pub fn feasibility_slack(poly: &Polyline, directions: &[Vec<f64>]) -> Result<f64> {
    if directions.is_empty() {
        return Err(Error::InvalidArgument("direction set is empty".into()));
    }
    if directions.iter().any(|d| d.len() != poly.dim()) {
        return Err(Error::InvalidArgument("direction dimension differs from the curve".into()));
    }
    let cloud = PointCloud::from_polyline(poly);
    let mins = par::map_chunks(directions.len(), 64, |r| {
        r.map(|i| cloud.support(&directions[i]).0).fold(f64::INFINITY, f64::min)
    });
    Ok(mins.into_iter().fold(f64::INFINITY, f64::min) - 1.0)
}

/// Vertex positions of a closed curve in R³, flat.
struct State {
    x: Vec<f64>,
}

impl State {
    fn n(&self) -> usize {
        self.x.len() / 3
    }

    fn p(&self, i: usize) -> [f64; 3] {
        [self.x[3 * i], self.x[3 * i + 1], self.x[3 * i + 2]]
    }

    fn length(&self) -> f64 {
        let n = self.n();
        (0..n).map(|i| norm3(sub3(self.p((i + 1) % n), self.p(i)))).sum()
    }

    fn polyline(&self) -> Result<Polyline> {
        Polyline::new(3, self.x.clone(), true)
    }
}

struct Merit {
    value: f64,
    length: f64,
    worst_slack: f64,
}

/// Support value and arg-max vertex for each direction.
fn supports(state: &State, dirs: &[[f64; 3]]) -> Vec<(f64, usize)> {
    let n = state.n();
    par::map_chunks(dirs.len(), 128, |r| {
        r.map(|k| {
            let u = dirs[k];
            let mut best = (f64::NEG_INFINITY, 0);
            for i in 0..n {
                let v = dot3(state.p(i), u);
                if v > best.0 {
                    best = (v, i);
                }
            }
            best
        })
        .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

fn merit(state: &State, dirs: &[[f64; 3]], weight: f64) -> Merit {
    let length = state.length();
    let sup = supports(state, dirs);
    let mut pen = 0.0;
    let mut worst = f64::INFINITY;
    for &(h, _) in &sup {
        worst = worst.min(h - 1.0);
        if h < 1.0 {
            pen += (1.0 - h) * (1.0 - h);
        }
    }
    Merit { value: length + weight * pen, length, worst_slack: worst }
}

fn merit_gradient(state: &State, dirs: &[[f64; 3]], weight: f64) -> Vec<f64> {
    let n = state.n();
    let mut g = vec![0.0; 3 * n];
    for i in 0..n {
        let a = state.p(i);
        let next = state.p((i + 1) % n);
        let d = sub3(next, a);
        let l = norm3(d);
        for k in 0..3 {
            let t = d[k] / l;
            g[3 * i + k] -= t;
            g[3 * ((i + 1) % n) + k] += t;
        }
    }
    for (u, (h, i)) in dirs.iter().zip(supports(state, dirs)) {
        if h < 1.0 {
            let c = -2.0 * weight * (1.0 - h);
            for k in 0..3 {
                g[3 * i + k] += c * u[k];
            }
        }
    }
    g
}

/// `min_u h(u)` over the unit sphere: the smallest facet offset of the hull,
/// which is exact when o is interior and negative otherwise. Flat vertex sets
/// fall back to sampled directions with minimax refinement.
fn global_min_support(poly: &Polyline, directions: usize, seed: u64) -> Result<f64> {
    match convex_hull_3d(&poly.points3()?) {
        Ok(hull) => Ok(hull.facets.iter().map(|f| f.offset).fold(f64::INFINITY, f64::min)),
        Err(Error::DegenerateHull { .. }) => {
            Ok(1.0 + contains_unit_sphere_with(&PointCloud::from_polyline(poly), directions, seed)?.min_slack)
        }
        Err(e) => Err(e),
    }
}

/// Makes a closed curve usable as a starting point: resampled to
/// `vertex_count` equal chords, bent out of any plane through o, and scaled so
/// its hull contains the unit sphere.
fn prepare(init: &Polyline, cfg: &OptimizerConfig) -> Result<Polyline> {
    if !init.is_closed() {
        return Err(Error::InvalidCurve("optimizer needs a closed curve".into()));
    }
    if init.dim() != 3 {
        return Err(Error::UnsupportedDimension { dim: init.dim(), expected: "3" });
    }
    let mut poly = resample_constant_speed(init, cfg.vertex_count)?;
    let mut h = global_min_support(&poly, cfg.check_directions, cfg.seed)?;
    if h <= 1e-6 * PointCloud::from_polyline(&poly).max_norm() {
        // Flat or origin on the boundary: add a seeded low-frequency bend.
        let scale = PointCloud::from_polyline(&poly).max_norm();
        let n = poly.len();
        let mut s = rng::stream(cfg.seed, u64::MAX);
        let modes: Vec<[f64; 6]> = (0..3)
            .map(|_| {
                let mut m = [0.0; 6];
                m.iter_mut().for_each(|x| *x = s.normal());
                m
            })
            .collect();
        let mut i = 0;
        poly = poly.map_vertices(3, |v| {
            i += 1;
            let t = 2.0 * std::f64::consts::PI * (i - 1) as f64 / n as f64;
            let mut out = [v[0], v[1], v[2]];
            for (k, m) in modes.iter().enumerate() {
                let (sk, ck) = (((k + 1) as f64) * t).sin_cos();
                for d in 0..3 {
                    out[d] += 0.5 * scale / (k + 1) as f64 * (m[d] * ck + m[d + 3] * sk);
                }
            }
            out.to_vec()
        })?;
        h = global_min_support(&poly, cfg.check_directions, cfg.seed)?;
        if h <= 0.0 {
            return Err(Error::OriginNotInterior { value: h });
        }
    }
    if h < 1.0 {
        poly = poly.scaled(1.0 / h);
    }
    Ok(poly)
}

/// Refined directions closer than this cosine to a kept one are dropped.
const REFINE_SEPARATION: f64 = 1.0 - 1e-6;

/// Appends up to `cfg.refine_directions` directions where the support
/// function of the current vertices has a local minimum below 1, most
/// violated first.
fn refine(state: &State, dirs: &mut Vec<[f64; 3]>, cfg: &OptimizerConfig, key: u64) -> Result<()> {
    let cloud = PointCloud::from_points(&state.x.chunks_exact(3).collect::<Vec<_>>())?;
    let opts = MinimaxOptions {
        restarts: 2 * cfg.refine_directions,
        seed: rng::stream(cfg.seed, key).next_u64(),
        ..Default::default()
    };
    // Normals of the lowest facets are the deepest gaps of the hull.
    let mut starts: Vec<(f64, Vec<f64>)> = match convex_hull_3d(&state.polyline()?.points3()?) {
        Ok(hull) => hull.facets.into_iter().filter(|f| f.offset < 1.0).map(|f| (f.offset, f.normal)).collect(),
        Err(_) => Vec::new(),
    };
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let starts: Vec<Vec<f64>> = starts.into_iter().take(cfg.refine_directions).map(|(_, n)| n).collect();
    let mut minima = support_local_minima(&cloud, opts, &starts);
    minima.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut added: Vec<[f64; 3]> = Vec::new();
    for m in minima.iter().filter(|m| m.value < 1.0) {
        let u = [m.direction[0], m.direction[1], m.direction[2]];
        if added.iter().chain(dirs.iter()).all(|v| dot3(*v, u) < REFINE_SEPARATION) {
            added.push(u);
        }
        if added.len() == cfg.refine_directions {
            break;
        }
    }
    dirs.extend(added);
    Ok(())
}

/// Penalized steepest descent on length; see the module docs.
///
/// `step` is the largest vertex displacement of a trial move. The direction
/// set is refined every `refine_every` accepted steps and at the end of each
/// stage; vertices are re-equalized every `resample_every` accepted steps.
pub fn shorten(init: &Polyline, cfg: &OptimizerConfig) -> Result<OptimizerTrace> {
    cfg.validate()?;
    let start = prepare(init, cfg)?;
    let initial_length = start.length();
    let rot = sphere::random_rotation(cfg.seed);
    let mut dirs: Vec<[f64; 3]> =
        sphere::fibonacci(cfg.penalty_directions).into_iter().map(|u| sphere::rotate(&rot, u)).collect();
    let mut state = State { x: start.coords().to_vec() };
    let mut rows = Vec::new();
    let mut refinements = 0u64;
    let mut step = cfg.step;

    for (stage, &weight) in cfg.penalty_weights.iter().enumerate() {
        step = step.max(cfg.step * 1e-3).min(cfg.step);
        let mut current = merit(&state, &dirs, weight);
        let mut since_resample = 0;
        for iteration in 0..cfg.max_iters {
            let g = merit_gradient(&state, &dirs, weight);
            let gmax = g.chunks_exact(3).map(|v| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()).fold(0.0, f64::max);
            if gmax < 1e-12 {
                break;
            }
            let mut accepted = false;
            while step > 1e-12 {
                let scale = step / gmax;
                let trial = State { x: state.x.iter().zip(&g).map(|(x, d)| x - scale * d).collect() };
                let m = merit(&trial, &dirs, weight);
                if m.value < current.value {
                    state = trial;
                    current = m;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            rows.push(TraceRow {
                stage,
                iteration,
                length: current.length,
                worst_slack: current.worst_slack,
                merit: current.value,
                step,
                event: if accepted { TraceEvent::Step } else { TraceEvent::Rejected },
            });
            if !accepted {
                break;
            }
            step = (step * 1.2).min(cfg.step);
            if current.length > 10.0 * initial_length {
                let trace = OptimizerTrace {
                    rows,
                    final_curve: state.polyline()?,
                    initial_length,
                    final_length: current.length,
                    final_slack: current.worst_slack,
                    direction_count: dirs.len(),
                };
                return Err(Error::Divergence {
                    length: current.length,
                    initial: initial_length,
                    trace: Box::new(trace),
                });
            }
            since_resample += 1;
            if (iteration + 1) % cfg.refine_every == 0 {
                refinements += 1;
                let before = dirs.len();
                refine(&state, &mut dirs, cfg, refinements)?;
                if dirs.len() > before {
                    current = merit(&state, &dirs, weight);
                    rows.push(TraceRow {
                        stage,
                        iteration,
                        length: current.length,
                        worst_slack: current.worst_slack,
                        merit: current.value,
                        step,
                        event: TraceEvent::Refine,
                    });
                }
            }
            if cfg.resample_every > 0 && since_resample == cfg.resample_every {
                since_resample = 0;
                let poly = resample_constant_speed(&state.polyline()?, cfg.vertex_count)?;
                state = State { x: poly.coords().to_vec() };
                current = merit(&state, &dirs, weight);
                rows.push(TraceRow {
                    stage,
                    iteration,
                    length: current.length,
                    worst_slack: current.worst_slack,
                    merit: current.value,
                    step,
                    event: TraceEvent::Resample,
                });
            }
        }
        refinements += 1;
        refine(&state, &mut dirs, cfg, refinements)?;
    }

    let mut poly = state.polyline()?;
    let h = global_min_support(&poly, cfg.check_directions, cfg.seed)?;
    if h < 1.0 {
        if h <= 0.0 {
            return Err(Error::OriginNotInterior { value: h });
        }
        poly = poly.scaled(1.0 / h);
        let last = cfg.penalty_weights.len() - 1;
        let scaled = State { x: poly.coords().to_vec() };
        let m = merit(&scaled, &dirs, cfg.penalty_weights[last]);
        rows.push(TraceRow {
            stage: last,
            iteration: cfg.max_iters,
            length: m.length,
            worst_slack: m.worst_slack,
            merit: m.value,
            step: 0.0,
            event: TraceEvent::Inflate,
        });
    }
    let final_slack = global_min_support(&poly, cfg.check_directions, cfg.seed)? - 1.0;
    Ok(OptimizerTrace {
        rows,
        initial_length,
        final_length: poly.length(),
        final_slack,
        final_curve: poly,
        direction_count: dirs.len(),
    })
}

// ---------------------------------------------------------------------------
// Chord structure
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InteriorRun {
    /// First and last interior vertex of the run.
    pub first: usize,
    pub last: usize,
    /// Boundary vertices bracketing the run.
    pub from: usize,
    pub to: usize,
    /// Largest distance of a run vertex to the chord `from → to`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChordReport {
    pub runs: Vec<InteriorRun>,
    pub max_residual: f64,
}

/// Depth below which a vertex counts as lying on the hull boundary.
pub const INTERIOR_DEPTH: f64 = 1e-6;

/// Finds maximal runs of vertices strictly inside the hull and measures how
/// far each run is from the straight chord joining the boundary vertices on
/// either side.
pub fn chord_structure_diagnostic(poly: &Polyline) -> Result<ChordReport> {
    let pts = poly.points3()?;
    let hull = convex_hull_3d(&pts)?;
    let n = pts.len();
    let interior: Vec<bool> = pts.iter().map(|p| hull.min_slack(p) > INTERIOR_DEPTH).collect();
    let mut runs = Vec::new();
    if interior.iter().all(|&b| b) {
        return Err(Error::InvalidCurve("no vertex lies on the hull boundary".into()));
    }
    // Walk from a boundary vertex so runs never wrap past the start.
    let origin = if poly.is_closed() { interior.iter().position(|&b| !b).unwrap() } else { 0 };
    let count = if poly.is_closed() { n } else { n };
    let mut k = 0;
    while k < count {
        let i = (origin + k) % n;
        if !interior[i] {
            k += 1;
            continue;
        }
        let first_k = k;
        while k < count && interior[(origin + k) % n] {
            k += 1;
        }
        let first = (origin + first_k) % n;
        let last = (origin + k - 1) % n;
        let closed = poly.is_closed();
        let from = if closed || first_k > 0 { Some((origin + first_k + n - 1) % n) } else { None };
        let to = if closed || k < n { Some((origin + k) % n) } else { None };
        let residual = match (from, to) {
            (Some(a), Some(b)) => (first_k..k)
                .map(|j| point_line_distance(pts[(origin + j) % n], pts[a], pts[b]))
                .fold(0.0, f64::max),
            _ => 0.0,
        };
        runs.push(InteriorRun { first, last, from: from.unwrap_or(first), to: to.unwrap_or(last), residual });
    }
    let max_residual = runs.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(ChordReport { runs, max_residual })
}

fn point_line_distance(p: [f64; 3], a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = sub3(b, a);
    let l2 = dot3(d, d);
    let q = sub3(p, a);
    if l2 == 0.0 {
        return norm3(q);
    }
    let t = dot3(q, d) / l2;
    norm3(sub3(q, [t * d[0], t * d[1], t * d[2]]))
}

/// Symmetric Hausdorff distance from `poly` to the best rotation of the
/// baseball curve found by seeded random search.
pub fn baseball_hausdorff(poly: &Polyline, seed: u64) -> Result<f64> {
    let pts = poly.points3()?;
    let reference: Vec<[f64; 3]> = crate::generate::baseball(100)?.points3()?;
    let one_sided = |rot: &[[f64; 3]; 3]| {
        // Rotating the curve by Rᵀ is rotating the baseball by R.
        pts.iter()
            .map(|&p| {
                let q = [
                    rot[0][0] * p[0] + rot[1][0] * p[1] + rot[2][0] * p[2],
                    rot[0][1] * p[0] + rot[1][1] * p[1] + rot[2][1] * p[2],
                    rot[0][2] * p[0] + rot[1][2] * p[1] + rot[2][2] * p[2],
                ];
                baseball_distance(q)
            })
            .fold(0.0, f64::max)
    };
    let candidates = par::map_indexed(256, |i| {
        let r = sphere::random_rotation(rng::stream(seed, i as u64).next_u64());
        (one_sided(&r), r)
    });
    let (mut best, mut rot) = candidates.into_iter().fold((f64::INFINITY, sphere::random_rotation(0)), |a, b| {
        if b.0 < a.0 {
            b
        } else {
            a
        }
    });
    // Local refinement by small random rotations with a shrinking radius.
    let mut s = rng::stream(seed, u64::MAX);
    let mut radius = 0.2;
    for _ in 0..600 {
        let axis = s.unit_vector(3);
        let angle = radius * (2.0 * s.uniform() - 1.0);
        let step = axis_angle([axis[0], axis[1], axis[2]], angle);
        let trial = matmul(&step, &rot);
        let v = one_sided(&trial);
        if v < best {
            best = v;
            rot = trial;
        } else {
            radius = (radius * 0.99).max(1e-4);
        }
    }
    // Baseball to curve, using the curve's segments.
    let n = pts.len();
    let back = reference
        .iter()
        .map(|&p| {
            let q = sphere::rotate(&rot, p);
            (0..n).map(|j| point_segment_distance(q, pts[j], pts[(j + 1) % n])).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    Ok(best.max(back))
}

fn point_segment_distance(p: [f64; 3], a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = sub3(b, a);
    let q = sub3(p, a);
    let t = (dot3(q, d) / dot3(d, d)).clamp(0.0, 1.0);
    norm3(sub3(q, [t * d[0], t * d[1], t * d[2]]))
}

fn axis_angle(k: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [c + k[0] * k[0] * t, k[0] * k[1] * t - k[2] * s, k[0] * k[2] * t + k[1] * s],
        [k[1] * k[0] * t + k[2] * s, c + k[1] * k[1] * t, k[1] * k[2] * t - k[0] * s],
        [k[2] * k[0] * t - k[1] * s, k[2] * k[1] * t + k[0] * s, c + k[2] * k[2] * t],
    ]
}

fn matmul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}
