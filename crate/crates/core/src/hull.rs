//! Convex hulls, inradius and support-function minimax.
//!
//! * [`convex_hull_3d`] enumerates the facets of a point set in R³ by
//!   incremental insertion.
//! * [`chebyshev_inradius`] solves `max ρ s.t. ⟨u_f, x⟩ + ρ ≤ b_f` exactly with
//!   the in-crate simplex solver.
//! * [`origin_inradius_minimax`] bounds the origin-centred inradius in any
//!   dimension by minimizing the support function `h(u) = max_v ⟨v, u⟩` over
//!   unit vectors. The returned value is `h` evaluated exactly at the returned
//!   direction, so it is a certified upper bound.

use std::collections::{HashMap, HashSet, VecDeque};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::curve::{fmt_num, Polyline};
use crate::error::{Error, Result};
use crate::linalg::{cross, dot, dot3, norm, norm3, sub3};
use crate::lp::{self, LpOptions, LpOutcome};
use crate::{par, rng, sphere};

/// Tolerance used for the containment verdict of [`contains_unit_sphere`].
pub const CONTAINMENT_TOL: f64 = 1e-7;

/// Default number of minimax restarts.
pub const DEFAULT_RESTARTS: usize = 64;

/// Default number of descent iterations per restart.
pub const DEFAULT_ITERS: usize = 150;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Half-space description `⟨normal, x⟩ ≤ offset` of a convex hull.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullFacets {
    pub dim: usize,
    pub facets: Vec<Facet>,
}

impl HullFacets {
    /// Smallest slack `b_f − ⟨u_f, p⟩` over all facets.
    pub fn min_slack(&self, p: &[f64]) -> f64 {
        self.facets
            .iter()
            .map(|f| f.offset - dot(&f.normal, p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Hull export: `{ "dim": n, "facets": [{"normal": [...], "offset": b}, ...] }`.
    pub fn to_json(&self) -> String {
        let mut out = format!("{{\n  \"dim\": {},\n  \"facets\": [\n", self.dim);
        for (i, f) in self.facets.iter().enumerate() {
            let normal: Vec<String> = f.normal.iter().map(|&x| fmt_num(x)).collect();
            out.push_str(&format!(
                "    {{\"normal\": [{}], \"offset\": {}}}{}\n",
                normal.join(", "),
                fmt_num(f.offset),
                if i + 1 < self.facets.len() { "," } else { "" }
            ));
        }
        out.push_str("  ]\n}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let h: HullFacets = serde_json::from_str(text)?;
        if h.facets.iter().any(|f| f.normal.len() != h.dim) {
            return Err(Error::Parse("facet normal dimension mismatch".into()));
        }
        Ok(h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InradiusKind {
    Exact,
    LowerBound,
    UpperBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InradiusResult {
    pub radius: f64,
    pub center: Vec<f64>,
    pub kind: InradiusKind,
    pub witness_direction: Option<Vec<f64>>,
}

/// A finite point set in `R^dim`, stored flat.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.is_empty() || coords.len() % dim != 0 {
            return Err(Error::InvalidArgument("point cloud needs at least one point of positive dimension".into()));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        Ok(PointCloud { dim, coords })
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let dim = points.first().map(|p| p.as_ref().len()).unwrap_or(0);
        if points.iter().any(|p| p.as_ref().len() != dim) {
            return Err(Error::InvalidArgument("points of mixed dimension".into()));
        }
        Self::new(dim, points.iter().flat_map(|p| p.as_ref().iter().copied()).collect())
    }

    pub fn from_polyline(poly: &Polyline) -> Self {
        PointCloud { dim: poly.dim(), coords: poly.coords().to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Support function `h(u) = max ⟨p, u⟩` and the lowest index attaining it.
    pub fn support(&self, u: &[f64]) -> (f64, usize) {
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0;
        for (i, p) in self.points().enumerate() {
            let v = dot(p, u);
            if v > best {
                best = v;
                arg = i;
            }
        }
        (best, arg)
    }

    pub fn max_norm(&self) -> f64 {
        self.points().map(norm).fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> PointCloud {
        PointCloud { dim: self.dim, coords: self.coords.iter().map(|x| x * factor).collect() }
    }
}

/// Affine rank of a point set (numerical, relative tolerance 1e-10).
pub fn affine_rank(points: &PointCloud) -> usize {
    let n = points.len();
    let d = points.dim();
    if n < 2 {
        return 0;
    }
    let base = points.point(0);
    let m = DMatrix::from_fn(n - 1, d, |r, c| points.point(r + 1)[c] - base[c]);
    let sv = m.singular_values();
    let top = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-10 * top).count()
}

// ---------------------------------------------------------------------------
// 3D hull
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct Tri {
    v: [usize; 3],
    n: [f64; 3],
    off: f64,
    alive: bool,
}

/// Triangulated boundary of the hull: triangles as vertex indices into the
/// input, oriented counter-clockwise when seen from outside.
#[derive(Debug, Clone)]
pub struct HullMesh {
    pub triangles: Vec<[usize; 3]>,
    pub normals: Vec<[f64; 3]>,
}

impl HullMesh {
    /// Indices of input points that are vertices of the hull.
    pub fn extreme_points(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.triangles.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn make_tri(pts: &[[f64; 3]], a: usize, b: usize, c: usize) -> Tri {
    let n = cross(sub3(pts[b], pts[a]), sub3(pts[c], pts[a]));
    let len = norm3(n);
    let n = if len > 0.0 { [n[0] / len, n[1] / len, n[2] / len] } else { [0.0, 0.0, 0.0] };
    Tri { v: [a, b, c], n, off: dot3(n, pts[a]), alive: true }
}

/// Incremental 3D hull returning the triangulated boundary.
pub fn hull_mesh_3d(pts: &[[f64; 3]]) -> Result<HullMesh> {
    let cloud = PointCloud::from_points(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>())?;
    let rank = affine_rank(&cloud);
    if rank < 3 {
        return Err(Error::DegenerateHull { rank, dim: 3 });
    }
    let scale = cloud.max_norm().max(f64::MIN_POSITIVE);
    let eps = 1e-11 * scale;

    // Initial tetrahedron from extreme choices.
    let i0 = (0..pts.len()).min_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0])).unwrap();
    let far = |from: &dyn Fn(usize) -> f64| (0..pts.len()).max_by(|&a, &b| from(a).total_cmp(&from(b))).unwrap();
    let i1 = far(&|i| norm3(sub3(pts[i], pts[i0])));
    let e01 = sub3(pts[i1], pts[i0]);
    let i2 = far(&|i| norm3(cross(e01, sub3(pts[i], pts[i0]))));
    let n012 = cross(e01, sub3(pts[i2], pts[i0]));
    let i3 = far(&|i| dot3(n012, sub3(pts[i], pts[i0])).abs());
    let above = dot3(n012, sub3(pts[i3], pts[i0])) > 0.0;
    let (a, b, c, d) = if above { (i0, i2, i1, i3) } else { (i0, i1, i2, i3) };
    // With (a,b,c) oriented away from d, the remaining faces follow.
    let mut tris = vec![
        make_tri(pts, a, b, c),
        make_tri(pts, a, d, b),
        make_tri(pts, b, d, c),
        make_tri(pts, c, d, a),
    ];
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    for (t, tri) in tris.iter().enumerate() {
        for k in 0..3 {
            edges.insert((tri.v[k], tri.v[(k + 1) % 3]), t);
        }
    }
    let seeds: HashSet<usize> = [a, b, c, d].into_iter().collect();
    let mut alive_list: Vec<usize> = (0..4).collect();

    for (p, &pt) in pts.iter().enumerate() {
        if seeds.contains(&p) {
            continue;
        }
        // Most visible facet.
        let mut best = (f64::NEG_INFINITY, usize::MAX);
        for &t in &alive_list {
            let h = dot3(tris[t].n, pt) - tris[t].off;
            if h > best.0 {
                best = (h, t);
            }
        }
        if best.0 <= eps {
            continue;
        }
        // Visible region grown across edges from the most visible facet.
        let mut visible: HashSet<usize> = HashSet::new();
        let mut queue = VecDeque::from([best.1]);
        visible.insert(best.1);
        while let Some(t) = queue.pop_front() {
            let v = tris[t].v;
            for k in 0..3 {
                let nb = edges[&(v[(k + 1) % 3], v[k])];
                if !visible.contains(&nb) && dot3(tris[nb].n, pt) - tris[nb].off > eps {
                    visible.insert(nb);
                    queue.push_back(nb);
                }
            }
        }
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        let mut vis_sorted: Vec<usize> = visible.iter().copied().collect();
        vis_sorted.sort_unstable();
        for &t in &vis_sorted {
            let v = tris[t].v;
            for k in 0..3 {
                let (ea, eb) = (v[k], v[(k + 1) % 3]);
                let nb = edges[&(eb, ea)];
                if !visible.contains(&nb) {
                    horizon.push((ea, eb));
                }
            }
        }
        for &t in &vis_sorted {
            tris[t].alive = false;
            let v = tris[t].v;
            for k in 0..3 {
                edges.remove(&(v[k], v[(k + 1) % 3]));
            }
        }
        for (ea, eb) in horizon {
            let t = tris.len();
            tris.push(make_tri(pts, ea, eb, p));
            edges.insert((ea, eb), t);
            edges.insert((eb, p), t);
            edges.insert((p, ea), t);
            alive_list.push(t);
        }
        alive_list.retain(|&t| tris[t].alive);
    }

    let mut triangles = Vec::new();
    let mut normals = Vec::new();
    for t in alive_list {
        triangles.push(tris[t].v);
        normals.push(tris[t].n);
    }
    Ok(HullMesh { triangles, normals })
}

/// Facets of the convex hull of `points` in R³. Coplanar triangles of the
/// boundary are merged into one facet; offsets are the exact maxima of
/// `⟨u_f, p⟩` over the input, so every facet supports the input and every
/// input point satisfies every constraint.
pub fn convex_hull_3d(points: &[[f64; 3]]) -> Result<HullFacets> {
    if points.len() < 4 {
        return Err(Error::DegenerateHull { rank: points.len().saturating_sub(1), dim: 3 });
    }
    let mesh = hull_mesh_3d(points)?;
    let nt = mesh.triangles.len();

    // Union coplanar neighbours.
    let mut parent: Vec<usize> = (0..nt).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            owner.insert((tri[k], tri[(k + 1) % 3]), t);
        }
    }
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            if let Some(&s) = owner.get(&(tri[(k + 1) % 3], tri[k])) {
                let (nt_, ns) = (mesh.normals[t], mesh.normals[s]);
                if norm3(sub3(nt_, ns)) < 1e-9 {
                    let (rt, rs) = (find(&mut parent, t), find(&mut parent, s));
                    if rt != rs {
                        parent[rt.max(rs)] = rt.min(rs);
                    }
                }
            }
        }
    }
    // Representative normal: the largest-area triangle of each group.
    let area = |t: usize| {
        let [a, b, c] = mesh.triangles[t];
        norm3(cross(sub3(points[b], points[a]), sub3(points[c], points[a])))
    };
    let mut rep: HashMap<usize, usize> = HashMap::new();
    for t in 0..nt {
        let r = find(&mut parent, t);
        let e = rep.entry(r).or_insert(t);
        if area(t) > area(*e) {
            *e = t;
        }
    }
    let mut groups: Vec<(usize, usize)> = rep.into_iter().collect();
    groups.sort_unstable();
    let facets = groups
        .into_iter()
        .filter(|&(_, t)| area(t) > 0.0)
        .map(|(_, t)| {
            let n = mesh.normals[t];
            let offset = points.iter().map(|&p| dot3(n, p)).fold(f64::NEG_INFINITY, f64::max);
            Facet { normal: n.to_vec(), offset }
        })
        .collect();
    Ok(HullFacets { dim: 3, facets })
}

/// Largest ball inside the hull (Chebyshev centre), by linear programming.
pub fn chebyshev_inradius(hull: &HullFacets) -> Result<InradiusResult> {
    if hull.facets.is_empty() {
        return Err(Error::MalformedHull("no facets".into()));
    }
    let d = hull.dim;
    let rows: Vec<Vec<f64>> = hull
        .facets
        .iter()
        .map(|f| {
            let mut r = f.normal.clone();
            r.push(1.0);
            r
        })
        .collect();
    let h: Vec<f64> = hull.facets.iter().map(|f| f.offset).collect();
    let mut c = vec![0.0; d + 1];
    c[d] = 1.0;
    // x = 0 with ρ = min b_f is always feasible.
    let mut start = vec![0.0; d + 1];
    start[d] = h.iter().copied().fold(f64::INFINITY, f64::min);
    match lp::maximize(&c, &rows, &h, &start, LpOptions::default()) {
        LpOutcome::Unbounded => Err(Error::MalformedHull("inradius program is unbounded".into())),
        LpOutcome::Optimal { z, .. } => {
            let radius = z[d];
            if radius < -1e-12 {
                return Err(Error::MalformedHull("facets bound an empty region".into()));
            }
            Ok(InradiusResult {
                radius: radius.max(0.0),
                center: z[..d].to_vec(),
                kind: InradiusKind::Exact,
                witness_direction: None,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Support-function minimax on the unit sphere
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaxOptions {
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
}

impl Default for MinimaxOptions {
    fn default() -> Self {
        MinimaxOptions { restarts: DEFAULT_RESTARTS, iters: DEFAULT_ITERS, seed: rng::DEFAULT_SEED }
    }
}

/// Best direction found and the exact support value there.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportMinimum {
    pub direction: Vec<f64>,
    pub value: f64,
}

fn normalize_in_place(u: &mut [f64]) {
    let n = norm(u);
    u.iter_mut().for_each(|x| *x /= n);
}

/// Smoothed maximum `τ log Σ exp(⟨p,u⟩/τ)` and its gradient in `u`.
fn soft_support(points: &PointCloud, u: &[f64], tau: f64, grad: &mut [f64]) -> f64 {
    let (m, _) = points.support(u);
    let mut z = 0.0;
    grad.iter_mut().for_each(|g| *g = 0.0);
    // Terms below e^−50 relative to the maximum do not change the sum.
    let cutoff = -50.0 * tau;
    for p in points.points() {
        let d = dot(p, u) - m;
        if d < cutoff {
            continue;
        }
        let w = (d / tau).exp();
        z += w;
        grad.iter_mut().zip(p).for_each(|(g, x)| *g += w * x);
    }
    grad.iter_mut().for_each(|g| *g /= z);
    m + tau * z.ln()
}

/// Moves `u` to a direction where `dim` affinely independent points tie, i.e.
/// the normal of a candidate facet, when that lowers the support value.
fn polish(points: &PointCloud, u: &[f64], value: f64) -> Option<(Vec<f64>, f64)> {
    let d = points.dim();
    let mut order: Vec<(f64, usize)> = points.points().enumerate().map(|(i, p)| (dot(p, u), i)).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let window = (4 * d + 8).min(order.len());
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for &(_, i) in &order[..window] {
        let mut w = points.point(i).to_vec();
        for b in &basis {
            let k = dot(&w, b);
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= k * y);
        }
        let n = norm(&w);
        if n > 1e-9 * norm(points.point(i)).max(1e-300) && n > 1e-14 {
            w.iter_mut().for_each(|x| *x /= n);
            basis.push(w);
            chosen.push(i);
            if chosen.len() == d {
                break;
            }
        }
    }
    if chosen.len() < d {
        return None;
    }
    let a = DMatrix::from_fn(d, d, |r, c| points.point(chosen[r])[c]);
    let w = a.lu().solve(&DVector::from_element(d, 1.0))?;
    let w: Vec<f64> = w.iter().copied().collect();
    if dot(&w, u) <= 0.0 || !w.iter().all(|x| x.is_finite()) {
        return None;
    }
    let mut cand = w;
    normalize_in_place(&mut cand);
    let (h, _) = points.support(&cand);
    (h < value).then_some((cand, h))
}

/// Local minimization of the support function from `u0`: annealed smooth
/// maximum with backtracking steps, then facet polishing.
fn descend(points: &PointCloud, u0: &[f64], iters: usize) -> SupportMinimum {
    let d = points.dim();
    let scale = points.max_norm().max(f64::MIN_POSITIVE);
    let mut u = u0.to_vec();
    normalize_in_place(&mut u);
    let (mut best_h, _) = points.support(&u);
    let mut best_u = u.clone();

    let tau0 = 0.05 * scale;
    let tau_end = 1e-7 * scale;
    let mut grad = vec![0.0; d];
    let mut trial_grad = vec![0.0; d];
    let mut eta = 0.25;
    for it in 0..iters {
        let tau = tau0 * (tau_end / tau0).powf(it as f64 / iters.max(1) as f64);
        let f = soft_support(points, &u, tau, &mut grad);
        let radial = dot(&grad, &u);
        let mut gt: Vec<f64> = grad.iter().zip(&u).map(|(g, x)| g - radial * x).collect();
        let gn = norm(&gt);
        if gn <= 1e-15 * scale {
            continue;
        }
        gt.iter_mut().for_each(|x| *x /= gn);
        loop {
            let mut cand: Vec<f64> = u.iter().zip(&gt).map(|(x, g)| x - eta * g).collect();
            normalize_in_place(&mut cand);
            let fc = soft_support(points, &cand, tau, &mut trial_grad);
            if fc < f {
                u = cand;
                eta = (eta * 1.5).min(0.5);
                break;
            }
            eta *= 0.5;
            if eta < 1e-13 {
                eta = 1e-6;
                break;
            }
        }
        let (h, _) = points.support(&u);
        if h < best_h {
            best_h = h;
            best_u.clone_from(&u);
        }
    }
    for _ in 0..8 {
        match polish(points, &best_u, best_h) {
            Some((u, h)) => {
                best_u = u;
                best_h = h;
            }
            None => break,
        }
    }
    SupportMinimum { direction: best_u, value: best_h }
}

/// Local minima of `h(u)` reached from each start, in start order. Restart
/// `i` starts from a direction keyed by `(opts.seed, i)`; `extra_starts` are
/// tried after them.
pub fn support_local_minima(points: &PointCloud, opts: MinimaxOptions, extra_starts: &[Vec<f64>]) -> Vec<SupportMinimum> {
    let d = points.dim();
    if d == 1 {
        let (hp, _) = points.support(&[1.0]);
        let (hm, _) = points.support(&[-1.0]);
        return vec![
            SupportMinimum { direction: vec![1.0], value: hp },
            SupportMinimum { direction: vec![-1.0], value: hm },
        ];
    }
    let total = opts.restarts + extra_starts.len();
    par::map_indexed(total, |i| {
        let start = if i < opts.restarts {
            rng::stream(opts.seed, i as u64).unit_vector(d)
        } else {
            extra_starts[i - opts.restarts].clone()
        };
        descend(points, &start, opts.iters)
    })
}

/// Multi-start minimization of `h(u)` over the unit sphere; ties go to the
/// lowest start index.
pub fn minimize_support(points: &PointCloud, opts: MinimaxOptions, extra_starts: &[Vec<f64>]) -> SupportMinimum {
    support_local_minima(points, opts, extra_starts)
        .into_iter()
        .reduce(|best, r| if r.value < best.value { r } else { best })
        .expect("at least one start")
}

/// Origin-centred inradius bound `min_u max_p ⟨p, u⟩` (an upper bound; exact
/// whenever the global minimum is found).
pub fn origin_inradius_minimax(points: &PointCloud, restarts: usize, iters: usize) -> Result<InradiusResult> {
    origin_inradius_minimax_with(points, MinimaxOptions { restarts, iters, ..Default::default() })
}

pub fn origin_inradius_minimax_with(points: &PointCloud, opts: MinimaxOptions) -> Result<InradiusResult> {
    if opts.restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let best = minimize_support(points, opts, &[]);
    if best.value <= 0.0 {
        return Err(Error::OriginNotInterior { value: best.value });
    }
    Ok(InradiusResult {
        radius: best.value,
        center: vec![0.0; points.dim()],
        kind: InradiusKind::UpperBound,
        witness_direction: Some(best.direction),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Containment {
    pub contains: bool,
    /// Smallest `h(u) − 1` found.
    pub min_slack: f64,
    pub worst_direction: Vec<f64>,
}

/// Tests whether the hull of `points` contains the unit sphere centred at the
/// origin: samples `directions` directions, then refines the worst ones (and a
/// few random restarts) by minimax descent.
pub fn contains_unit_sphere(points: &PointCloud, directions: usize) -> Result<Containment> {
    contains_unit_sphere_with(points, directions, rng::DEFAULT_SEED)
}

pub fn contains_unit_sphere_with(points: &PointCloud, directions: usize, seed: u64) -> Result<Containment> {
    if directions == 0 {
        return Err(Error::InvalidArgument("at least one direction is required".into()));
    }
    let dirs = sphere::direction_set(points.dim(), directions, seed);
    let values: Vec<(f64, usize)> = par::map_chunks(dirs.len(), 256, |r| {
        r.map(|i| (points.support(&dirs[i]).0, i)).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let mut ranked = values.clone();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let (mut worst, mut worst_dir) = (ranked[0].0, dirs[ranked[0].1].clone());
    if points.dim() > 1 {
        let starts: Vec<Vec<f64>> = ranked.iter().take(8).map(|&(_, i)| dirs[i].clone()).collect();
        let refined = minimize_support(
            points,
            MinimaxOptions { restarts: 16, iters: DEFAULT_ITERS, seed },
            &starts,
        );
        if refined.value < worst {
            worst = refined.value;
            worst_dir = refined.direction;
        }
    }
    let min_slack = worst - 1.0;
    Ok(Containment { contains: min_slack >= -CONTAINMENT_TOL, min_slack, worst_direction: worst_dir })
}
