//! Polyline curves in `R^n`.
//!
//! A curve is stored as its vertex chain. The constant-speed parameterization
//! is implicit: a parameter is an arclength `s ∈ [0, L]` resolved to a segment
//! index and a fraction along it.

use std::io::{Read, Write};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::{dist, dot, lerp};

/// Default tolerance for geometric coincidence tests.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    dim: usize,
    coords: Vec<f64>,
    closed: bool,
}

impl Polyline {
    /// Builds a polyline from a flat coordinate buffer (`dim` values per vertex).
    pub fn new(dim: usize, coords: Vec<f64>, closed: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidCurve("dimension must be positive".into()));
        }
        if coords.len() % dim != 0 {
            return Err(Error::InvalidCurve(format!(
                "{} coordinates do not split into vertices of dimension {dim}",
                coords.len()
            )));
        }
        let n = coords.len() / dim;
        if n < 2 {
            return Err(Error::InvalidCurve(format!("need at least 2 vertices, got {n}")));
        }
        if let Some(i) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidCurve(format!("non-finite coordinate in vertex {}", i / dim)));
        }
        let poly = Polyline { dim, coords, closed };
        for j in 0..poly.segment_count() {
            let (a, b) = poly.segment(j);
            if a == b {
                return Err(Error::InvalidCurve(format!("segment {j} has zero length")));
            }
        }
        Ok(poly)
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P], closed: bool) -> Result<Self> {
        let dim = points.first().map(|p| p.as_ref().len()).unwrap_or(0);
        let mut coords = Vec::with_capacity(dim * points.len());
        for (i, p) in points.iter().enumerate() {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::InvalidCurve(format!(
                    "vertex {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            coords.extend_from_slice(p);
        }
        Self::new(dim, coords, closed)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = &[f64]> + ExactSizeIterator + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Vertices as 3-vectors; planar curves are lifted to `z = 0`.
    pub fn points3(&self) -> Result<Vec<[f64; 3]>> {
        match self.dim {
            2 => Ok(self.vertices().map(|v| [v[0], v[1], 0.0]).collect()),
            3 => Ok(self.vertices().map(|v| [v[0], v[1], v[2]]).collect()),
            dim => Err(Error::UnsupportedDimension { dim, expected: "2 or 3" }),
        }
    }

    /// Number of segments, including the closing one.
    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.len()
        } else {
            self.len() - 1
        }
    }

    /// Endpoints of segment `j`; for closed curves the last segment wraps to vertex 0.
    #[inline]
    pub fn segment(&self, j: usize) -> (&[f64], &[f64]) {
        (self.vertex(j), self.vertex((j + 1) % self.len()))
    }

    pub fn segment_lengths(&self) -> Vec<f64> {
        (0..self.segment_count())
            .map(|j| {
                let (a, b) = self.segment(j);
                dist(a, b)
            })
            .collect()
    }

    /// Total length, including the closing segment of a closed curve. The
    /// segment lengths are summed in increasing order, so reversal and cyclic
    /// shifts give the same value bit for bit.
    pub fn length(&self) -> f64 {
        let mut l = self.segment_lengths();
        l.sort_by(f64::total_cmp);
        l.iter().sum()
    }

    /// Arclength at the start of each segment, followed by the total length.
    pub fn cumulative_lengths(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.segment_count() + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for l in self.segment_lengths() {
            acc += l;
            out.push(acc);
        }
        out
    }

    /// Point at arclength `s`, clamped to `[0, L]`.
    pub fn point_at(&self, s: f64) -> Vec<f64> {
        let cum = self.cumulative_lengths();
        self.point_at_with(&cum, s)
    }

    pub(crate) fn point_at_with(&self, cum: &[f64], s: f64) -> Vec<f64> {
        let total = *cum.last().unwrap();
        let s = s.clamp(0.0, total);
        let nseg = cum.len() - 1;
        // First segment whose end reaches s.
        let j = cum[1..].partition_point(|&c| c < s).min(nseg - 1);
        let (a, b) = self.segment(j);
        let len = cum[j + 1] - cum[j];
        let t = if len > 0.0 { ((s - cum[j]) / len).clamp(0.0, 1.0) } else { 0.0 };
        lerp(a, b, t)
    }

    pub fn reversed(&self) -> Polyline {
        let mut coords = Vec::with_capacity(self.coords.len());
        for v in self.vertices().rev() {
            coords.extend_from_slice(v);
        }
        Polyline { dim: self.dim, coords, closed: self.closed }
    }

    pub fn scaled(&self, factor: f64) -> Polyline {
        Polyline {
            dim: self.dim,
            coords: self.coords.iter().map(|x| x * factor).collect(),
            closed: self.closed,
        }
    }

    /// Rotates the vertex list of a closed curve so that vertex `k` comes first.
    pub fn cyclic_shift(&self, k: usize) -> Polyline {
        let n = self.len();
        let k = k % n;
        let mut coords = Vec::with_capacity(self.coords.len());
        coords.extend_from_slice(&self.coords[k * self.dim..]);
        coords.extend_from_slice(&self.coords[..k * self.dim]);
        Polyline { dim: self.dim, coords, closed: self.closed }
    }

    /// Open sub-chain from vertex `first` to vertex `last` (inclusive). For a
    /// closed curve `last` may equal `len()`, meaning vertex 0 again.
    pub fn subchain(&self, first: usize, last: usize) -> Result<Polyline> {
        let n = self.len();
        let max = if self.closed { n } else { n - 1 };
        if first >= last || last > max {
            return Err(Error::InvalidArgument(format!(
                "subchain {first}..={last} out of range for {n} vertices"
            )));
        }
        let mut coords = Vec::with_capacity((last - first + 1) * self.dim);
        for i in first..=last {
            coords.extend_from_slice(self.vertex(i % n));
        }
        Ok(Polyline { dim: self.dim, coords, closed: false })
    }

    /// Applies `f` to every vertex, producing a curve of dimension `dim`.
    pub fn map_vertices<F>(&self, dim: usize, mut f: F) -> Result<Polyline>
    where
        F: FnMut(&[f64]) -> Vec<f64>,
    {
        let mut coords = Vec::with_capacity(dim * self.len());
        for v in self.vertices() {
            coords.extend(f(v));
        }
        Polyline::new(dim, coords, self.closed)
    }
}

/// A family of curves sharing one ambient dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveFamily {
    curves: Vec<Polyline>,
    base_point_at_origin: bool,
}

impl CurveFamily {
    pub fn new(curves: Vec<Polyline>, base_point_at_origin: bool) -> Result<Self> {
        let Some(first) = curves.first() else {
            return Err(Error::InvalidArgument("curve family is empty".into()));
        };
        let dim = first.dim();
        if let Some(i) = curves.iter().position(|c| c.dim() != dim) {
            return Err(Error::InvalidArgument(format!("curve {i} has a different dimension")));
        }
        if base_point_at_origin {
            for (i, c) in curves.iter().enumerate() {
                if crate::linalg::norm(c.vertex(0)) > 1e-12 {
                    return Err(Error::InvalidArgument(format!("curve {i} does not start at the origin")));
                }
            }
        }
        Ok(CurveFamily { curves, base_point_at_origin })
    }

    pub fn curves(&self) -> &[Polyline] {
        &self.curves
    }

    pub fn dim(&self) -> usize {
        self.curves[0].dim()
    }

    pub fn base_point_at_origin(&self) -> bool {
        self.base_point_at_origin
    }
}

/// Length of the polyline (closing segment included when closed).
pub fn length(poly: &Polyline) -> f64 {
    poly.length()
}

/// Resamples `poly` to `m` vertices that lie on the input chain, in order, with
/// all consecutive chords equal (the closing chord too, for closed curves).
///
/// The first vertex is kept; for open curves the last one is kept as well.
/// Near sharp bends, or for small `m`, an equal-chord placement may not exist;
/// the placement with the smallest chord spread found is returned instead.
/// A chain that already has `m` vertices and equal chords is returned as is,
/// so the operation is idempotent on its own converged output.
pub fn resample_constant_speed(poly: &Polyline, m: usize) -> Result<Polyline> {
    let min = if poly.is_closed() { 3 } else { 2 };
    if m < min {
        return Err(Error::InvalidArgument(format!(
            "resampling a {} curve needs at least {min} vertices, got {m}",
            if poly.is_closed() { "closed" } else { "open" }
        )));
    }
    if poly.len() == m {
        let chords = poly.segment_lengths();
        let (lo, hi) = chords.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &c| (a.min(c), b.max(c)));
        if hi - lo <= 1e-11 * hi {
            return Ok(poly.clone());
        }
    }
    let chain = ArcChain::new(poly);
    let n = if poly.is_closed() { m } else { m - 1 };
    // Parameters s[0] = 0 and s[n] = L stay fixed; for a closed curve s[n] is
    // vertex 0 again.
    let mut s: Vec<f64> = (0..=n).map(|k| chain.total * k as f64 / n as f64).collect();
    let mut best = (f64::INFINITY, s.clone());

    // Rescale each arclength increment by mean chord / its chord. Robust from
    // equal arclength but slow once a chord straddles a corner.
    for _ in 0..RESCALE_SWEEPS {
        let c = chain.chords(&s);
        let mean = c.iter().sum::<f64>() / n as f64;
        let sp = spread(&c);
        if sp < best.0 {
            best = (sp, s.clone());
        }
        if sp <= RESAMPLE_TOL {
            break;
        }
        let mut ds: Vec<f64> = (0..n)
            .map(|k| (s[k + 1] - s[k]) * if c[k] > 0.0 { (mean / c[k]).sqrt().clamp(0.5, 2.0) } else { 2.0 })
            .collect();
        let norm = chain.total / ds.iter().sum::<f64>();
        ds.iter_mut().for_each(|d| *d *= norm);
        for k in 0..n - 1 {
            s[k + 1] = s[k] + ds[k];
        }
    }

    // Newton on c[k] − c[k+1] = 0 over the interior parameters. Equation k
    // involves s[k], s[k+1], s[k+2] only, so the system is tridiagonal.
    s = best.1.clone();
    for _ in 0..NEWTON_ITERS {
        if best.0 <= RESAMPLE_TOL || n < 2 {
            break;
        }
        let pts: Vec<Vec<f64>> = s.iter().map(|&x| chain.at(x)).collect();
        let c: Vec<f64> = (0..n).map(|k| dist(&pts[k], &pts[k + 1])).collect();
        let u: Vec<Vec<f64>> =
            (0..n).map(|k| pts[k + 1].iter().zip(&pts[k]).map(|(a, b)| (a - b) / c[k]).collect()).collect();
        let tan: Vec<Vec<f64>> = s.iter().map(|&x| chain.tangent(x)).collect();
        let rows = n - 1;
        let mut sub = vec![0.0; rows];
        let mut diag = vec![0.0; rows];
        let mut sup = vec![0.0; rows];
        let mut rhs = vec![0.0; rows];
        for k in 0..rows {
            sub[k] = -dot(&u[k], &tan[k]);
            diag[k] = dot(&u[k], &tan[k + 1]) + dot(&u[k + 1], &tan[k + 1]);
            sup[k] = -dot(&u[k + 1], &tan[k + 2]);
            rhs[k] = c[k + 1] - c[k];
        }
        let Some(delta) = solve_tridiagonal(&sub, &diag, &sup, &rhs) else { break };
        let worst: f64 = rhs.iter().map(|r| r * r).sum();
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let mut trial = s.clone();
            for k in 0..rows {
                trial[k + 1] += lambda * delta[k];
            }
            if trial.windows(2).all(|w| w[1] > w[0]) {
                let tc = chain.chords(&trial);
                let tw: f64 = tc.windows(2).map(|w| (w[0] - w[1]) * (w[0] - w[1])).sum();
                if tw < worst {
                    s = trial;
                    let sp = spread(&tc);
                    if sp < best.0 {
                        best = (sp, s.clone());
                    }
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let pts: Vec<Vec<f64>> = best.1[..m].iter().map(|&x| chain.at(x)).collect();
    Polyline::from_points(&pts, poly.is_closed())
}

const RESCALE_SWEEPS: usize = 200;
const NEWTON_ITERS: usize = 100;
const RESAMPLE_TOL: f64 = 1e-14;

/// Largest deviation from the mean chord, relative to the mean.
fn spread(c: &[f64]) -> f64 {
    let mean = c.iter().sum::<f64>() / c.len() as f64;
    c.iter().fold(0.0f64, |a, &x| a.max((x - mean).abs())) / mean
}

/// Thomas algorithm; `None` on a vanishing pivot.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut piv = diag[0];
    if piv.abs() < 1e-300 {
        return None;
    }
    c[0] = sup[0] / piv;
    d[0] = rhs[0] / piv;
    for i in 1..n {
        piv = diag[i] - sub[i] * c[i - 1];
        if piv.abs() < 1e-300 {
            return None;
        }
        c[i] = sup[i] / piv;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / piv;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Some(d)
}

/// A chain addressed by arclength.
struct ArcChain<'a> {
    poly: &'a Polyline,
    cum: Vec<f64>,
    total: f64,
}

impl<'a> ArcChain<'a> {
    fn new(poly: &'a Polyline) -> Self {
        let cum = poly.cumulative_lengths();
        let total = *cum.last().unwrap();
        ArcChain { poly, cum, total }
    }

    fn at(&self, s: f64) -> Vec<f64> {
        if self.poly.is_closed() && s >= self.total {
            self.poly.vertex(0).to_vec()
        } else {
            self.poly.point_at_with(&self.cum, s)
        }
    }

    /// Unit direction of the segment holding `s`.
    fn tangent(&self, s: f64) -> Vec<f64> {
        let nseg = self.cum.len() - 1;
        let j = self.cum[1..].partition_point(|&c| c < s).min(nseg - 1);
        let (a, b) = self.poly.segment(j);
        let len = self.cum[j + 1] - self.cum[j];
        b.iter().zip(a).map(|(x, y)| (x - y) / len).collect()
    }

    fn chords(&self, s: &[f64]) -> Vec<f64> {
        let pts: Vec<Vec<f64>> = s.iter().map(|&x| self.at(x)).collect();
        pts.windows(2).map(|w| dist(&w[0], &w[1])).collect()
    }
}

/// Arclength parameters where the chain comes within `tol` of the origin at a
/// local minimum of the distance. Sorted ascending; a passage through a shared
/// vertex is reported once.
pub fn origin_passages(poly: &Polyline, tol: f64) -> Vec<f64> {
    let cum = poly.cumulative_lengths();
    let total = *cum.last().unwrap();
    let mut out: Vec<f64> = Vec::new();
    for j in 0..poly.segment_count() {
        let (a, b) = poly.segment(j);
        let ab: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
        let t = (-dot(a, &ab) / dot(&ab, &ab)).clamp(0.0, 1.0);
        let p = lerp(a, b, t);
        if crate::linalg::norm(&p) <= tol {
            let mut s = cum[j] + t * (cum[j + 1] - cum[j]);
            if poly.is_closed() && s >= total {
                s = 0.0;
            }
            out.push(s);
        }
    }
    out.sort_by(f64::total_cmp);
    // Passages through a shared vertex show up on both neighbouring segments.
    let merge = 1e-12 * total.max(1.0);
    out.dedup_by(|a, b| (*a - *b).abs() <= merge);
    if poly.is_closed() && out.len() > 1 && (total - out[out.len() - 1]).abs() <= merge && out[0] == 0.0 {
        out.pop();
    }
    out
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

/// Formats a number with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_point(p: &[f64]) -> String {
    let parts: Vec<String> = p.iter().map(|&x| fmt_num(x)).collect();
    format!("[{}]", parts.join(", "))
}

#[derive(Deserialize)]
struct CurveFile {
    dim: usize,
    closed: bool,
    vertices: Vec<Vec<f64>>,
}

/// Serializes to the curve JSON format:
/// `{ "dim": n, "closed": bool, "vertices": [[x1..xn], ...] }`.
pub fn to_json(poly: &Polyline) -> String {
    let mut out = String::new();
    out.push_str(&format!("{{\n  \"dim\": {},\n  \"closed\": {},\n  \"vertices\": [\n", poly.dim(), poly.is_closed()));
    let n = poly.len();
    for (i, v) in poly.vertices().enumerate() {
        out.push_str("    ");
        out.push_str(&fmt_point(v));
        out.push_str(if i + 1 < n { ",\n" } else { "\n" });
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn from_json(text: &str) -> Result<Polyline> {
    let file: CurveFile = serde_json::from_str(text)?;
    if let Some(i) = file.vertices.iter().position(|v| v.len() != file.dim) {
        return Err(Error::Parse(format!("vertex {i} does not have {} coordinates", file.dim)));
    }
    Polyline::from_points(&file.vertices, file.closed).and_then(|p| {
        if p.dim() == file.dim {
            Ok(p)
        } else {
            Err(Error::Parse("dimension mismatch".into()))
        }
    })
}

pub fn read_json<R: Read>(mut reader: R) -> Result<Polyline> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    from_json(&text)
}

pub fn write_json<W: Write>(mut writer: W, poly: &Polyline) -> Result<()> {
    writer.write_all(to_json(poly).as_bytes())?;
    Ok(())
}

/// CSV with header `x1,...,xn` and one vertex per row. Closedness is not
/// stored in the file and must be supplied by the caller.
pub fn write_csv<W: Write>(writer: W, poly: &Polyline) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let header: Vec<String> = (1..=poly.dim()).map(|i| format!("x{i}")).collect();
    w.write_record(&header)?;
    for v in poly.vertices() {
        w.write_record(v.iter().map(|&x| fmt_num(x)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(reader: R, closed: bool) -> Result<Polyline> {
    let mut r = csv::Reader::from_reader(reader);
    let dim = r.headers()?.len();
    let mut coords = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != dim {
            return Err(Error::Parse(format!("row {} has {} fields, expected {dim}", i + 1, rec.len())));
        }
        for field in rec.iter() {
            let x: f64 = field
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))?;
            coords.push(x);
        }
    }
    Polyline::new(dim, coords, closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn square() -> Polyline {
        Polyline::from_points(&[[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]], true).unwrap()
    }

    #[test]
    fn square_perimeter() {
        assert_eq!(length(&square()), 8.0);
    }

    #[test]
    fn pythagorean_segment() {
        let p = Polyline::from_points(&[[0.0, 0.0, 0.0], [3.0, 4.0, 0.0]], false).unwrap();
        assert_eq!(length(&p), 5.0);
    }

    #[test]
    fn rejects_invalid_chains() {
        assert!(Polyline::from_points(&[[0.0, 0.0]], false).is_err());
        assert!(Polyline::from_points(&[[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]], false).is_err());
        assert!(Polyline::from_points(&[[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]], true).is_err());
        assert!(Polyline::from_points(&[[f64::NAN, 0.0], [1.0, 0.0]], false).is_err());
        assert!(Polyline::new(2, vec![0.0, 1.0, 2.0], false).is_err());
    }

    #[test]
    fn resample_unit_segment() {
        let p = Polyline::from_points(&[[0.0], [1.0]], false).unwrap();
        let r = resample_constant_speed(&p, 3).unwrap();
        let xs: Vec<f64> = r.vertices().map(|v| v[0]).collect();
        assert_eq!(xs[0], 0.0);
        assert!((xs[1] - 0.5).abs() < 1e-15);
        assert_eq!(xs[2], 1.0);
    }

    #[test]
    fn resample_square_eight() {
        let r = resample_constant_speed(&square(), 8).unwrap();
        assert_eq!(r.len(), 8);
        for l in r.segment_lengths() {
            assert!((l - 1.0).abs() < 1e-12, "{l}");
        }
        assert_eq!(r.vertex(0), &[1.0, 1.0]);
    }

    #[test]
    fn resample_minimum_counts() {
        assert!(resample_constant_speed(&square(), 2).is_err());
        let open = Polyline::from_points(&[[0.0], [1.0]], false).unwrap();
        assert!(resample_constant_speed(&open, 1).is_err());
    }

    #[test]
    fn resample_idempotent() {
        let pts: Vec<[f64; 3]> = (0..40)
            .map(|i| {
                let t = i as f64 * 0.3;
                [t.cos() * (1.0 + 0.3 * t), t.sin(), 0.2 * (2.0 * t).sin()]
            })
            .collect();
        let p = Polyline::from_points(&pts, false).unwrap();
        let r1 = resample_constant_speed(&p, 57).unwrap();
        let r2 = resample_constant_speed(&r1, 57).unwrap();
        for (a, b) in r1.vertices().zip(r2.vertices()) {
            assert!(dist(a, b) < 1e-12);
        }
    }

    #[test]
    fn passages_through_segment_interior() {
        let p = Polyline::from_points(&[[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]], false).unwrap();
        assert_eq!(origin_passages(&p, 1e-9), vec![1.0]);
    }

    #[test]
    fn passages_none_for_circle() {
        let pts: Vec<[f64; 3]> = (0..64)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 64.0;
                [2.0 * t.cos(), 2.0 * t.sin(), 0.0]
            })
            .collect();
        let p = Polyline::from_points(&pts, true).unwrap();
        assert!(origin_passages(&p, 1e-9).is_empty());
    }

    #[test]
    fn passage_at_shared_vertex_reported_once() {
        let p = Polyline::from_points(&[[-1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]], false).unwrap();
        let got = origin_passages(&p, 1e-9);
        // Brute-force oracle: densest sampling of the distance to o.
        let cum = p.cumulative_lengths();
        let n = 200_001;
        let (mut best_s, mut best_d) = (0.0, f64::INFINITY);
        for k in 0..n {
            let s = cum[2] * k as f64 / (n - 1) as f64;
            let d = crate::linalg::norm(&p.point_at(s));
            if d < best_d {
                best_d = d;
                best_s = s;
            }
        }
        assert_eq!(got.len(), 1);
        assert!((got[0] - best_s).abs() < 1e-4);
        assert_eq!(got[0], 1.0);
    }

    #[test]
    fn json_roundtrip_is_bit_exact() {
        let p = Polyline::from_points(&[[0.1, -2.0 / 3.0, 1e-300], [PI, 5.0, -0.0]], false).unwrap();
        let text = to_json(&p);
        assert!(text.contains("3.1415926535897931e0"));
        assert_eq!(from_json(&text).unwrap(), p);
    }

    #[test]
    fn csv_roundtrip() {
        let p = square();
        let mut buf = Vec::new();
        write_csv(&mut buf, &p).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x1,x2\n"));
        assert_eq!(read_csv(buf.as_slice(), true).unwrap(), p);
    }

    #[test]
    fn family_requires_origin_base() {
        let a = Polyline::from_points(&[[0.0, 0.0], [1.0, 0.0]], false).unwrap();
        let b = Polyline::from_points(&[[0.1, 0.0], [1.0, 0.0]], false).unwrap();
        assert!(CurveFamily::new(vec![a.clone()], true).is_ok());
        assert!(CurveFamily::new(vec![a, b], true).is_err());
    }
}
