//! Fixed-viewport SVG figures. Coordinates are printed with three decimals so
//! output is byte-stable.

use std::fmt::Write;

use inspectra::optimize::TraceRow;
use inspectra::unfold::{DecompositionReport, SpiralDirection, UnfoldedCurve};

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

struct Canvas {
    body: String,
    /// Data range mapped onto the square `[MARGIN, SIZE − MARGIN]²`.
    lo: [f64; 2],
    hi: [f64; 2],
}

impl Canvas {
    fn square(half: f64) -> Self {
        Canvas { body: String::new(), lo: [-half, -half], hi: [half, half] }
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.lo[0]) / (self.hi[0] - self.lo[0]) * (SIZE - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        SIZE - MARGIN - (v - self.lo[1]) / (self.hi[1] - self.lo[1]) * (SIZE - 2.0 * MARGIN)
    }

    fn polyline(&mut self, pts: &[[f64; 2]], closed: bool, style: &str) {
        if pts.len() < 2 {
            return;
        }
        let tag = if closed { "polygon" } else { "polyline" };
        let mut coords = String::new();
        for (i, p) in pts.iter().enumerate() {
            if i > 0 {
                coords.push(' ');
            }
            write!(coords, "{:.3},{:.3}", self.x(p[0]), self.y(p[1])).unwrap();
        }
        writeln!(self.body, r#"<{tag} points="{coords}" fill="none" {style}/>"#).unwrap();
    }

    fn circle(&mut self, r: f64, style: &str) {
        let scale = (SIZE - 2.0 * MARGIN) / (self.hi[0] - self.lo[0]);
        writeln!(
            self.body,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" {style}/>"#,
            self.x(0.0),
            self.y(0.0),
            r * scale
        )
        .unwrap();
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, s: &str) {
        writeln!(self.body, r#"<text x="{x:.3}" y="{y:.3}" font-size="12" text-anchor="{anchor}">{s}</text>"#).unwrap();
    }

    fn finish(self, title: &str) -> String {
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        )
        .unwrap();
        writeln!(out, "<title>{title}</title>").unwrap();
        writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

/// Orthographic view from azimuth 35° and elevation 20°; returns screen
/// coordinates and depth toward the viewer.
fn project(p: &[f64]) -> ([f64; 2], f64) {
    let (sa, ca) = 35f64.to_radians().sin_cos();
    let (se, ce) = 20f64.to_radians().sin_cos();
    let x = ca * p[0] + sa * p[1];
    let y0 = -sa * p[0] + ca * p[1];
    let z = p[2];
    let up = ce * z - se * y0;
    let depth = ce * y0 + se * z;
    ([x, up], -depth)
}

/// A closed or open curve in R² or R³. Space curves are drawn with the unit
/// sphere outline; parts behind the sphere's centre plane are dashed.
pub fn curve_figure(points: &[Vec<f64>], closed: bool) -> String {
    let half = points.iter().map(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt()).fold(1.0, f64::max) * 1.1;
    let mut c = Canvas::square(half);
    c.circle(1.0, r##"stroke="#999999" stroke-width="1""##);
    let mut pts: Vec<Vec<f64>> = points.to_vec();
    if closed && !pts.is_empty() {
        pts.push(pts[0].clone());
    }
    if points.first().map_or(0, |p| p.len()) == 2 {
        let flat: Vec<[f64; 2]> = pts.iter().map(|p| [p[0], p[1]]).collect();
        c.polyline(&flat, false, r##"stroke="#1f4e9c" stroke-width="1.5""##);
        return c.finish("curve");
    }
    // Split into runs by the sign of the depth.
    let mut run: Vec<[f64; 2]> = Vec::new();
    let mut front = None;
    for p in &pts {
        let (q, d) = project(p);
        let f = d >= 0.0;
        if front.is_some_and(|g| g != f) {
            run.push(q);
            draw_run(&mut c, &run, front.unwrap());
            run = vec![q];
        } else {
            run.push(q);
        }
        front = Some(f);
    }
    if let Some(f) = front {
        draw_run(&mut c, &run, f);
    }
    c.finish("curve")
}

fn draw_run(c: &mut Canvas, run: &[[f64; 2]], front: bool) {
    let style = if front {
        r##"stroke="#1f4e9c" stroke-width="1.5""##
    } else {
        r##"stroke="#1f4e9c" stroke-width="1" stroke-dasharray="4 3" opacity="0.6""##
    };
    c.polyline(run, false, style);
}

/// The planar unfolding with the unit circle; spirals coloured by direction,
/// the residual in grey.
pub fn unfolded_figure(unf: &UnfoldedCurve, report: &DecompositionReport) -> String {
    let pts = unf.planar_points();
    let half = unf.radii().iter().copied().fold(1.0, f64::max) * 1.1;
    let mut c = Canvas::square(half);
    c.circle(1.0, r##"stroke="#999999" stroke-width="1""##);
    c.polyline(pts, false, r##"stroke="#bbbbbb" stroke-width="1""##);
    for s in &report.spirals {
        let (a, b) = s.span();
        let colour = match s.direction {
            SpiralDirection::Forward => "#1f4e9c",
            SpiralDirection::Reversed => "#c0581b",
        };
        c.polyline(&pts[a..=b], false, &format!(r#"stroke="{colour}" stroke-width="2""#));
    }
    c.finish("unfolded curve")
}

/// Length against trace row, with the first and last lengths labelled.
pub fn trace_figure(rows: &[TraceRow]) -> String {
    let n = rows.len().max(2) as f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for r in rows {
        lo = lo.min(r.length);
        hi = hi.max(r.length);
    }
    if !(hi > lo) {
        lo -= 1.0;
        hi += 1.0;
    }
    let mut c = Canvas { body: String::new(), lo: [0.0, lo], hi: [n - 1.0, hi] };
    let axes = [[0.0, lo], [0.0, hi]];
    c.polyline(&axes, false, r##"stroke="#000000" stroke-width="1""##);
    c.polyline(&[[0.0, lo], [n - 1.0, lo]], false, r##"stroke="#000000" stroke-width="1""##);
    let pts: Vec<[f64; 2]> = rows.iter().enumerate().map(|(i, r)| [i as f64, r.length]).collect();
    c.polyline(&pts, false, r##"stroke="#1f4e9c" stroke-width="1""##);
    let (x0, y_lo, y_hi) = (c.x(0.0), c.y(lo), c.y(hi));
    c.text(x0 - 4.0, y_lo, "end", &format!("{lo:.4}"));
    c.text(x0 - 4.0, y_hi + 10.0, "end", &format!("{hi:.4}"));
    c.text(c.x(n - 1.0), y_lo + 16.0, "end", &format!("{} rows", rows.len()));
    c.finish("optimizer trace: length")
}
