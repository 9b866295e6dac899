//! Checks of the main inequalities on concrete curves, with the measured
//! values, tolerances and verdicts collected in one report.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::curve::Polyline;
use crate::error::{Error, Result};
use crate::horizon::horizon;
use crate::hull::{chebyshev_inradius, contains_unit_sphere_with, convex_hull_3d, origin_inradius_minimax_with, MinimaxOptions, PointCloud};
use crate::unfold::{spiral_decomposition, spiral_efficiency_check, unfold, Piece, StartCondition};

/// Slack allowed in `L/r ≥ 4π` for sampled curves.
pub const MAIN_TOL: f64 = 0.02;
pub const HORIZON_TOL: f64 = 1e-6;
pub const SPIRAL_TOL: f64 = 1e-3;
pub const IDENTITY_TOL: f64 = 1e-6;
/// Directions sampled when checking that a hull contains the unit sphere.
pub const CONTAINMENT_DIRECTIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    Main,
    HorizonLower,
    Spiral,
    Appendix,
}

/// `lhs ≥ rhs − tolerance` (or `≤` when `upper` is set).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub upper: bool,
    pub pass: bool,
}

impl Inequality {
    pub fn at_least(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Inequality { name: name.into(), lhs, rhs, tolerance, upper: false, pass: lhs >= rhs - tolerance }
    }

    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Inequality { name: name.into(), lhs, rhs, tolerance, upper: true, pass: lhs <= rhs + tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub theorem: Theorem,
    pub checks: Vec<Inequality>,
    /// Measured quantities that are reported but not asserted.
    pub values: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl VerifyReport {
    fn new(theorem: Theorem, checks: Vec<Inequality>, values: Vec<(&str, f64)>, notes: Vec<String>) -> Self {
        let values = values.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        let pass = checks.iter().all(|c| c.pass);
        VerifyReport { theorem, checks, values, notes, pass }
    }
}

fn closed_space_curve(poly: &Polyline) -> Result<Vec<[f64; 3]>> {
    if !poly.is_closed() {
        return Err(Error::InvalidCurve("the check applies to closed curves".into()));
    }
    poly.points3()
}

/// `L ≥ 4π·r` with `r` the Chebyshev inradius of the hull.
pub fn verify_main(poly: &Polyline) -> Result<VerifyReport> {
    let pts = closed_space_curve(poly)?;
    let r = chebyshev_inradius(&convex_hull_3d(&pts)?)?.radius;
    let length = poly.length();
    let checks = vec![Inequality::at_least("length / inradius >= 4 pi", length / r, 4.0 * PI, MAIN_TOL)];
    let values = vec![
        ("length", length),
        ("inradius", r),
        ("length / (4 pi inradius)", length / (4.0 * PI * r)),
    ];
    Ok(VerifyReport::new(Theorem::Main, checks, values, Vec::new()))
}

/// `H ≥ 8π` for a closed curve whose hull contains the unit sphere. The
/// containment hypothesis is checked first and reported as its own line.
pub fn verify_horizon_lower(poly: &Polyline, seed: u64) -> Result<VerifyReport> {
    closed_space_curve(poly)?;
    let c = contains_unit_sphere_with(&PointCloud::from_polyline(poly), CONTAINMENT_DIRECTIONS, seed)?;
    let h = horizon(poly)?.total;
    let checks = vec![
        Inequality::at_least("min support >= 1 (hull contains the unit sphere)", 1.0 + c.min_slack, 1.0, crate::hull::CONTAINMENT_TOL),
        Inequality::at_least("horizon >= 8 pi", h, 8.0 * PI, HORIZON_TOL),
    ];
    let values = vec![("horizon", h), ("length", poly.length()), ("efficiency", h / poly.length())];
    Ok(VerifyReport::new(Theorem::HorizonLower, checks, values, Vec::new()))
}

/// Unfolds the curve, decomposes it into spirals and checks `E ≤ 2` on every
/// certified spiral together with the decomposition identity.
pub fn verify_spiral(poly: &Polyline) -> Result<VerifyReport> {
    let unf = unfold(poly)?;
    let report = spiral_decomposition(&unf, 1e-9);
    let mut checks = vec![Inequality::at_most(
        "decomposition identity residual",
        report.identity_residual,
        0.0,
        IDENTITY_TOL,
    )];
    let mut notes = Vec::new();
    for check in spiral_efficiency_check(&report, SPIRAL_TOL) {
        let Piece::Spiral(i) = check.piece else { continue };
        let s = &report.spirals[i];
        let failed = report.certificate_failures.iter().any(|f| f.spiral == i);
        if failed || s.start_condition == StartCondition::Unverified {
            notes.push(format!("spiral {i} (vertices {}..{}) is not certified; not checked", s.span().0, s.span().1));
            continue;
        }
        checks.push(Inequality::at_most(format!("efficiency of spiral {i} <= 2"), check.efficiency, 2.0, SPIRAL_TOL));
    }
    let values = vec![
        ("spirals", report.spirals.len() as f64),
        ("total length", report.total_length),
        ("total horizon", report.total_horizon),
    ];
    Ok(VerifyReport::new(Theorem::Spiral, checks, values, notes))
}

/// Constant for `L ≥ C·n√n·r` obtained from the segment constant `c`:
/// a curve of length `2m√m` in `R^{2m}` has a direction with all
/// `⟨γ, u⟩ ≤ c`, so `L/(N√N·r) ≥ 1/(√2·c)` in even dimension `N`.
pub fn appendix_constant(c: f64) -> f64 {
    1.0 / (std::f64::consts::SQRT_2 * c)
}

/// `L ≥ C·n√n·r` with `r` the origin-centred inradius found by minimax.
/// Odd dimensions use `C/2`.
pub fn verify_appendix(poly: &Polyline, constant: f64, seed: u64) -> Result<VerifyReport> {
    let n = poly.dim();
    if n < 2 {
        return Err(Error::UnsupportedDimension { dim: n, expected: "at least 2" });
    }
    let r = origin_inradius_minimax_with(&PointCloud::from_polyline(poly), MinimaxOptions { restarts: 64, seed, ..Default::default() })?
        .radius;
    let length = poly.length();
    let nf = n as f64;
    let ratio = length / (nf * nf.sqrt() * r);
    let c = if n % 2 == 0 { constant } else { constant / 2.0 };
    let checks = vec![Inequality::at_least("length / (n sqrt(n) inradius) >= C", ratio, c, 0.0)];
    let values = vec![("length", length), ("inradius", r), ("n", nf)];
    let notes = vec!["inradius is the origin-centred value min_u max_t <gamma(t), u>".to_string()];
    Ok(VerifyReport::new(Theorem::Appendix, checks, values, notes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::highdim::{cross_polytope_curve, DEFAULT_C};

    #[test]
    fn baseball_main() {
        let r = verify_main(&generate::baseball(500).unwrap()).unwrap();
        assert!(r.pass);
        assert!((r.values["length / (4 pi inradius)"] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn shrunken_curve_fails_horizon_hypothesis() {
        let b = generate::baseball(100).unwrap();
        let r = verify_horizon_lower(&b.scaled(1.02), 0).unwrap();
        assert!(r.pass, "{r:?}");
        let r = verify_horizon_lower(&b.scaled(0.9), 0).unwrap();
        assert!(!r.pass);
        assert!(!r.checks[0].pass);
    }

    #[test]
    fn cross_polytope_appendix() {
        let p = cross_polytope_curve(6, false).unwrap();
        let r = verify_appendix(&p, appendix_constant(DEFAULT_C), 0).unwrap();
        assert!(r.pass);
        assert!((r.checks[0].lhs - 2.0 * std::f64::consts::SQRT_2 * 11.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn open_curve_is_rejected_by_main() {
        let p = cross_polytope_curve(3, false).unwrap();
        assert!(verify_main(&p).is_err());
    }
}
