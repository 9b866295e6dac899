//! Curve generators used by the CLI, tests and benches.

use std::f64::consts::PI;

use crate::curve::Polyline;
use crate::error::{Error, Result};
use crate::hull::{minimize_support, MinimaxOptions, PointCloud};
use crate::linalg::{cross, dot3, sub3};
use crate::rng;

/// The four unit semicircles in the tangent planes `z = 1`, `x = −1`, `z = −1`,
/// `x = 1` of the unit sphere, traced consecutively with matching tangents.
/// Every vertex lies at radius √2. `per_arc` vertices are placed on each arc
/// at equal angular spacing.
pub fn baseball(per_arc: usize) -> Result<Polyline> {
    if per_arc < 2 {
        return Err(Error::InvalidArgument("baseball needs at least 2 vertices per arc".into()));
    }
    let mut coords = Vec::with_capacity(12 * per_arc);
    let arcs: [fn(f64, f64) -> [f64; 3]; 4] = [
        |c, s| [c, s, 1.0],
        |c, s| [-1.0, -s, c],
        |c, s| [-c, s, -1.0],
        |c, s| [1.0, -s, -c],
    ];
    for arc in arcs {
        for i in 0..per_arc {
            let (s, c) = (PI * i as f64 / per_arc as f64).sin_cos();
            coords.extend_from_slice(&arc(c, s));
        }
    }
    Polyline::new(3, coords, true)
}

/// Centre, in-plane axes and normal of each baseball semicircle, traced as
/// `centre + cos t·e1 + sin t·e2` for `t ∈ [0, π]`.
const BASEBALL_ARCS: [([f64; 3], [f64; 3], [f64; 3]); 4] = [
    ([0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
    ([-1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]),
    ([0.0, 0.0, -1.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
    ([1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, -1.0, 0.0]),
];

/// Euclidean distance from `p` to the smooth baseball curve.
pub fn baseball_distance(p: [f64; 3]) -> f64 {
    BASEBALL_ARCS
        .iter()
        .map(|&(c, e1, e2)| {
            let q = sub3(p, c);
            let n = cross(e1, e2);
            let (a, b, z) = (dot3(q, e1), dot3(q, e2), dot3(q, n));
            if b >= 0.0 {
                let r = (a * a + b * b).sqrt();
                ((r - 1.0).powi(2) + z * z).sqrt()
            } else {
                let end = |s: f64| ((a - s).powi(2) + b * b + z * z).sqrt();
                end(1.0).min(end(-1.0))
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Regular polygon inscribed in the circle of `radius` about o, lying in the
/// first two coordinates of `R^dim`.
pub fn circle(radius: f64, vertices: usize, dim: usize) -> Result<Polyline> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument("circle radius must be positive".into()));
    }
    if vertices < 3 {
        return Err(Error::InvalidArgument("circle needs at least 3 vertices".into()));
    }
    if dim < 2 {
        return Err(Error::InvalidArgument("circle needs dimension at least 2".into()));
    }
    let mut coords = vec![0.0; dim * vertices];
    for i in 0..vertices {
        let (s, c) = (2.0 * PI * i as f64 / vertices as f64).sin_cos();
        coords[i * dim] = radius * c;
        coords[i * dim + 1] = radius * s;
    }
    Polyline::new(dim, coords, true)
}

/// Closed trigonometric curve in R³ with zero mean and `harmonics` random
/// Fourier modes (amplitude decaying like 1/k), keyed by `seed`.
pub fn random_loop(seed: u64, vertices: usize, harmonics: usize) -> Result<Polyline> {
    if vertices < 4 || harmonics == 0 {
        return Err(Error::InvalidArgument("random loop needs ≥ 4 vertices and ≥ 1 harmonic".into()));
    }
    let mut s = rng::stream(seed, 0);
    let modes: Vec<([f64; 3], [f64; 3])> = (1..=harmonics)
        .map(|k| {
            let w = 1.0 / k as f64;
            let mut a = [0.0; 3];
            let mut b = [0.0; 3];
            a.iter_mut().chain(b.iter_mut()).for_each(|x| *x = w * s.normal());
            (a, b)
        })
        .collect();
    let mut coords = Vec::with_capacity(3 * vertices);
    for i in 0..vertices {
        let t = 2.0 * PI * i as f64 / vertices as f64;
        let mut p = [0.0; 3];
        for (k, (a, b)) in modes.iter().enumerate() {
            let (sk, ck) = ((k + 1) as f64 * t).sin_cos();
            for d in 0..3 {
                p[d] += a[d] * ck + b[d] * sk;
            }
        }
        coords.extend_from_slice(&p);
    }
    Polyline::new(3, coords, true)
}

/// A [`random_loop`] scaled so that its origin-centred inradius bound is
/// `1 + margin`; its hull then contains the unit sphere. Seeds whose loop
/// does not surround o are skipped deterministically.
pub fn random_inspection(seed: u64, vertices: usize, harmonics: usize, margin: f64) -> Result<Polyline> {
    for attempt in 0..64u64 {
        let key = seed.wrapping_add(attempt.wrapping_mul(0x1_0000_0001));
        let poly = random_loop(key, vertices, harmonics)?;
        let cloud = PointCloud::from_polyline(&poly);
        let best = minimize_support(&cloud, MinimaxOptions { restarts: 32, seed: key, ..Default::default() }, &[]);
        if best.value > 1e-3 * cloud.max_norm() {
            return Ok(poly.scaled((1.0 + margin) / best.value));
        }
    }
    Err(Error::InvalidArgument("no loop surrounding the origin found for this seed".into()))
}

/// Adds independent Gaussian noise of RMS displacement `amplitude` to every
/// vertex.
pub fn perturb(poly: &Polyline, amplitude: f64, seed: u64) -> Result<Polyline> {
    let dim = poly.dim();
    let sigma = amplitude / (dim as f64).sqrt();
    let mut coords = poly.coords().to_vec();
    for (i, v) in coords.chunks_exact_mut(dim).enumerate() {
        let mut s = rng::stream(seed, i as u64);
        v.iter_mut().for_each(|x| *x += sigma * s.normal());
    }
    Polyline::new(dim, coords, poly.is_closed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::contains_unit_sphere;
    use crate::linalg::norm;

    #[test]
    fn baseball_shape() {
        let b = baseball(500).unwrap();
        assert_eq!(b.len(), 2000);
        assert!(b.is_closed());
        for v in b.vertices() {
            assert!((norm(v) - 2f64.sqrt()).abs() < 1e-12);
        }
        // Inscribed polygon of four unit semicircles: 4·(2m sin(π/2m)).
        let m = 500.0;
        let exact = 4.0 * 2.0 * m * (PI / (2.0 * m)).sin();
        assert!((b.length() - exact).abs() < 1e-10);
        // Chord deficit of the inscribed polygon is π³/(6m²) to leading order.
        assert!((4.0 * PI - b.length()) <= PI.powi(3) / (6.0 * m * m) * (1.0 + 1e-6));
        assert!((b.length() - 4.0 * PI).abs() < 1e-4);
    }

    #[test]
    fn baseball_is_tangent_continuous() {
        // Consecutive chords at arc junctions turn by the same angle as inside
        // an arc, since the tangents match.
        let b = baseball(40).unwrap();
        let n = b.len();
        let turn = |j: usize| {
            let p = b.vertex((j + n - 1) % n);
            let q = b.vertex(j);
            let r = b.vertex((j + 1) % n);
            let u: Vec<f64> = q.iter().zip(p).map(|(a, b)| a - b).collect();
            let w: Vec<f64> = r.iter().zip(q).map(|(a, b)| a - b).collect();
            crate::linalg::angle_between(&u, &w)
        };
        let inner = turn(5);
        for j in [0, 40, 80, 120] {
            assert!(turn(j) <= inner * 1.5 + 1e-12);
        }
    }

    #[test]
    fn distance_to_baseball() {
        let b = baseball(50).unwrap();
        assert!(b.points3().unwrap().iter().all(|&p| baseball_distance(p) < 1e-12));
        assert!((baseball_distance([0.0, 0.0, 0.0]) - 2f64.sqrt()).abs() < 1e-12);
        // Above the centre of the top semicircle, distance to the whole circle
        // of radius 1 at height 1.
        assert!((baseball_distance([0.0, 0.0, 2.0]) - 2f64.sqrt()).abs() < 1e-12);
        // Below the missing half of the top circle: nearest is an endpoint or
        // another arc, never the absent half.
        let p = [0.0, -1.0, 1.0];
        assert!(baseball_distance(p) > 0.5);
    }

    #[test]
    fn circle_rejects_bad_params() {
        assert!(circle(1.0, 2, 3).is_err());
        assert!(circle(-1.0, 10, 3).is_err());
        let c = circle(1.5, 100, 3).unwrap();
        assert!(c.vertices().all(|v| (norm(v) - 1.5).abs() < 1e-12 && v[2] == 0.0));
    }

    #[test]
    fn random_inspection_contains_sphere() {
        for seed in 0..5 {
            let c = random_inspection(seed, 48, 3, 1e-4).unwrap();
            let r = contains_unit_sphere(&PointCloud::from_polyline(&c), 2000).unwrap();
            assert!(r.contains, "seed {seed}: {}", r.min_slack);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_loop(7, 30, 3).unwrap(), random_loop(7, 30, 3).unwrap());
        let b = baseball(10).unwrap();
        assert_eq!(perturb(&b, 0.05, 3).unwrap(), perturb(&b, 0.05, 3).unwrap());
        assert_ne!(perturb(&b, 0.05, 3).unwrap(), perturb(&b, 0.05, 4).unwrap());
    }
}
