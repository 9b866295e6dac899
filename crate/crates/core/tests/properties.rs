use proptest::prelude::*;

use inspectra::curve::{resample_constant_speed, CurveFamily, Polyline};
use inspectra::generate;
use inspectra::highdim::{dyadic_decomposition, slab_measure_1d, slab_measure_lower_bound, DirectionCertificate, SlabFamily};
use inspectra::horizon::horizon;
use inspectra::hull::{chebyshev_inradius, convex_hull_3d, origin_inradius_minimax, PointCloud};
use inspectra::sphere;
use inspectra::unfold::{spiral_decomposition, unfold};

fn points3(min: usize, max: usize) -> impl Strategy<Value = Vec<[f64; 3]>> {
    prop::collection::vec(prop::array::uniform3(-3.0..3.0f64), min..max)
}

fn curve(closed: bool) -> impl Strategy<Value = Polyline> {
    points3(4, 30).prop_filter_map("repeated vertices", move |p| Polyline::from_points(&p, closed).ok())
}

fn small_curve(closed: bool) -> impl Strategy<Value = Polyline> {
    points3(4, 12).prop_filter_map("repeated vertices", move |p| Polyline::from_points(&p, closed).ok())
}

fn octahedron_plus(extra: &[[f64; 3]]) -> Vec<[f64; 3]> {
    let mut pts = vec![
        [1.5, 0.0, 0.0],
        [-1.5, 0.0, 0.0],
        [0.0, 1.5, 0.0],
        [0.0, -1.5, 0.0],
        [0.0, 0.0, 1.5],
        [0.0, 0.0, -1.5],
    ];
    pts.extend_from_slice(extra);
    pts
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn resample_never_lengthens(poly in curve(true), m in 3usize..60) {
        let r = resample_constant_speed(&poly, m).unwrap();
        prop_assert!(r.length() <= poly.length() + 1e-12);
    }

    #[test]
    fn resample_is_idempotent_on_smooth_loops(
        seed in any::<u64>(),
        vertices in 8usize..120,
        harmonics in 1usize..3,
        m in 8usize..200,
    ) {
        let poly = generate::random_loop(seed, vertices, harmonics).unwrap();
        let r = resample_constant_speed(&poly, m).unwrap();
        prop_assert!(r.length() <= poly.length() + 1e-12);
        let again = resample_constant_speed(&r, m).unwrap();
        for (a, b) in r.coords().iter().zip(again.coords()) {
            prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn reversal_preserves_length(poly in curve(true)) {
        prop_assert_eq!(poly.reversed().length(), poly.length());
    }

    #[test]
    fn hull_contains_its_points_and_free_centre_dominates(extra in points3(0, 40)) {
        let pts = octahedron_plus(&extra);
        let hull = convex_hull_3d(&pts).unwrap();
        for p in &pts {
            prop_assert!(hull.min_slack(p) >= -1e-9);
        }
        let free = chebyshev_inradius(&hull).unwrap().radius;
        let origin = origin_inradius_minimax(&PointCloud::from_points(&pts).unwrap(), 32, 150).unwrap().radius;
        prop_assert!(free >= origin - 1e-6, "{free} < {origin}");
    }

    #[test]
    fn inradius_scales_with_the_points(extra in points3(0, 20), lambda in 0.1..10.0f64) {
        let pts = octahedron_plus(&extra);
        let scaled: Vec<[f64; 3]> = pts.iter().map(|p| [lambda * p[0], lambda * p[1], lambda * p[2]]).collect();
        let a = chebyshev_inradius(&convex_hull_3d(&pts).unwrap()).unwrap().radius;
        let b = chebyshev_inradius(&convex_hull_3d(&scaled).unwrap()).unwrap().radius;
        prop_assert!((b - lambda * a).abs() <= 1e-9 * lambda * a);
        let c = origin_inradius_minimax(&PointCloud::from_points(&pts).unwrap(), 32, 150).unwrap().radius;
        let d = origin_inradius_minimax(&PointCloud::from_points(&scaled).unwrap(), 32, 150).unwrap().radius;
        prop_assert!((d - lambda * c).abs() <= 1e-9 * lambda * c);
    }

    #[test]
    fn dyadic_sums_telescope(pts in points3(2, 12), t in 0.0..=1.0f64, depth in 1usize..24) {
        let mut from_origin = vec![[0.0; 3]];
        from_origin.extend(pts);
        let c = Polyline::from_points(&from_origin, false).unwrap();
        let row = dyadic_decomposition(&c, t, depth).unwrap();
        prop_assert!(row.error <= row.tail_bound + 1e-12);
        prop_assert!((row.tail_bound - c.length() / 2f64.powi(depth as i32)).abs() <= 1e-12 * c.length());
    }

    #[test]
    fn certificate_is_a_direct_scan(pts in points3(2, 10), u in prop::array::uniform3(-1.0..1.0f64)) {
        prop_assume!(u.iter().map(|x| x * x).sum::<f64>() > 1e-6);
        let mut a = vec![[0.0; 3]];
        a.extend(pts.iter().take(pts.len() / 2 + 1));
        let mut b = vec![[0.0; 3]];
        b.extend(pts.iter().skip(pts.len() / 2));
        let fam = CurveFamily::new(
            vec![Polyline::from_points(&a, false).unwrap(), Polyline::from_points(&b, false).unwrap()],
            true,
        )
        .unwrap();
        let cert = DirectionCertificate::new(&fam, &u).unwrap();
        let scan = fam
            .curves()
            .iter()
            .flat_map(|c| c.vertices())
            .map(|v| v.iter().zip(&cert.u).map(|(x, y)| x * y).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(cert.bound.to_bits(), scan.to_bits());
    }

    #[test]
    fn slab_measure_dominates_its_bound(a in 0.0..12.0f64) {
        let m = slab_measure_1d(a);
        prop_assert!((0.0..=1.0).contains(&m));
        prop_assert!(m >= slab_measure_lower_bound(a) - 1e-15);
    }

    #[test]
    fn product_measure_is_below_each_slab(seed in any::<u64>(), n in 1usize..12, count in 1usize..20) {
        let f = SlabFamily::random(n, count, 0.2, 3.0, seed).unwrap();
        let p = f.product_measure();
        for s in f.slabs() {
            prop_assert!(p <= s.measure() + 1e-15);
        }
    }
}

proptest! {
    // Exact horizon evaluation is the slow kernel; keep these small.
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn horizon_is_additive_over_splits(poly in small_curve(false), cut in 1usize..100) {
        let k = 1 + cut % (poly.len() - 2);
        let left = poly.subchain(0, k).unwrap();
        let right = poly.subchain(k, poly.len() - 1).unwrap();
        let whole = horizon(&poly).unwrap().total;
        let parts = horizon(&left).unwrap().total + horizon(&right).unwrap().total;
        prop_assert!((whole - parts).abs() <= 1e-9, "{whole} vs {parts}");
    }

    #[test]
    fn horizon_is_rotation_invariant(poly in small_curve(true), seed in any::<u64>()) {
        let rot = sphere::random_rotation(seed);
        let turned = poly.map_vertices(3, |v| sphere::rotate(&rot, [v[0], v[1], v[2]]).to_vec()).unwrap();
        let a = horizon(&poly).unwrap().total;
        let b = horizon(&turned).unwrap().total;
        prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }

    #[test]
    fn unfolding_preserves_length_and_radii(poly in small_curve(true)) {
        let unf = unfold(&poly).unwrap();
        prop_assert!((unf.length() - poly.length()).abs() <= 1e-9);
        for (r, src) in unf.radii().iter().zip(unf.source_index()) {
            let expected = src.map_or(0.0, |j| poly.vertex(j).iter().map(|x| x * x).sum::<f64>().sqrt());
            prop_assert!((r - expected).abs() <= 1e-12);
        }
        let report = spiral_decomposition(&unf, 1e-9);
        prop_assert!(report.identity_residual <= 1e-6);
    }
}

/// Unfolded minimizer candidates have no crossing between segments at most
/// three apart.
#[test]
fn unfolded_baseball_is_locally_injective() {
    let unf = unfold(&generate::baseball(60).unwrap()).unwrap();
    let p = unf.planar_points();
    let cross = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    for i in 0..p.len() - 1 {
        for j in i + 2..(i + 4).min(p.len() - 1) {
            let (a, b, c, d) = (p[i], p[i + 1], p[j], p[j + 1]);
            let proper = cross(a, b, c) * cross(a, b, d) < 0.0 && cross(c, d, a) * cross(c, d, b) < 0.0;
            assert!(!proper, "segments {i} and {j} cross");
        }
    }
}
