//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! criterion fails. Pass criterion numbers as arguments to run a subset:
//! `cargo test --test acceptance -- 1 4`.

use std::f64::consts::{PI, SQRT_2};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use inspectra::curve::Polyline;
use inspectra::generate;
use inspectra::highdim::{
    cross_polytope_report, find_direction, gaussian_ball_bound_check, random_staircase_family, scaled_cross_polytope_vertices,
    sidak_check, slab_measure_1d, slab_measure_lower_bound, tikhomirov_check, DirectionMethod, SlabFamily, Verdict, DEFAULT_C,
};
use inspectra::horizon::{circle_horizon, efficiency, horizon, horizon_mc};
use inspectra::hull::{chebyshev_inradius, contains_unit_sphere, convex_hull_3d, minimize_support, MinimaxOptions, PointCloud};
use inspectra::optimize::{chord_structure_diagnostic, feasibility_slack, shorten, OptimizerConfig, OptimizerTrace};
use inspectra::rng;
use inspectra::sphere;
use inspectra::unfold::{spiral_decomposition, spiral_efficiency_check, unfold, verify_alpha, Piece};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn closed_points(poly: &Polyline) -> Vec<[f64; 3]> {
    poly.points3().expect("space curve")
}

// ---------------------------------------------------------------------------
// 1. baseball equality case
// ---------------------------------------------------------------------------

fn baseball_equality() -> Outcome {
    let t = Instant::now();
    let b = generate::baseball(500).unwrap();
    let length = b.length();
    let r = chebyshev_inradius(&convex_hull_3d(&closed_points(&b)).unwrap()).unwrap().radius;
    let e = efficiency(&b).unwrap();
    let elapsed = t.elapsed();
    let pass = b.len() == 2000
        && (length - 4.0 * PI).abs() <= 1e-4
        && (r - 1.0).abs() <= 5e-5
        && (e.efficiency - 2.0).abs() <= 5e-3
        && (e.horizon - 8.0 * PI).abs() <= 0.02
        && elapsed < Duration::from_secs(30);
    outcome(
        pass,
        format!(
            "vertices {} length-4pi {:+.3e} inradius-1 {:+.3e} E-2 {:+.3e} H-8pi {:+.3e} time {:.2}s",
            b.len(),
            length - 4.0 * PI,
            r - 1.0,
            e.efficiency - 2.0,
            e.horizon - 8.0 * PI,
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------------------
// 2 and 3. random inspection curves
// ---------------------------------------------------------------------------

/// 100 closed curves whose hulls pass the containment test: half random
/// Fourier loops scaled to a random margin, half perturbed baseball curves
/// inflated until they contain the sphere.
fn inspection_curves() -> &'static Vec<Polyline> {
    static CURVES: OnceLock<Vec<Polyline>> = OnceLock::new();
    CURVES.get_or_init(|| {
        let mut out = Vec::new();
        let mut key = 0u64;
        while out.len() < 100 {
            key += 1;
            let mut s = rng::stream(0xacce, key);
            let poly = if key % 2 == 0 {
                let harmonics = 2 + (s.uniform() * 5.0) as usize;
                generate::random_inspection(key, 200, harmonics, 0.001 + 0.2 * s.uniform()).unwrap()
            } else {
                let noisy = generate::perturb(&generate::baseball(50).unwrap(), 0.002 + 0.1 * s.uniform(), key).unwrap();
                let cloud = PointCloud::from_polyline(&noisy);
                let h = minimize_support(&cloud, MinimaxOptions { restarts: 64, seed: key, ..Default::default() }, &[]).value;
                if h <= 0.0 {
                    continue;
                }
                noisy.scaled(1.0005 / h)
            };
            if contains_unit_sphere(&PointCloud::from_polyline(&poly), 10_000).unwrap().contains {
                out.push(poly);
            }
        }
        out
    })
}

fn main_inequality() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    for poly in inspection_curves() {
        let r = chebyshev_inradius(&convex_hull_3d(&closed_points(poly)).unwrap()).unwrap().radius;
        let ratio = poly.length() / r;
        worst = worst.min(ratio);
        if ratio < 4.0 * PI - 0.02 {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{} curves, min L/r - 4pi {:+.4e}, violations {failures}", inspection_curves().len(), worst - 4.0 * PI),
    )
}

fn horizon_lower_bound() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    for poly in inspection_curves() {
        let h = horizon(poly).unwrap().total;
        worst = worst.min(h);
        if h < 8.0 * PI - 1e-6 {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{} curves, min H - 8pi {:+.4e}, violations {failures}", inspection_curves().len(), worst - 8.0 * PI),
    )
}

// ---------------------------------------------------------------------------
// 4. horizon oracles
// ---------------------------------------------------------------------------

fn horizon_oracles() -> Outcome {
    let mut worst_sigma = 0.0f64;
    let mut mc_failures = 0;
    for i in 0..50u64 {
        let mut s = rng::stream(0x4_0000, i);
        let base = generate::random_loop(1000 + i, 40, 1 + (s.uniform() * 4.0) as usize).unwrap();
        let poly = base.scaled(0.5 + 2.5 * s.uniform());
        let exact = horizon(&poly).unwrap().total;
        let mc = horizon_mc(&poly, 1_000_000, i).unwrap();
        let sigma = mc.mc_stderr.unwrap();
        let z = if sigma > 0.0 { (exact - mc.total).abs() / sigma } else if exact == mc.total { 0.0 } else { f64::INFINITY };
        worst_sigma = worst_sigma.max(z);
        if z > 3.0 {
            mc_failures += 1;
        }
    }
    let mut worst_circle = 0.0f64;
    for r in [1.1, SQRT_2, 2.0, 10.0] {
        let c = generate::circle(r, 10_000, 3).unwrap();
        worst_circle = worst_circle.max((horizon(&c).unwrap().total - circle_horizon(r)).abs());
    }
    outcome(
        mc_failures == 0 && worst_circle <= 1e-6,
        format!("50 curves: max |exact-mc|/sigma {worst_sigma:.2}, beyond 3 sigma {mc_failures}; circle max error {worst_circle:.2e}"),
    )
}

// ---------------------------------------------------------------------------
// 5. unfolding identities
// ---------------------------------------------------------------------------

fn unfolding_identities() -> Outcome {
    let mut length_err = 0.0f64;
    let mut radius_err = 0.0f64;
    let mut e_err = 0.0f64;
    let mut alpha_worst = 0.0f64;
    let mut alpha_over = 0;
    // h / r_min of the curve with the largest deviation.
    let mut worst_ratio = 0.0;
    let mut not_decreasing = 0;
    let mut worst_order = f64::INFINITY;
    for i in 0..50u64 {
        let harmonics = 2 + (i % 4) as usize;
        let mut alphas = Vec::new();
        for vertices in [500, 1000, 2000] {
            let poly = generate::random_loop(500 + i, vertices, harmonics).unwrap();
            let unf = unfold(&poly).unwrap();
            let a = verify_alpha(&poly, &unf).unwrap();
            alphas.push(a);
            if vertices != 500 {
                continue;
            }
            if a > 1e-3 {
                alpha_over += 1;
            }
            if a > alpha_worst {
                alpha_worst = a;
                let rmin = unf.radii().iter().copied().fold(f64::INFINITY, f64::min);
                let h = poly.segment_lengths().iter().copied().fold(0.0, f64::max);
                worst_ratio = h / rmin;
            }
            length_err = length_err.max((unf.length() - poly.length()).abs());
            for (r, src) in unf.radii().iter().zip(unf.source_index()) {
                let expected = src.map_or(0.0, |j| poly.vertex(j).iter().map(|x| x * x).sum::<f64>().sqrt());
                radius_err = radius_err.max((r - expected).abs());
            }
            let e_space = efficiency(&poly).unwrap().efficiency;
            let e_plane = unf.segment_horizons().iter().sum::<f64>() / unf.length();
            e_err = e_err.max((e_space - e_plane).abs());
        }
        if !(alphas[1] < alphas[0] && alphas[2] < alphas[1]) {
            not_decreasing += 1;
        }
        worst_order = worst_order.min((alphas[0] / alphas[2]).log2() / 2.0);
    }
    let pass = length_err <= 1e-9 && radius_err <= 1e-9 && e_err <= 2e-3 && alpha_worst <= 1e-3 && not_decreasing == 0;
    outcome(
        pass,
        format!(
            "50 curves: length err {length_err:.2e}, radius err {radius_err:.2e}, |dE| {e_err:.2e}; alpha deviation at 500 vertices max {alpha_worst:.2e} (h/r_min {worst_ratio:.2}), over 1e-3 on {alpha_over} curves; non-decreasing under refinement {not_decreasing}, min observed order {worst_order:.2}"
        ),
    )
}

// ---------------------------------------------------------------------------
// 6 and 7. optimizer outputs and their spirals
// ---------------------------------------------------------------------------

struct OptimizerRun {
    trace: OptimizerTrace,
    elapsed: Duration,
}

fn optimizer_run() -> &'static OptimizerRun {
    static RUN: OnceLock<OptimizerRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let init = generate::perturb(&generate::baseball(50).unwrap(), 0.05, 0).unwrap();
        let t = Instant::now();
        let trace = shorten(&init, &OptimizerConfig::default()).unwrap();
        OptimizerRun { trace, elapsed: t.elapsed() }
    })
}

fn spiral_suite() -> Outcome {
    let candidate = &optimizer_run().trace.final_curve;
    let mut worst_e = f64::NEG_INFINITY;
    let mut spirals = 0;
    let mut worst_identity = 0.0f64;
    for poly in [candidate.clone(), generate::baseball(50).unwrap(), generate::baseball(500).unwrap()] {
        let report = spiral_decomposition(&unfold(&poly).unwrap(), 1e-9);
        worst_identity = worst_identity.max(report.identity_residual);
        for c in spiral_efficiency_check(&report, 1e-3) {
            if matches!(c.piece, Piece::Spiral(_)) {
                spirals += 1;
                worst_e = worst_e.max(c.efficiency);
            }
        }
    }
    let efficiency_ok = worst_e <= 2.0 + 1e-3;
    let identity_ok = worst_identity <= 1e-6;

    let b = generate::baseball(500).unwrap();
    let unf = unfold(&b).unwrap();
    let report = spiral_decomposition(&unf, 1e-9);
    let strict = report.spirals.iter().filter(|s| s.strict).count();
    let (lo, hi) = report
        .spirals
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.start_radius), hi.max(s.end_radius)));
    let (rmin, rmax) = unf.radii().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
    let baseball_ok = report.spirals.len() == 8 && strict == 8 && (lo - 1.0).abs() <= 1e-6 && (hi - SQRT_2).abs() <= 1e-6;
    outcome(
        efficiency_ok && identity_ok && baseball_ok,
        format!(
            "spirals from candidates {spirals}, max E {worst_e:.6}; identity residual {worst_identity:.2e}; unfolded baseball: {} spirals ({strict} strict), vertex radii in [{rmin:.9}, {rmax:.9}] (the baseball lies on the sphere of radius sqrt 2, so no radial run exists)",
            report.spirals.len()
        ),
    )
}

fn optimizer_convergence() -> Outcome {
    let run = optimizer_run();
    let poly = &run.trace.final_curve;
    let fine: Vec<Vec<f64>> = sphere::fibonacci(40_000).iter().map(|u| u.to_vec()).collect();
    let slack = feasibility_slack(poly, &fine).unwrap().min(run.trace.final_slack);
    let chords = chord_structure_diagnostic(poly).unwrap();
    let length = poly.length();
    let pass = length <= 4.0 * PI + 0.05
        && slack >= -1e-6
        && chords.max_residual <= 1e-3
        && run.elapsed < Duration::from_secs(600);
    outcome(
        pass,
        format!(
            "final length {length:.5} (4pi{:+.4}), slack {slack:+.2e}, chord residual {:.2e} over {} interior runs, time {:.1}s",
            length - 4.0 * PI,
            chords.max_residual,
            chords.runs.len(),
            run.elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------------------
// 8. cross-polytope scaling
// ---------------------------------------------------------------------------

fn cross_polytope_scaling() -> Outcome {
    let mut worst = 0.0f64;
    let mut flagged = true;
    let mut factors = Vec::new();
    for n in 2..=8 {
        let r = cross_polytope_report(n, true).unwrap();
        let nf = n as f64;
        worst = worst.max((r.ratio - 2.0 * SQRT_2 * nf * nf.sqrt()).abs());
        flagged &= r.quoted_bound == 2.0 * nf * nf.sqrt() && r.quoted_factor > 1.0;
        factors.push(format!("{:.4}", r.quoted_factor));
    }
    outcome(
        worst <= 1e-9 && flagged,
        format!("max |L/r - 2 sqrt2 n sqrt n| {worst:.2e}; ratio / quoted 2n sqrt n for n=2..8: {}", factors.join(" ")),
    )
}

// ---------------------------------------------------------------------------
// 9. Gaussian machinery
// ---------------------------------------------------------------------------

fn gaussian_machinery() -> Outcome {
    let mut sidak_failures = 0;
    let mut worst_margin = f64::INFINITY;
    for i in 0..200u64 {
        let mut s = rng::stream(0x9_0000, i);
        let n = 1 + (s.uniform() * 16.0) as usize;
        let count = 1 + (s.uniform() * 32.0) as usize;
        let family = SlabFamily::random(n, count, 0.5, 3.0, i).unwrap();
        let r = sidak_check(&family, 1_000_000, i).unwrap();
        if !r.pass {
            sidak_failures += 1;
        }
        if r.lhs.stderr > 0.0 {
            worst_margin = worst_margin.min((r.lhs.mean - r.rhs_product) / r.lhs.stderr);
        }
    }
    let mut ball_failures = 0;
    let mut grid = 0;
    for n in [2usize, 4, 8] {
        let root = (n as f64).sqrt();
        for r in [0.1, 0.5, 1.0, root / 2.0, root] {
            grid += 1;
            if !gaussian_ball_bound_check(n, r, 1_000_000, grid).unwrap().pass {
                ball_failures += 1;
            }
        }
    }
    let m = slab_measure_1d(2.0);
    let slab_ok = (m - 0.954500).abs() <= 1e-6 && m > 0.95 && m > slab_measure_lower_bound(2.0);
    outcome(
        sidak_failures == 0 && ball_failures == 0 && slab_ok,
        format!(
            "sidak: 200 families, failures {sidak_failures}, min (lhs-product)/sigma {worst_margin:.2}; ball bound: {grid} grid points, failures {ball_failures}; mu(|x|<=2) = {m:.9} vs 0.95 and 1-e^-2 = {:.6}",
            slab_measure_lower_bound(2.0)
        ),
    )
}

// ---------------------------------------------------------------------------
// 10. direction certificates
// ---------------------------------------------------------------------------

fn direction_certificates() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut failures = 0;
    let mut families = 0;
    for n in [2usize, 3, 4, 6] {
        for i in 0..25u64 {
            families += 1;
            let mut s = rng::stream(0x10_0000 + n as u64, i);
            let steps = 1 + (s.uniform() * 8.0) as usize;
            let length = (n as f64).sqrt() * (0.25 + 0.75 * s.uniform());
            let family = random_staircase_family(n, 2 * n, steps, length, i).unwrap();
            let cert = find_direction(&family, &DirectionMethod::default(), i).unwrap();
            worst = worst.max(cert.bound);
            if cert.bound > DEFAULT_C {
                failures += 1;
            }
        }
    }
    let mut tik_failures = 0;
    for n in 2..=8 {
        let r = tikhomirov_check(&scaled_cross_polytope_vertices(n), DEFAULT_C, n as u64).unwrap();
        if r.verdict != Verdict::Pass || r.max_norm < (n as f64).sqrt() / DEFAULT_C {
            tik_failures += 1;
        }
    }
    outcome(
        failures == 0 && tik_failures == 0,
        format!("{families} families: max certified bound {worst:.4} (limit {DEFAULT_C}), over limit {failures}; tikhomirov n=2..8 failures {tik_failures}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "baseball equality case", baseball_equality),
        (2, "main inequality L >= 4 pi r", main_inequality),
        (3, "horizon lower bound H >= 8 pi", horizon_lower_bound),
        (4, "horizon oracle equivalence", horizon_oracles),
        (5, "unfolding identities", unfolding_identities),
        (6, "spiral suite", spiral_suite),
        (7, "optimizer convergence", optimizer_convergence),
        (8, "cross-polytope scaling", cross_polytope_scaling),
        (9, "gaussian machinery", gaussian_machinery),
        (10, "direction certificates", direction_certificates),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {id:>2} {:<4} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
