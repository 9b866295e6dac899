//! Dense simplex method for small inequality-form linear programs
//!
//!   maximize ⟨c, z⟩  subject to  G z ≤ h,  z ∈ R^d free,
//!
//! with `d` small (a handful of variables) and any number of constraints. The
//! method walks between vertices of the feasible region keeping `d` active
//! constraints; entering and leaving choices follow Bland's lowest-index rule,
//! which rules out cycling on degenerate vertices.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { z: Vec<f64>, value: f64, active: Vec<usize> },
    Unbounded,
}

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    /// Feasibility and sign tolerance, relative to the problem scale.
    pub tol: f64,
    pub max_pivots: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions { tol: 1e-12, max_pivots: 100_000 }
    }
}

/// Solves the program starting from a feasible point `start`.
///
/// Panics if the dimensions of `c`, `rows`, `h` and `start` disagree.
pub fn maximize(c: &[f64], rows: &[Vec<f64>], h: &[f64], start: &[f64], opts: LpOptions) -> LpOutcome {
    let d = c.len();
    assert_eq!(rows.len(), h.len());
    assert_eq!(start.len(), d);
    let scale = h.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let tol = opts.tol * scale;
    let dotc = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    let mut z = start.to_vec();
    let mut active: Vec<usize> = Vec::with_capacity(d);

    // Phase 1: from the feasible start, slide inside the intersection of the
    // active hyperplanes until `d` independent constraints are tight.
    while active.len() < d {
        let basis = orthonormal_rows(active.iter().map(|&i| rows[i].as_slice()));
        let project = |v: &[f64]| -> Vec<f64> {
            let mut w = v.to_vec();
            for b in &basis {
                let k = dotc(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= k * y);
            }
            w
        };
        let mut dir = project(c);
        if dotc(&dir, &dir).sqrt() <= 1e-14 {
            // Objective is flat along the current face; pick any free direction.
            dir = (0..d)
                .map(|i| {
                    let mut e = vec![0.0; d];
                    e[i] = 1.0;
                    project(&e)
                })
                .find(|w| dotc(w, w).sqrt() > 1e-8)
                .expect("active constraints leave a free direction");
        }
        match ratio_test(rows, h, &z, &dir, &active, tol) {
            Some((i, step)) => {
                z.iter_mut().zip(&dir).for_each(|(x, y)| *x += step * y);
                active.push(i);
            }
            None => {
                if dotc(c, &dir) > 1e-14 {
                    return LpOutcome::Unbounded;
                }
                // Flat unbounded direction: try the opposite one.
                let back: Vec<f64> = dir.iter().map(|x| -x).collect();
                match ratio_test(rows, h, &z, &back, &active, tol) {
                    Some((i, step)) => {
                        z.iter_mut().zip(&back).for_each(|(x, y)| *x += step * y);
                        active.push(i);
                    }
                    None => return LpOutcome::Unbounded,
                }
            }
        }
    }

    // Phase 2: vertex-to-vertex pivots.
    for _ in 0..opts.max_pivots {
        let a = DMatrix::from_fn(d, d, |r, k| rows[active[r]][k]);
        let Some(lu_t) = a.transpose().lu().solve(&DVector::from_column_slice(c)) else {
            break;
        };
        // Multipliers λ with Aᵀλ = c; optimal when all are nonnegative.
        // Bland: the leaving constraint is the lowest constraint index with λ < 0.
        let leave = (0..d)
            .filter(|&r| lu_t[r] < -1e-12 * (1.0 + lu_t.amax()))
            .min_by_key(|&r| active[r]);
        let Some(r) = leave else {
            let value = dotc(c, &z);
            let mut act = active.clone();
            act.sort_unstable();
            return LpOutcome::Optimal { z, value, active: act };
        };
        // Direction with A dir = -e_r: leave constraint r, keep the others tight.
        let mut rhs = DVector::zeros(d);
        rhs[r] = -1.0;
        let Some(dir) = a.lu().solve(&rhs) else { break };
        let dir: Vec<f64> = dir.iter().copied().collect();
        match ratio_test(rows, h, &z, &dir, &active, tol) {
            None => return LpOutcome::Unbounded,
            Some((i, step)) => {
                z.iter_mut().zip(&dir).for_each(|(x, y)| *x += step * y);
                active[r] = i;
            }
        }
    }
    // Pivot budget exhausted or singular basis: report the current vertex.
    let value = dotc(c, &z);
    active.sort_unstable();
    LpOutcome::Optimal { z, value, active }
}

/// Largest step along `dir` keeping all constraints satisfied; ties go to the
/// lowest index.
fn ratio_test(rows: &[Vec<f64>], h: &[f64], z: &[f64], dir: &[f64], active: &[usize], tol: f64) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, row) in rows.iter().enumerate() {
        if active.contains(&i) {
            continue;
        }
        let rate: f64 = row.iter().zip(dir).map(|(x, y)| x * y).sum();
        if rate <= 1e-14 {
            continue;
        }
        let slack: f64 = h[i] - row.iter().zip(z).map(|(x, y)| x * y).sum::<f64>();
        let step = (slack.max(0.0) - 0.0) / rate;
        let step = if slack < tol { 0.0 } else { step };
        match best {
            Some((_, s)) if step >= s => {}
            _ => best = Some((i, step)),
        }
    }
    best
}

fn orthonormal_rows<'a>(rows: impl Iterator<Item = &'a [f64]>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        let mut w = r.to_vec();
        for _ in 0..2 {
            for b in &out {
                let k: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= k * y);
            }
        }
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            w.iter_mut().for_each(|x| *x /= n);
            out.push(w);
        }
    }
    out
}
