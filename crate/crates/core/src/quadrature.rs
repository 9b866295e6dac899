//! Gauss–Legendre rules and an adaptive integrator built on them.

use std::f64::consts::PI;

/// Nodes and weights on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Chebyshev-like initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(mid + half * x);
        }
        s * half
    }

    /// Adaptive bisection until the one-rule and two-half-rule estimates agree
    /// within `tol` (absolute), or `max_depth` is reached.
    pub fn adaptive<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
        let whole = self.integrate(f, a, b);
        self.refine(f, a, b, whole, tol, max_depth)
    }

    fn refine<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = self.integrate(f, a, m);
        let right = self.integrate(f, m, b);
        let split = left + right;
        if depth == 0 || (split - whole).abs() <= tol {
            return split;
        }
        self.refine(f, a, m, left, 0.5 * tol, depth - 1) + self.refine(f, m, b, right, 0.5 * tol, depth - 1)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_polynomials_are_exact() {
        for n in [1, 2, 5, 16, 32, 64] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
            // Degree 2n−1 is integrated exactly.
            let deg = 2 * n - 1;
            let f = |x: f64| x.powi(deg as i32 - 1) * (deg as f64);
            let exact = if (deg - 1) % 2 == 0 { 2.0 } else { 0.0 };
            assert!((g.integrate(&f, -1.0, 1.0) - exact).abs() < 1e-11, "n={n}");
        }
    }

    #[test]
    fn adaptive_handles_sqrt_endpoint() {
        let g = GaussLegendre::new(16);
        let v = g.adaptive(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-13, 40);
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
        let v = g.adaptive(&f64::sin, 0.0, PI, 1e-14, 20);
        assert!((v - 2.0).abs() < 1e-13);
    }
}
