//! Counter-based random streams.
//!
//! Every Monte Carlo sample or optimizer restart draws from its own stream keyed
//! by `(seed, index)`, so results do not depend on how work is scheduled.

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Default seed for deterministic restarts.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Random stream for sample `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> Stream {
    // The seeding routine runs SplitMix64 over the key, so nearby keys give
    // unrelated states.
    let key = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(29) ^ index;
    Stream {
        inner: Xoshiro256PlusPlus::seed_from_u64(key),
        spare: None,
    }
}

pub struct Stream {
    inner: Xoshiro256PlusPlus,
    spare: Option<f64>,
}

impl Stream {
    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Standard normal via Box–Muller; the second variate is cached.
    #[inline]
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - U lies in (0, 1], so the logarithm is finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(radius * s);
        radius * c
    }

    pub fn fill_normal(&mut self, out: &mut [f64]) {
        for x in out.iter_mut() {
            *x = self.normal();
        }
    }

    /// Uniformly distributed unit vector in `R^dim`.
    pub fn unit_vector(&mut self, dim: usize) -> Vec<f64> {
        let mut v = vec![0.0; dim];
        loop {
            self.fill_normal(&mut v);
            let n = crate::linalg::norm(&v);
            if n > 1e-300 {
                v.iter_mut().for_each(|x| *x /= n);
                return v;
            }
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
}
