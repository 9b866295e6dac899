//! Deterministic direction sets on spheres.

use std::collections::HashMap;

use crate::linalg::{cross, dot3, norm3};
use crate::rng;

/// `count` nearly uniform directions on S² from the golden-angle spiral.
pub fn fibonacci(count: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Vertices of the icosphere obtained by subdividing the icosahedron `level`
/// times: 12, 42, 162, 642, ... directions.
pub fn icosphere(level: u32) -> Vec<[f64; 3]> {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<[f64; 3]> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|&v| unit3(v))
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| -> usize {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                let (p, q) = (verts[a], verts[b]);
                verts.push(unit3([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    verts
}

pub(crate) fn unit3(v: [f64; 3]) -> [f64; 3] {
    let n = norm3(v);
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Uniform random rotation of R³ keyed by `seed`.
pub fn random_rotation(seed: u64) -> [[f64; 3]; 3] {
    let mut s = rng::stream(seed, u64::MAX);
    let a = s.unit_vector(3);
    let a = [a[0], a[1], a[2]];
    let b = loop {
        let b = s.unit_vector(3);
        let b = [b[0], b[1], b[2]];
        let d = dot3(a, b);
        let w = [b[0] - d * a[0], b[1] - d * a[1], b[2] - d * a[2]];
        if norm3(w) > 1e-3 {
            break unit3(w);
        }
    };
    let c = cross(a, b);
    [a, b, c]
}

pub fn rotate(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [dot3(m[0], v), dot3(m[1], v), dot3(m[2], v)]
}

/// `count` independent uniform directions in `R^dim`; direction `i` depends
/// only on `(seed, i)`.
pub fn random_directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    (0..count).map(|i| rng::stream(seed, i as u64).unit_vector(dim)).collect()
}

/// A spread-out direction set in `R^dim`: the Fibonacci spiral for `dim = 3`,
/// equally spaced angles for `dim = 2`, ±1 for `dim = 1`, random otherwise.
pub fn direction_set(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    match dim {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count.max(2))
            .map(|i| {
                let a = std::f64::consts::TAU * (i as f64 + 0.5) / count.max(2) as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        3 => fibonacci(count).into_iter().map(|v| v.to_vec()).collect(),
        _ => random_directions(dim, count, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icosphere_counts() {
        assert_eq!(icosphere(0).len(), 12);
        assert_eq!(icosphere(1).len(), 42);
        assert_eq!(icosphere(3).len(), 642);
        assert!(icosphere(2).iter().all(|v| (norm3(*v) - 1.0).abs() < 1e-14));
    }

    #[test]
    fn fibonacci_is_balanced() {
        let pts = fibonacci(1000);
        let mean: Vec<f64> = (0..3).map(|k| pts.iter().map(|p| p[k]).sum::<f64>() / 1000.0).collect();
        assert!(mean.iter().all(|m| m.abs() < 1e-2));
    }

    #[test]
    fn rotation_is_orthogonal() {
        let m = random_rotation(3);
        for i in 0..3 {
            for j in 0..3 {
                let d = dot3(m[i], m[j]);
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }
}
