//! Small dense vector helpers on slices.

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    (n > 0.0 && n.is_finite()).then(|| a.iter().map(|x| x / n).collect())
}

#[inline]
pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

#[inline]
pub fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Angle between two nonzero vectors, accurate near 0 and π.
pub fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    // Kahan's formula: 2·atan2(|a|b| - |b|a|, |a|b| + |b|a|).
    let na = norm(a);
    let nb = norm(b);
    let mut diff = 0.0;
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b) {
        let u = x * nb;
        let v = y * na;
        diff += (u - v) * (u - v);
        sum += (u + v) * (u + v);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

/// Orthonormal vectors spanning the complement of `span(rows)` in `R^dim`,
/// obtained by modified Gram–Schmidt over the rows followed by the standard
/// basis. At most `want` vectors are returned.
pub fn orthogonal_complement(rows: &[Vec<f64>], dim: usize, want: usize) -> Vec<Vec<f64>> {
    let scale = rows.iter().map(|r| norm(r)).fold(1.0, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let push = |v: &[f64], basis: &mut Vec<Vec<f64>>, tol: f64| -> bool {
        let mut w = v.to_vec();
        for _ in 0..2 {
            for b in basis.iter() {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = norm(&w);
        if n > tol {
            w.iter_mut().for_each(|x| *x /= n);
            basis.push(w);
            true
        } else {
            false
        }
    };
    for r in rows {
        push(r, &mut basis, 1e-10 * scale);
    }
    let span = basis.len();
    for i in 0..dim {
        if basis.len() - span >= want {
            break;
        }
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        push(&e, &mut basis, 1e-8);
    }
    basis.split_off(span)
}
