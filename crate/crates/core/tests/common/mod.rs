#![allow(dead_code)]

use nalgebra::{Complex, Matrix4};
use num_complex::Complex64;
use range_enclosure::ProblemParams;

/// Roots of `p(w)` from the eigenvalues of the companion matrix of the real
/// polynomial `p(i z) = z^4 + d z^3 + (alpha + beta + c) z^2 + alpha d z + alpha c`.
pub fn companion_roots(alpha: f64, beta: f64, params: &ProblemParams) -> Vec<Complex64> {
    let (c, d) = (params.c(), params.d());
    real_companion_roots(&[alpha * c, alpha * d, alpha + beta + c, d])
        .into_iter()
        .map(|z| Complex64::new(-z.im, z.re))
        .collect()
}

/// Eigenvalues of the companion matrix of the monic quartic with lower
/// coefficients `a[0..4]`.
pub fn real_companion_roots(a: &[f64; 4]) -> Vec<Complex64> {
    let mut m = Matrix4::<f64>::zeros();
    for i in 1..4 {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..4 {
        m[(i, 3)] = -a[i];
    }
    m.complex_eigenvalues().iter().map(|z: &Complex<f64>| Complex64::new(z.re, z.im)).collect()
}

/// Real roots (imaginary part below `tol`) of a real monic quartic via the
/// companion oracle.
pub fn companion_real_count(a: &[f64; 4], tol: f64) -> usize {
    real_companion_roots(a).iter().filter(|z| z.im.abs() <= tol).count()
}

/// Greedy matching distance between two root lists of equal length, scaled by
/// `1 + |root|`.
pub fn match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, dist) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm() / (1.0 + x.norm())))
            .fold((usize::MAX, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc });
        used[j] = true;
        worst = worst.max(dist);
    }
    worst
}
