//! Diagonal matrix realizations of a box, sampled numerical ranges of `T`
//! and smallest singular values of `T(w)`.
//!
//! For diagonal selfadjoint `A` and `B` the numerical ranges are the closed
//! intervals spanned by the diagonal entries, so a pair whose first entries
//! are the box corners realizes the box exactly (after truncating infinite
//! ends of the alpha interval).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::problem::{eval_t, quartic_coeffs, ComplexPoint, OmegaBox, ProblemParams};
use crate::quartic::solve_quartic;

/// Finite stand-in for infinite interval ends in matrix realizations.
pub const TRUNCATION: f64 = 1e6;

const BATCH: usize = 1024;

/// Diagonal entries of `A` and `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPair {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

fn truncate(x: f64) -> f64 {
    x.clamp(-TRUNCATION, TRUNCATION)
}

impl MatrixPair {
    /// Builds a pair from explicit diagonals.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidArgument(format!("diagonals of lengths {} and {}", a.len(), b.len())));
        }
        if a.iter().chain(&b).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("diagonal entries must be finite".into()));
        }
        if b.iter().all(|&x| x == 0.0) {
            return Err(Error::InvalidArgument("B must be nonzero".into()));
        }
        Ok(Self { a, b })
    }

    /// An `n x n` pair realizing `omega_box`: the first four diagonal slots hold
    /// the corners (as far as `n` allows), the rest are uniform in the
    /// (truncated) intervals.
    pub fn diagonal(omega_box: &OmegaBox, n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        let (alo, ahi) = omega_box.alpha();
        let (blo, bhi) = omega_box.beta();
        let (alo, ahi, blo, bhi) = (truncate(alo), truncate(ahi), truncate(blo), truncate(bhi));
        let corners = [(alo, blo), (ahi, bhi), (alo, bhi), (ahi, blo)];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (0..n)
            .map(|k| match corners.get(k) {
                Some(&p) => p,
                None => (alo + (ahi - alo) * rng.random::<f64>(), blo + (bhi - blo) * rng.random::<f64>()),
            })
            .unzip();
        Self::new(a, b)
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// `((A u, u), (B u, u)) / (u, u)`.
    pub fn quadratic_forms(&self, u: &[Complex64]) -> (f64, f64) {
        let (mut na, mut nb, mut nu) = (0.0, 0.0, 0.0);
        for ((uk, ak), bk) in u.iter().zip(&self.a).zip(&self.b) {
            let w = uk.norm_sqr();
            na += w * ak;
            nb += w * bk;
            nu += w;
        }
        (na / nu, nb / nu)
    }
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let mut u: Vec<Complex64> =
        (0..n).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let norm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        u.iter_mut().for_each(|z| *z /= norm);
    } else {
        u[0] = Complex64::new(1.0, 0.0);
    }
    u
}

/// Roots of `(T(w) u, u) = 0` for `n_samples` random unit vectors `u`.
///
/// Vectors have normalized standard normal complex components. Batches of
/// 1024 samples use independent ChaCha8 streams of `seed`, so the result does
/// not depend on the thread count.
pub fn sample_numerical_range(
    pair: &MatrixPair,
    n_samples: usize,
    seed: u64,
    params: &ProblemParams,
) -> Result<Vec<ComplexPoint>> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be positive".into()));
    }
    let batches: Vec<Result<Vec<ComplexPoint>>> = (0..n_samples.div_ceil(BATCH))
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(batch as u64);
            let count = BATCH.min(n_samples - batch * BATCH);
            let mut out = Vec::with_capacity(4 * count);
            for _ in 0..count {
                let u = random_unit(&mut rng, pair.dim());
                let (alpha, beta) = pair.quadratic_forms(&u);
                out.extend(solve_quartic(&quartic_coeffs(alpha, beta, params))?.roots);
            }
            Ok(out)
        })
        .collect();
    let mut points = Vec::with_capacity(4 * n_samples);
    for b in batches {
        points.extend(b?);
    }
    Ok(points)
}

/// Smallest singular value of the diagonal matrix `T(w)`.
pub fn sigma_min_t(pair: &MatrixPair, omega: Complex64, params: &ProblemParams) -> Result<f64> {
    let mut best = f64::INFINITY;
    for (&a, &b) in pair.a.iter().zip(&pair.b) {
        best = best.min(eval_t(a, b, omega, params)?.norm());
    }
    Ok(best)
}
