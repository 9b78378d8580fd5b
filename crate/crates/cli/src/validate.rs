//! Desk-scale oracle checks for one configuration.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use range_enclosure::axis::axis_segments;
use range_enclosure::oracle::TRUNCATION;
use range_enclosure::pseudo::{epsilon0, KappaLambda};
use range_enclosure::{
    contains, quartic_coeffs, sample_numerical_range, sigma_min_t, solve_quartic, ComplexPoint, MatrixPair,
};
use rayon::prelude::*;
use serde_json::Value;

use crate::config::Problem;
use crate::output::{num, obj, to_json_string};
use crate::Failure;

const MATRIX_DIM: usize = 16;
const SAMPLES: usize = 2000;
const EXTERIOR_GRID: usize = 64;
const PAIRS: u64 = 4;
const CERTIFICATE_SLACK: f64 = 1e-10;
const EPS0_POINTS: usize = 64;
const EPS0_GRID: usize = 200;
const AXIS_POINTS: usize = 4000;
const VIETA_TRIALS: usize = 1000;
const VIETA_REL: f64 = 1e-9;

struct Suite {
    name: &'static str,
    checked: usize,
    violations: usize,
    worst: Option<f64>,
}

impl Suite {
    fn json(&self) -> Value {
        obj([
            ("name", self.name.into()),
            ("pass", (self.violations == 0).into()),
            ("checked", self.checked.into()),
            ("violations", self.violations.into()),
            ("worst", self.worst.map_or(Value::Null, num)),
        ])
    }
}

fn truncated(x: f64) -> f64 {
    x.clamp(-TRUNCATION, TRUNCATION)
}

fn soundness(pb: &Problem) -> Result<Suite, Failure> {
    let pair = MatrixPair::diagonal(&pb.omega_box, MATRIX_DIM, pb.seed)?;
    let pts = sample_numerical_range(&pair, SAMPLES, pb.seed, &pb.params)?;
    let violations = pts.par_iter().filter(|&&w| !contains(w, &pb.omega_box, &pb.params).inside).count();
    Ok(Suite { name: "enclosure_soundness", checked: pts.len(), violations, worst: None })
}

fn viewport_grid(pb: &Problem, n: usize) -> Vec<Complex64> {
    let v = pb.viewport();
    (0..n * n)
        .map(|k| {
            Complex64::new(
                v.re_min + ((k % n) as f64 + 0.5) * (v.re_max - v.re_min) / n as f64,
                v.im_min + ((k / n) as f64 + 0.5) * (v.im_max - v.im_min) / n as f64,
            )
        })
        .collect()
}

fn certificate(pb: &Problem) -> Result<Suite, Failure> {
    let exterior: Vec<(Complex64, f64)> = viewport_grid(pb, EXTERIOR_GRID)
        .into_iter()
        .filter(|&w| !contains(ComplexPoint::Finite(w), &pb.omega_box, &pb.params).inside)
        .filter_map(|w| epsilon0(w, &pb.omega_box, &pb.params).ok().map(|e| (w, e.value)))
        .collect();
    let (mut checked, mut violations, mut worst) = (0, 0, f64::INFINITY);
    for k in 0..PAIRS {
        let pair = MatrixPair::diagonal(&pb.omega_box, MATRIX_DIM, pb.seed + k)?;
        for &(w, e) in &exterior {
            let s = sigma_min_t(&pair, w, &pb.params)?;
            worst = worst.min(s - e);
            checked += 1;
            if s < e - CERTIFICATE_SLACK {
                violations += 1;
            }
        }
    }
    Ok(Suite { name: "resolvent_bound", checked, violations, worst: worst.is_finite().then_some(worst) })
}

fn eps0_grid(pb: &Problem) -> Result<Suite, Failure> {
    let (alo, ahi) = pb.omega_box.alpha();
    let (blo, bhi) = pb.omega_box.beta();
    let (alo, ahi, blo, bhi) = (truncated(alo), truncated(ahi), truncated(blo), truncated(bhi));
    let v = pb.viewport();
    let mut rng = ChaCha8Rng::seed_from_u64(pb.seed);
    let points: Vec<Complex64> = (0..EPS0_POINTS)
        .map(|_| Complex64::new(rng.random_range(v.re_min..v.re_max), rng.random_range(v.im_min..v.im_max)))
        .collect();
    let at = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / (EPS0_GRID - 1) as f64;
    let gaps: Vec<f64> = points
        .par_iter()
        .filter_map(|&w| {
            let kl = KappaLambda::new(w, &pb.params).ok()?;
            let e = epsilon0(w, &pb.omega_box, &pb.params).ok()?.value;
            let mut best = f64::INFINITY;
            for i in 0..EPS0_GRID {
                for j in 0..EPS0_GRID {
                    best = best.min(kl.residual(at(alo, ahi, i), at(blo, bhi, j)));
                }
            }
            Some((best - e) / (1.0 + e))
        })
        .collect();
    let violations = gaps.iter().filter(|&&g| g < -1e-10).count();
    let worst = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Suite { name: "eps0_grid", checked: gaps.len(), violations, worst: worst.is_finite().then_some(worst) })
}

fn axis_grid(pb: &Problem) -> Result<Suite, Failure> {
    let s = axis_segments(&pb.omega_box, &pb.params)?;
    let v = pb.viewport();
    let h = (v.im_max - v.im_min) / AXIS_POINTS as f64;
    let ends: Vec<f64> = s
        .segments
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .chain(s.isolated.iter().copied())
        .filter(|x| x.is_finite())
        .collect();
    let mut checked = 0;
    let mut violations = 0;
    for k in 0..=AXIS_POINTS {
        let mu = v.im_min + k as f64 * h;
        if ends.iter().any(|e| (e - mu).abs() <= 1.01 * h) {
            continue;
        }
        checked += 1;
        if contains(ComplexPoint::new(0.0, mu), &pb.omega_box, &pb.params).inside != s.contains(mu, 0.0) {
            violations += 1;
        }
    }
    Ok(Suite { name: "axis_grid", checked, violations, worst: None })
}

fn vieta(pb: &Problem) -> Result<Suite, Failure> {
    let (alo, ahi) = pb.omega_box.alpha();
    let (blo, bhi) = pb.omega_box.beta();
    let (alo, ahi, blo, bhi) = (truncated(alo), truncated(ahi), truncated(blo), truncated(bhi));
    let (c, d) = (pb.params.c(), pb.params.d());
    let mut rng = ChaCha8Rng::seed_from_u64(pb.seed ^ 0x5eed);
    let mut violations = 0;
    for _ in 0..VIETA_TRIALS {
        let alpha = alo + (ahi - alo) * rng.random::<f64>();
        let beta = blo + (bhi - blo) * rng.random::<f64>();
        let roots: Vec<Complex64> = solve_quartic(&quartic_coeffs(alpha, beta, &pb.params))?.finite().collect();
        let sum: Complex64 = roots.iter().sum();
        let prod: Complex64 = roots.iter().product();
        let mag = roots.iter().map(|r| r.norm()).sum::<f64>().max(1.0);
        let pmag: f64 = roots.iter().map(|r| r.norm().max(1.0)).product();
        let ok = roots.len() == 4
            && (sum - Complex64::new(0.0, -d)).norm() <= VIETA_REL * mag
            && (prod - Complex64::new(alpha * c, 0.0)).norm() <= VIETA_REL * pmag
            && roots.iter().all(|r| roots.contains(&Complex64::new(-r.re, r.im)));
        if !ok {
            violations += 1;
        }
    }
    Ok(Suite { name: "vieta_symmetry", checked: VIETA_TRIALS, violations, worst: None })
}

/// Runs every suite; the boolean is the overall verdict.
pub fn validate(pb: &Problem) -> Result<(String, bool), Failure> {
    let suites = [soundness(pb)?, certificate(pb)?, eps0_grid(pb)?, axis_grid(pb)?, vieta(pb)?];
    let pass = suites.iter().all(|s| s.violations == 0);
    let json = obj([("pass", pass.into()), ("suites", Value::Array(suites.iter().map(Suite::json).collect()))]);
    Ok((to_json_string(&json), pass))
}
