//! Roots of the monic quartic `p(w)`.
//!
//! For the enclosure family the rotated polynomial `p(i z)` has real
//! coefficients, so roots are computed in `z` with Ferrari's method using a
//! real resolvent root, polished by Newton's method in real or complex
//! arithmetic, and mapped back by `w = i z`. This keeps the root set exactly
//! symmetric under `w -> -conj(w)` and puts real `z` roots exactly on the
//! imaginary axis. Quartics without that structure go through a simultaneous
//! (Durand-Kerner) iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::problem::{poles, ComplexPoint, ExtReal, ProblemParams, QuarticCoeffs};
use crate::realpoly;
use crate::tol;

/// A cluster of numerically coincident roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub point: ComplexPoint,
    pub multiplicity: usize,
}

/// The four roots of a quartic with residuals and multiplicity clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct RootMultiset {
    pub roots: Vec<ComplexPoint>,
    /// `|p(root)|`; zero for roots at infinity and for exact limit roots.
    pub residuals: Vec<f64>,
    pub clusters: Vec<RootCluster>,
}

impl RootMultiset {
    fn from_roots(roots: Vec<ComplexPoint>, residuals: Vec<f64>) -> Self {
        let clusters = cluster(&roots);
        Self { roots, residuals, clusters }
    }

    /// The finite roots.
    pub fn finite(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.roots.iter().filter_map(|r| r.finite())
    }
}

/// Groups roots within `1e-7 (1 + |root|)` of each other.
pub fn cluster(roots: &[ComplexPoint]) -> Vec<RootCluster> {
    let mut out: Vec<RootCluster> = Vec::new();
    for r in roots {
        let hit = out.iter_mut().find(|cl| match (cl.point, r) {
            (ComplexPoint::Infinity, ComplexPoint::Infinity) => true,
            (ComplexPoint::Finite(a), ComplexPoint::Finite(b)) => {
                (a - b).norm() <= tol::CLUSTER_REL * (1.0 + a.norm().max(b.norm()))
            }
            _ => false,
        });
        match hit {
            Some(cl) => cl.multiplicity += 1,
            None => out.push(RootCluster { point: *r, multiplicity: 1 }),
        }
    }
    out
}

/// Residual target `1e-10 max(1, max_k |a_k| max(1, |r|)^k)`.
pub fn residual_bound(coeffs: &QuarticCoeffs, r: Complex64) -> f64 {
    let s = r.norm().max(1.0);
    let mut m: f64 = 1.0;
    let mut sk = 1.0;
    for a in coeffs.coeffs.iter() {
        m = m.max(a.norm() * sk);
        sk *= s;
    }
    tol::RESIDUAL_REL * m
}

pub fn solve_quartic(coeffs: &QuarticCoeffs) -> Result<RootMultiset> {
    let rot = coeffs.rotated();
    let scale = rot.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let real_structure = rot.iter().all(|a| a.im.abs() <= 1e-15 * scale);

    let mut roots: Vec<Complex64> = if real_structure {
        let b = [rot[0].re, rot[1].re, rot[2].re, rot[3].re, rot[4].re];
        real_quartic_roots(&b).into_iter().map(|z| Complex64::new(-z.im, z.re)).collect()
    } else {
        durand_kerner(coeffs)
    };

    let mut residuals: Vec<f64> = roots.iter().map(|&r| coeffs.eval(r).norm()).collect();
    let mut ok = roots.iter().zip(&residuals).all(|(&r, &res)| res <= residual_bound(coeffs, r));
    if !ok && real_structure {
        let alt = durand_kerner(coeffs);
        let alt_res: Vec<f64> = alt.iter().map(|&r| coeffs.eval(r).norm()).collect();
        if alt.iter().zip(&alt_res).all(|(&r, &res)| res <= residual_bound(coeffs, r)) {
            roots = alt;
            residuals = alt_res;
            ok = true;
        }
    }
    if !ok {
        let (k, _) = roots
            .iter()
            .zip(&residuals)
            .enumerate()
            .map(|(k, (&r, &res))| (k, res / residual_bound(coeffs, r)))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        return Err(Error::ConvergenceFailure { residual: residuals[k], bound: residual_bound(coeffs, roots[k]) });
    }
    let pts = roots.into_iter().map(ComplexPoint::Finite).collect();
    Ok(RootMultiset::from_roots(pts, residuals))
}

/// Roots of `z^4 + b3 z^3 + b2 z^2 + b1 z + b0` with real coefficients
/// (`b[4]` must be 1). Complex roots come in exact conjugate pairs.
pub(crate) fn real_quartic_roots(b: &[f64; 5]) -> Vec<Complex64> {
    let (a, bb, c, d) = (b[3], b[2], b[1], b[0]);
    let a2 = a * a;
    let p = bb - 3.0 * a2 / 8.0;
    let q = c - a * bb / 2.0 + a2 * a / 8.0;
    let r = d - a * c / 4.0 + a2 * bb / 16.0 - 3.0 * a2 * a2 / 256.0;
    let shift = -a / 4.0;

    let resolvent = [-q * q, 2.0 * p * p - 8.0 * r, 8.0 * p, 8.0];
    let m = realpoly::real_roots(&resolvent).last().map(|rr| rr.x).unwrap_or(0.0).max(0.0);
    let mag = p.abs().max(r.abs().sqrt()).max(f64::MIN_POSITIVE);

    let mut ys: Vec<Complex64> = Vec::with_capacity(4);
    if m <= 1e-14 * mag {
        // Biquadratic y^4 + p y^2 + r (q vanishes to working precision).
        let disc = p * p - 4.0 * r;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            let u1 = if p > 0.0 { -(p + sq) / 2.0 } else { (-p + sq) / 2.0 };
            let u2 = if u1 != 0.0 { r / u1 } else { (-p - sq.copysign(p)) / 2.0 };
            for u in [u1, u2] {
                let s = Complex64::new(u, 0.0).sqrt();
                ys.push(s);
                ys.push(-s);
            }
        } else {
            let sr = r.sqrt();
            let s = (2.0 * sr - p).max(0.0).sqrt();
            ys.extend(quadratic(-s, sr));
            ys.extend(quadratic(s, sr));
        }
    } else {
        let s = (2.0 * m).sqrt();
        let h = p / 2.0 + m;
        let t = q / (2.0 * s);
        ys.extend(quadratic(-s, h + t));
        ys.extend(quadratic(s, h - t));
    }

    let mut zs: Vec<Complex64> = ys.into_iter().map(|y| y + shift).collect();
    symmetrize_and_polish(b, &mut zs);
    zs
}

/// Roots of `y^2 + bb y + c` as a real pair or an exact conjugate pair.
fn quadratic(bb: f64, c: f64) -> [Complex64; 2] {
    let disc = bb * bb - 4.0 * c;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let q = -0.5 * (bb + sq.copysign(bb));
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        }
        [Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -bb / 2.0;
        let im = (-disc).sqrt() / 2.0;
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn eval_real_c(b: &[f64; 5], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in b.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Newton polishing that keeps real roots real and conjugate pairs exact.
fn symmetrize_and_polish(b: &[f64; 5], zs: &mut [Complex64]) {
    let n = zs.len();
    let mut done = vec![false; n];
    for i in 0..n {
        if done[i] {
            continue;
        }
        done[i] = true;
        if zs[i].im == 0.0 {
            zs[i] = Complex64::new(newton(b, Complex64::new(zs[i].re, 0.0), true).re, 0.0);
            continue;
        }
        let partner = (0..n).find(|&j| !done[j] && zs[j].im != 0.0 && zs[j].re == zs[i].re && zs[j].im == -zs[i].im);
        let upper = if zs[i].im > 0.0 { zs[i] } else { zs[i].conj() };
        let mut z = newton(b, upper, false);
        if z.im < 0.0 {
            z = z.conj();
        }
        match partner {
            Some(j) => {
                done[j] = true;
                zs[i] = z;
                zs[j] = z.conj();
            }
            None => zs[i] = z,
        }
    }
}

fn newton(b: &[f64; 5], mut z: Complex64, real: bool) -> Complex64 {
    let mut val = eval_real_c(b, z).0.norm();
    for _ in 0..12 {
        if val == 0.0 {
            break;
        }
        let (p, dp) = eval_real_c(b, z);
        if dp.norm() == 0.0 {
            break;
        }
        let mut step = p / dp;
        if real {
            step.im = 0.0;
        }
        let cand = z - step;
        let cv = eval_real_c(b, cand).0.norm();
        if cv < val {
            z = cand;
            val = cv;
        } else {
            break;
        }
    }
    z
}

fn durand_kerner(coeffs: &QuarticCoeffs) -> Vec<Complex64> {
    let a = &coeffs.coeffs;
    let bound = 1.0 + a[..4].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..4).map(|k| seed.powu(k as u32) * (0.5 * bound)).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..4 {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..4 {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-300, 0.0);
            }
            let step = coeffs.eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-17 {
            break;
        }
    }
    z
}

/// Limit root sets when one parameter is infinite.
///
/// `alpha = +-inf` gives `{delta_+, delta_-, inf, inf}`; `beta = +inf`
/// gives a double root at 0 and two roots escaping to infinity along
/// `Im w = -d/2`.
pub fn limit_roots(alpha: ExtReal, beta: ExtReal, params: &ProblemParams) -> Result<RootMultiset> {
    match (alpha.is_finite(), beta.is_finite()) {
        (false, true) => {
            let p = poles(params);
            let roots = vec![
                ComplexPoint::Finite(p.delta_plus),
                ComplexPoint::Finite(p.delta_minus),
                ComplexPoint::Infinity,
                ComplexPoint::Infinity,
            ];
            Ok(RootMultiset::from_roots(roots, vec![0.0; 4]))
        }
        (true, false) if beta == ExtReal::PosInfinity => {
            let zero = ComplexPoint::new(0.0, 0.0);
            let roots = vec![zero, zero, ComplexPoint::Infinity, ComplexPoint::Infinity];
            Ok(RootMultiset::from_roots(roots, vec![0.0; 4]))
        }
        _ => Err(Error::InvalidArgument(
            "limit_roots needs alpha = +-inf with finite beta, or beta = +inf with finite alpha".into(),
        )),
    }
}
