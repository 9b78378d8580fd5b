//! Real roots of real polynomials of low degree.
//!
//! Roots are isolated between consecutive critical points (found
//! recursively from the derivative) and refined by bisection, so every
//! real root is found regardless of conditioning. A critical point at which
//! the polynomial vanishes to working precision is reported as a multiple
//! root with multiplicity one more than its multiplicity in the derivative.

/// A real root with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRoot {
    pub x: f64,
    pub mult: usize,
}

/// Evaluates `sum a[k] x^k`.
pub fn eval(a: &[f64], x: f64) -> f64 {
    a.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `sum |a[k]| |x|^k`, the scale for rounding errors of [`eval`].
pub fn eval_scale(a: &[f64], x: f64) -> f64 {
    let ax = x.abs();
    a.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
}

pub fn derivative(a: &[f64]) -> Vec<f64> {
    a.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

fn trim(a: &[f64]) -> &[f64] {
    let mut n = a.len();
    while n > 0 && a[n - 1] == 0.0 {
        n -= 1;
    }
    &a[..n]
}

const ZERO_REL: f64 = 1e-14;

/// All real roots of `sum a[k] x^k`, sorted increasingly, with multiplicity.
///
/// The zero polynomial and constants yield no roots.
pub fn real_roots(a: &[f64]) -> Vec<RealRoot> {
    let a = trim(a);
    if a.len() <= 1 {
        return Vec::new();
    }
    // Factor out roots at zero exactly.
    let zeros = a.iter().take_while(|&&c| c == 0.0).count();
    let rest = &a[zeros..];
    let mut out = roots_nonzero(rest);
    if zeros > 0 {
        out.push(RealRoot { x: 0.0, mult: zeros });
        out.sort_by(|p, q| p.x.total_cmp(&q.x));
    }
    out
}

fn roots_nonzero(a: &[f64]) -> Vec<RealRoot> {
    let n = a.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![RealRoot { x: -a[0] / a[1], mult: 1 }];
    }
    let lead = a[n];
    let bound = 1.0 + a[..n].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let crit = real_roots(&derivative(a));

    let mut out: Vec<RealRoot> = Vec::new();
    let mut prev = -bound;
    let mut prev_is_root = false;
    for cp in crit.iter() {
        let x = cp.x;
        let v = eval(a, x);
        let is_root = v.abs() <= ZERO_REL * eval_scale(a, x);
        if !prev_is_root && !is_root {
            if let Some(r) = bisect(a, prev, x) {
                out.push(RealRoot { x: r, mult: 1 });
            }
        }
        if is_root {
            out.push(RealRoot { x, mult: cp.mult + 1 });
        }
        prev = x;
        prev_is_root = is_root;
    }
    if !prev_is_root {
        if let Some(r) = bisect(a, prev, bound) {
            out.push(RealRoot { x: r, mult: 1 });
        }
    }
    out
}

/// Root of a polynomial that is monotone on `[lo, hi]`, if its values at the
/// ends have opposite signs (or one vanishes).
fn bisect(a: &[f64], mut lo: f64, mut hi: f64) -> Option<f64> {
    let flo = eval(a, lo);
    let fhi = eval(a, hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if (flo > 0.0) == (fhi > 0.0) {
        return None;
    }
    let lo_positive = flo > 0.0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = eval(a, mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (vl, vh) = (eval(a, lo).abs(), eval(a, hi).abs());
    Some(if vl <= vh { lo } else { hi })
}

/// Number of real roots counted with multiplicity.
pub fn count_with_mult(roots: &[RealRoot]) -> usize {
    roots.iter().map(|r| r.mult).sum()
}
