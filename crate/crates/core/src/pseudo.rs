//! The epsilon-pseudo enclosure: distance `eps0(w) = min |t(alpha, beta)(w)|`
//! over the box, the resolvent bound `1/eps0`, level-set contours and the
//! axis part via an inflated alpha interval.
//!
//! With `kappa = w^2 / (c - i d w - w^2)` and `lambda = w^2`,
//! `|t| = |(beta kappa_im + lambda_im, alpha - kappa_re beta - lambda_re)|`,
//! a linear least-squares residual in `(alpha, beta)`; its minimum over the
//! box is attained at one of at most three candidates.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::axis::{axis_segments, AxisStructure};
use crate::boundary::Viewport;
use crate::error::{Error, Result};
use crate::problem::{is_pole, pole_factor, ExtReal, OmegaBox, ProblemParams};

/// The constants `kappa` and `lambda` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaLambda {
    pub kappa: Complex64,
    pub lambda: Complex64,
}

impl KappaLambda {
    pub fn new(omega: Complex64, params: &ProblemParams) -> Result<Self> {
        if is_pole(omega, params) {
            return Err(Error::PoleEvaluation { re: omega.re, im: omega.im });
        }
        let lambda = omega * omega;
        Ok(KappaLambda { kappa: lambda / pole_factor(omega, params), lambda })
    }

    /// `|t(alpha, beta)|` for finite parameters.
    pub fn residual(&self, alpha: f64, beta: f64) -> f64 {
        let (k, l) = (self.kappa, self.lambda);
        (beta * k.im + l.im).hypot(alpha - k.re * beta - l.re)
    }
}

/// Which candidate attained the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Epsilon0Branch {
    AlphaLo,
    AlphaHi,
    /// `alpha` chosen so that the real residual vanishes.
    Interior,
    /// `kappa_re = 0`: the two residual components separate.
    AxisSeparable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epsilon0Result {
    pub value: f64,
    pub argmin: (f64, f64),
    pub branch: Epsilon0Branch,
}

/// Point of `[lo, hi]` closest to `x` (the ends may be infinite).
fn clamp(x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo {
        lo
    } else if x > hi {
        hi
    } else {
        x
    }
}

/// Some point of `[lo, hi]`, preferring the midpoint.
fn any_point(lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo,
        (false, true) => hi,
        (false, false) => 0.0,
    }
}

/// Exact minimum of `|t(alpha, beta)(w)|` over the box.
pub fn epsilon0(omega: Complex64, b: &OmegaBox, params: &ProblemParams) -> Result<Epsilon0Result> {
    let kl = KappaLambda::new(omega, params)?;
    Ok(epsilon0_kl(&kl, b))
}

fn epsilon0_kl(kl: &KappaLambda, b: &OmegaBox) -> Epsilon0Result {
    let (k, l) = (kl.kappa, kl.lambda);
    let (alo, ahi) = b.alpha();
    let (blo, bhi) = b.beta();

    let beta_closest_to_root = |lo: f64, hi: f64| -> (f64, bool) {
        if k.im == 0.0 {
            (any_point(lo, hi), l.im == 0.0)
        } else {
            let target = -l.im / k.im;
            let beta = clamp(target, lo, hi);
            (beta, beta == target)
        }
    };

    if k.re == 0.0 {
        let (beta, exact) = beta_closest_to_root(blo, bhi);
        let alpha = clamp(l.re, alo, ahi);
        let im_part = if exact { 0.0 } else { beta * k.im + l.im };
        let value = im_part.hypot(alpha - l.re);
        return Epsilon0Result { value, argmin: (alpha, beta), branch: Epsilon0Branch::AxisSeparable };
    }

    let k2 = k.norm_sqr();
    let mut best = Epsilon0Result { value: f64::INFINITY, argmin: (alo, blo), branch: Epsilon0Branch::AlphaLo };
    for (alpha, branch) in [(alo, Epsilon0Branch::AlphaLo), (ahi, Epsilon0Branch::AlphaHi)] {
        if !alpha.is_finite() {
            // |t| grows without bound along an infinite alpha end.
            continue;
        }
        let beta = clamp(-(k.im * l.im - k.re * (alpha - l.re)) / k2, blo, bhi);
        let value = kl.residual(alpha, beta);
        if value < best.value {
            best = Epsilon0Result { value, argmin: (alpha, beta), branch };
        }
    }

    let (b0, b1) = ((alo - l.re) / k.re, (ahi - l.re) / k.re);
    let (lo, hi) = if b0 <= b1 { (b0, b1) } else { (b1, b0) };
    let (lo, hi) = (lo.max(blo), hi.min(bhi));
    if lo <= hi {
        let (beta, exact) = beta_closest_to_root(lo, hi);
        let alpha = beta * k.re + l.re;
        // The real residual vanishes by the choice of alpha.
        let value = if exact { 0.0 } else { (beta * k.im + l.im).abs() };
        if value < best.value {
            best = Epsilon0Result { value, argmin: (alpha, beta), branch: Epsilon0Branch::Interior };
        }
    }
    best
}

/// Upper bound `1/eps0` for the resolvent norm; `+inf` inside the enclosure.
pub fn resolvent_bound(omega: Complex64, b: &OmegaBox, params: &ProblemParams) -> Result<ExtReal> {
    let e = epsilon0(omega, b, params)?;
    Ok(if e.value > 0.0 { ExtReal::Finite(1.0 / e.value) } else { ExtReal::PosInfinity })
}

/// Axis part of the closure of the pseudo enclosure: the axis structure of
/// the box with the alpha interval widened by `eps` on both sides.
pub fn pseudo_axis_segments(b: &OmegaBox, eps: f64, params: &ProblemParams) -> Result<AxisStructure> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be >= 0, got {eps}")));
    }
    axis_segments(&b.inflate_alpha(eps), params)
}

/// Level function `ln eps0 - ln eps`, nudging off the poles.
fn level(z: Complex64, b: &OmegaBox, eps: f64, params: &ProblemParams) -> f64 {
    let kl = KappaLambda::new(z, params)
        .or_else(|_| KappaLambda::new(z + Complex64::new(1e-9 * (1.0 + z.norm()), 0.0), params))
        .expect("a nudged point is not a pole");
    (epsilon0_kl(&kl, b).value + 1e-300).ln() - eps.ln()
}

/// Polishes a level crossing on the segment `a-b` by bisection.
fn polish(a: Complex64, fa: f64, b: Complex64, box_: &OmegaBox, eps: f64, params: &ProblemParams) -> Complex64 {
    let (mut a, mut b) = (a, b);
    let sa = fa > 0.0;
    for _ in 0..60 {
        let m = (a + b) * 0.5;
        if m == a || m == b {
            break;
        }
        if (level(m, box_, eps, params) > 0.0) == sa {
            a = m;
        } else {
            b = m;
        }
    }
    (a + b) * 0.5
}

/// Contours `eps0(w) = eps` over the viewport by marching squares on
/// `ln eps0 - ln eps`, with every vertex polished on its cell edge.
pub fn pseudo_contour(
    b: &OmegaBox,
    eps: f64,
    viewport: &Viewport,
    resolution: usize,
    params: &ProblemParams,
) -> Result<Vec<Vec<Complex64>>> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    let nx = resolution.max(2);
    let ny = resolution.max(2);
    let v = *viewport;
    let hx = (v.re_max - v.re_min) / nx as f64;
    let hy = (v.im_max - v.im_min) / ny as f64;
    let node = |i: usize, j: usize| Complex64::new(v.re_min + i as f64 * hx, v.im_max - j as f64 * hy);
    let w = nx + 1;
    let f: Vec<f64> = (0..w * (ny + 1)).into_par_iter().map(|k| level(node(k % w, k / w), b, eps, params)).collect();
    let val = |i: usize, j: usize| f[j * w + i];

    // Edge ids: 2 * node index for the edge to the right, +1 for the edge below.
    let h_edge = |i: usize, j: usize| 2 * (j * w + i);
    let v_edge = |i: usize, j: usize| 2 * (j * w + i) + 1;
    let mut points: HashMap<usize, Complex64> = HashMap::new();
    let mut crossing = |id: usize, (i0, j0): (usize, usize), (i1, j1): (usize, usize)| -> usize {
        points.entry(id).or_insert_with(|| polish(node(i0, j0), val(i0, j0), node(i1, j1), b, eps, params));
        id
    };

    let mut segments: Vec<(usize, usize)> = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let s = [val(i, j) > 0.0, val(i + 1, j) > 0.0, val(i + 1, j + 1) > 0.0, val(i, j + 1) > 0.0];
            // Edges: top, right, bottom, left.
            let edges = [
                (h_edge(i, j), (i, j), (i + 1, j), s[0] != s[1]),
                (v_edge(i + 1, j), (i + 1, j), (i + 1, j + 1), s[1] != s[2]),
                (h_edge(i, j + 1), (i, j + 1), (i + 1, j + 1), s[3] != s[2]),
                (v_edge(i, j), (i, j), (i, j + 1), s[0] != s[3]),
            ];
            let cut: Vec<usize> = (0..4).filter(|&e| edges[e].3).collect();
            let mut id = |e: usize| crossing(edges[e].0, edges[e].1, edges[e].2);
            match cut.len() {
                2 => segments.push((id(cut[0]), id(cut[1]))),
                4 => {
                    let center = node(i, j) + Complex64::new(0.5 * hx, -0.5 * hy);
                    let sc = level(center, b, eps, params) > 0.0;
                    if sc == s[0] {
                        segments.push((id(0), id(1)));
                        segments.push((id(3), id(2)));
                    } else {
                        segments.push((id(0), id(3)));
                        segments.push((id(1), id(2)));
                    }
                }
                _ => {}
            }
        }
    }

    // Chain segments sharing an edge crossing into polylines.
    let mut at: HashMap<usize, Vec<usize>> = HashMap::new();
    for (s, &(p, q)) in segments.iter().enumerate() {
        at.entry(p).or_default().push(s);
        at.entry(q).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (p, q) = segments[start];
        let mut chain = vec![p, q];
        for forward in [true, false] {
            loop {
                let end = if forward { *chain.last().unwrap() } else { chain[0] };
                let Some(&next) = at[&end].iter().find(|&&s| !used[s]) else { break };
                used[next] = true;
                let (a, c) = segments[next];
                let other = if a == end { c } else { a };
                if forward {
                    chain.push(other);
                } else {
                    chain.insert(0, other);
                }
            }
        }
        out.push(chain.into_iter().map(|id| points[&id]).collect());
    }
    Ok(out)
}
