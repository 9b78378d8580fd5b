//! Pointwise membership in the enclosure.
//!
//! Off the imaginary axis a point `w` is a root of exactly one quartic in the
//! family, with parameters given by the inverse maps [`beta_hat`] and
//! [`alpha_hat`]; on the axis the admissible `(alpha, beta)` form a line and
//! membership reduces to a sign test over the box corners.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::problem::{in_disk, near_point, poles, ComplexPoint, DiskPosition, OmegaBox, ProblemParams};
use crate::tol;

/// Which of the special points decided membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialRule {
    Zero,
    DeltaPlus,
    DeltaMinus,
    Infinity,
}

/// Edge of the box on which the axis line `alpha + mu^2 + k beta = 0` was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxEdge {
    AlphaLo,
    AlphaHi,
    BetaLo,
    BetaHi,
}

/// What decided a membership query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Witness {
    Special(SpecialRule),
    /// Axis point; `Some(edge)` names an edge met by the admissible line.
    Axis(Option<BoxEdge>),
    OffAxis {
        beta_hat: f64,
        alpha_hat: f64,
    },
    /// Off-axis point on the circle `|w + ic/d| = c/d`.
    DiskBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipVerdict {
    pub inside: bool,
    pub witness: Witness,
    /// The deciding quantity sits within `1e-8 (1 + |endpoint|)` of an interval end.
    pub boundary_flag: bool,
}

fn disk_denominator(omega: Complex64, params: &ProblemParams) -> Result<f64> {
    if let DiskPosition::OnBoundary(_) = in_disk(omega, params) {
        return Err(Error::OnDiskBoundary);
    }
    let (x, y) = (omega.re, omega.im);
    Ok(params.d() * (x * x + y * y) + 2.0 * params.c() * y)
}

/// The unique `beta` for which the off-axis point `w` is a root of `p`.
pub fn beta_hat(omega: Complex64, params: &ProblemParams) -> Result<f64> {
    let den = disk_denominator(omega, params)?;
    let (c, d) = (params.c(), params.d());
    let (x2, y) = (omega.re * omega.re, omega.im);
    let u = -x2 + y * y + d * y + c;
    let v = 2.0 * y + d;
    Ok(-2.0 * y * (u * u + x2 * v * v) / den)
}

/// The unique `alpha` for which the off-axis point `w` is a root of `p`.
pub fn alpha_hat(omega: Complex64, params: &ProblemParams) -> Result<f64> {
    let den = disk_denominator(omega, params)?;
    let m2 = omega.norm_sqr();
    Ok((2.0 * omega.im + params.d()) * m2 * m2 / den)
}

/// Flags `(in Pi_beta, in Pi_alpha)`: the regions where `beta_hat >= 0` and
/// `alpha_hat >= 0` respectively.
pub fn sign_regions(omega: Complex64, params: &ProblemParams) -> (bool, bool) {
    let pos = in_disk(omega, params);
    let outside_closure = matches!(pos, DiskPosition::Outside);
    let inside = matches!(pos, DiskPosition::Inside);
    let y = omega.im;
    let half = -params.d() / 2.0;
    let pi_beta = outside_closure && y <= 0.0;
    let pi_alpha = (outside_closure && y >= half) || (inside && y <= half);
    (pi_beta, pi_alpha)
}

fn near_end(x: f64, lo: f64, hi: f64) -> bool {
    let close = |e: f64| e.is_finite() && (x - e).abs() <= tol::BOUNDARY_FLAG_REL * (1.0 + e.abs());
    close(lo) || close(hi)
}

/// Membership of `w` in the enclosure for the box `omega_box`.
pub fn contains(omega: ComplexPoint, omega_box: &OmegaBox, params: &ProblemParams) -> MembershipVerdict {
    let w = match omega {
        ComplexPoint::Infinity => {
            return MembershipVerdict {
                inside: omega_box.alpha_unbounded(),
                witness: Witness::Special(SpecialRule::Infinity),
                boundary_flag: false,
            }
        }
        ComplexPoint::Finite(w) => w,
    };
    if let Some(v) = special_point(w, omega_box, params) {
        return v;
    }
    if w.re == 0.0 {
        return axis_verdict(w.im, omega_box, params);
    }
    let w = Complex64::new(w.re.abs(), w.im);
    let (bh, ah) = match (beta_hat(w, params), alpha_hat(w, params)) {
        (Ok(b), Ok(a)) => (b, a),
        _ => {
            return MembershipVerdict { inside: false, witness: Witness::DiskBoundary, boundary_flag: true };
        }
    };
    let (blo, bhi) = omega_box.beta();
    let (alo, ahi) = omega_box.alpha();
    let inside = omega_box.beta_contains(bh) && omega_box.alpha_contains(ah);
    MembershipVerdict {
        inside,
        witness: Witness::OffAxis { beta_hat: bh, alpha_hat: ah },
        boundary_flag: near_end(bh, blo, bhi) || near_end(ah, alo, ahi),
    }
}

/// Special-point rules for `0`, `delta_+` and `delta_-`.
pub(crate) fn special_point(w: Complex64, b: &OmegaBox, params: &ProblemParams) -> Option<MembershipVerdict> {
    let c = params.c();
    let zero = Complex64::new(0.0, 0.0);
    let (blo, bhi) = b.beta();
    let zero_in_b = crate::problem::in_closed(0.0, blo, bhi);
    let verdict = |inside: bool, rule: SpecialRule| MembershipVerdict {
        inside,
        witness: Witness::Special(rule),
        boundary_flag: false,
    };
    if w == zero || near_point(w, zero) {
        return Some(verdict(b.alpha_contains(0.0) || c == 0.0, SpecialRule::Zero));
    }
    let p = poles(params);
    if near_point(w, p.delta_plus) {
        return Some(verdict(b.alpha_unbounded() || zero_in_b || c == 0.0, SpecialRule::DeltaPlus));
    }
    if near_point(w, p.delta_minus) {
        return Some(verdict(b.alpha_unbounded() || zero_in_b, SpecialRule::DeltaMinus));
    }
    None
}

/// Corner values of `g(alpha, beta) = alpha + mu^2 + k beta` with
/// `k = mu^2 / (c + d mu + mu^2)`, in the order
/// `(alo,blo), (alo,bhi), (ahi,blo), (ahi,bhi)`; `None` for indeterminate
/// `inf - inf` corners.
pub(crate) fn axis_corner_values(mu: f64, b: &OmegaBox, params: &ProblemParams) -> [Option<f64>; 4] {
    let mu2 = mu * mu;
    let k = mu2 / (params.c() + params.d() * mu + mu2);
    let (alo, ahi) = b.alpha();
    let (blo, bhi) = b.beta();
    let g = |a: f64, be: f64| {
        let kb = if be.is_infinite() { k.signum() * be } else { k * be };
        let v = a + mu2 + kb;
        if v.is_nan() {
            None
        } else {
            Some(v)
        }
    };
    [g(alo, blo), g(alo, bhi), g(ahi, blo), g(ahi, bhi)]
}

/// Axis test for `w = i mu` away from the special points.
pub(crate) fn axis_verdict(mu: f64, b: &OmegaBox, params: &ProblemParams) -> MembershipVerdict {
    let vals = axis_corner_values(mu, b, params);
    let mu2 = mu * mu;
    let k = mu2 / (params.c() + params.d() * mu + mu2);
    let fin = |x: f64| if x.is_finite() { x.abs() } else { 0.0 };
    let (alo, ahi) = b.alpha();
    let (blo, bhi) = b.beta();
    let scale = 1.0 + mu2 + fin(alo).max(fin(ahi)) + k.abs() * fin(blo).max(fin(bhi));
    let slack = tol::INTERVAL_REL * scale;
    let flag_slack = tol::BOUNDARY_FLAG_REL * scale;

    let present: Vec<f64> = vals.iter().flatten().copied().collect();
    let lo = present.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = present.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let inside = lo <= slack && hi >= -slack;
    let boundary_flag = lo.abs() <= flag_slack || hi.abs() <= flag_slack;

    let edge = if inside {
        let meets = |p: Option<f64>, q: Option<f64>| match (p, q) {
            (Some(p), Some(q)) => p.min(q) <= slack && p.max(q) >= -slack,
            _ => false,
        };
        [
            (BoxEdge::AlphaLo, vals[0], vals[1]),
            (BoxEdge::AlphaHi, vals[2], vals[3]),
            (BoxEdge::BetaLo, vals[0], vals[2]),
            (BoxEdge::BetaHi, vals[1], vals[3]),
        ]
        .iter()
        .find(|(_, p, q)| meets(*p, *q))
        .map(|(e, _, _)| *e)
        .or((!b.alpha_lo.is_finite()).then_some(BoxEdge::AlphaLo))
    } else {
        None
    };
    MembershipVerdict { inside, witness: Witness::Axis(edge), boundary_flag }
}

/// An ordinate `Y` such that no off-axis point with `|Im w| > Y` belongs to
/// the enclosure. Infinite when `W(B)` is unbounded.
///
/// For `y > 0` one has `|beta_hat| >= y^3 / d` and for `y < 0`
/// `|beta_hat| >= |y|^3 / (2d)` once `|y|` exceeds the listed constants.
pub fn exclusion_threshold(b: &OmegaBox, params: &ProblemParams) -> f64 {
    let (blo, bhi) = b.beta();
    if !bhi.is_finite() {
        return f64::INFINITY;
    }
    let (c, d) = (params.c(), params.d());
    let bmax = blo.abs().max(bhi.abs());
    let candidates = [2.0 * d, 2.0 * c.sqrt(), 2.0 * c / d, (2.0 * c).sqrt(), (2.0 * d * bmax).cbrt()];
    candidates.iter().copied().fold(0.0, f64::max) * (1.0 + 1e-9)
}
