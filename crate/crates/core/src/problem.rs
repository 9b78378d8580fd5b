//! Problem parameters, the Omega box, poles and the scalar functional t.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// The scalars `c >= 0` and `d > 0` of the rational coefficient
/// `w^2 / (c - i d w - w^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    c: f64,
    d: f64,
}

impl ProblemParams {
    pub fn new(c: f64, d: f64) -> Result<Self> {
        if !c.is_finite() || !d.is_finite() {
            return Err(Error::InvalidParams(format!("c = {c}, d = {d} must be finite")));
        }
        if c < 0.0 {
            return Err(Error::InvalidParams(format!("c = {c} must be nonnegative")));
        }
        if d <= 0.0 {
            return Err(Error::InvalidParams(format!("d = {d} must be positive")));
        }
        Ok(Self { c, d })
    }

    #[inline]
    pub fn c(&self) -> f64 {
        self.c
    }

    #[inline]
    pub fn d(&self) -> f64 {
        self.d
    }

    /// True when both poles lie on the imaginary axis (`d >= 2 sqrt(c)`).
    pub fn poles_on_axis(&self) -> bool {
        self.d * self.d >= 4.0 * self.c
    }
}

/// A point of the extended real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInfinity,
    Finite(f64),
    PosInfinity,
}

impl ExtReal {
    /// Maps `f64` infinities to the tagged variants. NaN is rejected.
    pub fn from_f64(x: f64) -> Result<Self> {
        if x.is_nan() {
            Err(Error::InvalidArgument("NaN is not an extended real".into()))
        } else if x == f64::INFINITY {
            Ok(ExtReal::PosInfinity)
        } else if x == f64::NEG_INFINITY {
            Ok(ExtReal::NegInfinity)
        } else {
            Ok(ExtReal::Finite(x))
        }
    }

    /// The value as an `f64`, with infinities mapped to `f64` infinities.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInfinity => f64::NEG_INFINITY,
            ExtReal::Finite(x) => x,
            ExtReal::PosInfinity => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInfinity => write!(f, "-inf"),
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::PosInfinity => write!(f, "inf"),
        }
    }
}

/// The rectangle `closure(W(A)) x closure(W(B))`.
///
/// The lower end of the beta interval must be finite. The upper end may be
/// `+inf`; several analyses reject that case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaBox {
    pub alpha_lo: ExtReal,
    pub alpha_hi: ExtReal,
    pub beta_lo: ExtReal,
    pub beta_hi: ExtReal,
}

impl OmegaBox {
    pub fn new(alpha_lo: ExtReal, alpha_hi: ExtReal, beta_lo: ExtReal, beta_hi: ExtReal) -> Result<Self> {
        if alpha_lo > alpha_hi || alpha_lo == ExtReal::PosInfinity || alpha_hi == ExtReal::NegInfinity {
            return Err(Error::InvalidBox(format!("alpha interval [{alpha_lo}, {alpha_hi}]")));
        }
        if !beta_lo.is_finite() {
            return Err(Error::InvalidBox(format!("beta_lo = {beta_lo} must be finite")));
        }
        if beta_lo > beta_hi {
            return Err(Error::InvalidBox(format!("beta interval [{beta_lo}, {beta_hi}]")));
        }
        Ok(Self { alpha_lo, alpha_hi, beta_lo, beta_hi })
    }

    /// Convenience constructor for a box with finite endpoints.
    pub fn finite(alpha_lo: f64, alpha_hi: f64, beta_lo: f64, beta_hi: f64) -> Result<Self> {
        Self::new(
            ExtReal::from_f64(alpha_lo)?,
            ExtReal::from_f64(alpha_hi)?,
            ExtReal::from_f64(beta_lo)?,
            ExtReal::from_f64(beta_hi)?,
        )
    }

    pub fn alpha(&self) -> (f64, f64) {
        (self.alpha_lo.to_f64(), self.alpha_hi.to_f64())
    }

    pub fn beta(&self) -> (f64, f64) {
        (self.beta_lo.to_f64(), self.beta_hi.to_f64())
    }

    /// `W(A)` unbounded.
    pub fn alpha_unbounded(&self) -> bool {
        !self.alpha_lo.is_finite() || !self.alpha_hi.is_finite()
    }

    /// Whether `x` lies in the closed alpha interval (with endpoint slack).
    pub fn alpha_contains(&self, x: f64) -> bool {
        let (lo, hi) = self.alpha();
        in_closed(x, lo, hi)
    }

    pub fn beta_contains(&self, x: f64) -> bool {
        let (lo, hi) = self.beta();
        in_closed(x, lo, hi)
    }

    /// The box with the alpha interval widened by `eps` on both sides.
    pub fn inflate_alpha(&self, eps: f64) -> Self {
        let shift = |e: ExtReal, s: f64| match e {
            ExtReal::Finite(x) => ExtReal::Finite(x + s),
            other => other,
        };
        Self { alpha_lo: shift(self.alpha_lo, -eps), alpha_hi: shift(self.alpha_hi, eps), ..*self }
    }

    /// True when `W(A)` or `W(B)` is a single point.
    pub fn is_degenerate(&self) -> bool {
        self.alpha_lo == self.alpha_hi || self.beta_lo == self.beta_hi
    }
}

/// Closed-interval membership with slack `1e-12 (1 + |endpoint|)` at finite ends.
pub(crate) fn in_closed(x: f64, lo: f64, hi: f64) -> bool {
    let lo_ok = if lo.is_finite() { x >= lo - tol::interval_slack(lo) } else { lo <= x };
    let hi_ok = if hi.is_finite() { x <= hi + tol::interval_slack(hi) } else { x <= hi };
    lo_ok && hi_ok
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComplexPoint {
    Finite(Complex64),
    Infinity,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexPoint::Finite(Complex64::new(re, im))
    }

    pub fn finite(&self) -> Option<Complex64> {
        match self {
            ComplexPoint::Finite(z) => Some(*z),
            ComplexPoint::Infinity => None,
        }
    }

    /// Reflection `w -> -conj(w)` across the imaginary axis.
    pub fn mirror(&self) -> Self {
        match self {
            ComplexPoint::Finite(z) => ComplexPoint::Finite(Complex64::new(-z.re, z.im)),
            ComplexPoint::Infinity => ComplexPoint::Infinity,
        }
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        ComplexPoint::Finite(z)
    }
}

/// Pole data: `theta = sqrt(c - d^2/4)` (principal) and `delta_pm = +-theta - i d/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poles {
    pub theta: Complex64,
    pub delta_plus: Complex64,
    pub delta_minus: Complex64,
}

pub fn poles(params: &ProblemParams) -> Poles {
    let (c, d) = (params.c, params.d);
    let rad = c - d * d / 4.0;
    let theta = if rad >= 0.0 { Complex64::new(rad.sqrt(), 0.0) } else { Complex64::new(0.0, (-rad).sqrt()) };
    let shift = Complex64::new(0.0, -d / 2.0);
    Poles { theta, delta_plus: theta + shift, delta_minus: -theta + shift }
}

/// `|w - p| <= 1e-12 (1 + |p|)`.
pub(crate) fn near_point(w: Complex64, p: Complex64) -> bool {
    (w - p).norm() <= tol::SPECIAL_POINT_REL * (1.0 + p.norm())
}

/// Whether `w` coincides with one of the poles within tolerance.
pub fn is_pole(w: Complex64, params: &ProblemParams) -> bool {
    let p = poles(params);
    near_point(w, p.delta_plus) || near_point(w, p.delta_minus)
}

/// `c - i d w - w^2`.
#[inline]
pub fn pole_factor(w: Complex64, params: &ProblemParams) -> Complex64 {
    Complex64::new(params.c, 0.0) - I * params.d * w - w * w
}

/// `t(w) = alpha - w^2 - w^2 beta / (c - i d w - w^2)`.
pub fn eval_t(alpha: f64, beta: f64, omega: Complex64, params: &ProblemParams) -> Result<Complex64> {
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidArgument("alpha and beta must be finite".into()));
    }
    if is_pole(omega, params) {
        return Err(Error::PoleEvaluation { re: omega.re, im: omega.im });
    }
    let w2 = omega * omega;
    Ok(Complex64::new(alpha, 0.0) - w2 - w2 * beta / pole_factor(omega, params))
}

/// Monic coefficients of `p(w) = (alpha - w^2)(c - i d w - w^2) - beta w^2`,
/// stored with `coeffs[k]` multiplying `w^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticCoeffs {
    pub coeffs: [Complex64; 5],
}

impl QuarticCoeffs {
    /// Builds a monic quartic from lower coefficients `a0..a3`.
    pub fn monic(lower: [Complex64; 4]) -> Self {
        Self { coeffs: [lower[0], lower[1], lower[2], lower[3], Complex64::new(1.0, 0.0)] }
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * w + a)
    }

    /// Coefficients of `p(i z)`, i.e. `a_k i^k`. For the enclosure family these
    /// are real.
    pub fn rotated(&self) -> [Complex64; 5] {
        let mut out = self.coeffs;
        let mut ik = Complex64::new(1.0, 0.0);
        for a in out.iter_mut() {
            *a *= ik;
            ik *= I;
        }
        out
    }
}

pub fn quartic_coeffs(alpha: f64, beta: f64, params: &ProblemParams) -> QuarticCoeffs {
    let (c, d) = (params.c, params.d);
    QuarticCoeffs::monic([
        Complex64::new(alpha * c, 0.0),
        Complex64::new(0.0, -alpha * d),
        Complex64::new(-(alpha + beta + c), 0.0),
        Complex64::new(0.0, d),
    ])
}

/// Position of a point relative to the disk `|w + i c/d| < c/d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiskPosition {
    Inside,
    /// On the circle; carries the relative distance to it.
    OnBoundary(f64),
    Outside,
}

pub fn in_disk(omega: Complex64, params: &ProblemParams) -> DiskPosition {
    let (c, d) = (params.c, params.d);
    if c == 0.0 {
        return DiskPosition::Outside;
    }
    let r = c / d;
    let dist = (omega + Complex64::new(0.0, r)).norm();
    let rel = (dist - r) / r;
    if rel.abs() <= tol::DISK_REL {
        DiskPosition::OnBoundary(rel.abs())
    } else if rel < 0.0 {
        DiskPosition::Inside
    } else {
        DiskPosition::Outside
    }
}
