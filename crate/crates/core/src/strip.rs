//! Spectral-free horizontal strips of the fixed-beta and fixed-alpha curve
//! families.
//!
//! Existence follows from discriminant thresholds in `d`. The strip edges
//! are picked from the closed-form candidate ordinates (double roots of the
//! radicands and axis roots of `q_beta` / `q_alpha`) and every candidate pair
//! is checked against a direct scan of the curve.

use std::cmp::Ordering;

use crate::axis::{q_alpha_real_roots, q_beta_real_roots};
use crate::boundary::{fixed_alpha_x2, fixed_beta_x2};
use crate::error::{Error, Result};
use crate::membership::beta_hat;
use crate::problem::{ComplexPoint, ExtReal, ProblemParams};
use crate::realpoly;
use crate::tol;

/// Values of `d` where the discriminant of `q_beta` (or `q_alpha`) vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminantThresholds {
    pub d1: ExtReal,
    pub d2: ExtReal,
    pub d3: ExtReal,
}

/// Ascending coefficients in `dh = d^2/4` of the discriminant of `q_beta`
/// divided by `32 beta^2`.
pub fn discriminant_cubic_beta(beta: f64, c: f64) -> [f64; 4] {
    [
        8.0 * c.powi(3) * (beta + c),
        -3.0 * c * c * (5.0 * beta + 8.0 * c),
        -(27.0 / 32.0 * beta * beta - 6.0 * beta * c - 24.0 * c * c),
        beta - 8.0 * c,
    ]
}

/// Ascending coefficients in `dh = d^2/4` of the discriminant of `q_alpha`.
pub fn discriminant_cubic_alpha(alpha: f64, c: f64) -> [f64; 4] {
    let a2 = alpha * alpha;
    let a3 = a2 * alpha;
    [-256.0 * a3 * c.powi(3), 192.0 * a3 * c * c, -a2 * (27.0 * a2 - 6.0 * alpha * c + 27.0 * c * c), 4.0 * a3]
}

fn d_of(dh: f64) -> ExtReal {
    ExtReal::Finite(2.0 * dh.max(0.0).sqrt())
}

/// Positive roots of a cubic in `dh`, repeated by multiplicity.
fn positive_roots(a: &[f64; 4]) -> Vec<f64> {
    let mut out = Vec::new();
    for r in realpoly::real_roots(a) {
        if r.x > 0.0 {
            out.extend(std::iter::repeat_n(r.x, r.mult));
        }
    }
    out
}

/// Thresholds `d1 < d2 <= d3` for the fixed-beta slice; absent ones are `+inf`.
pub fn discriminant_ds_beta(beta: f64, params: &ProblemParams) -> Result<DiscriminantThresholds> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("thresholds need beta > 0, got {beta}")));
    }
    let c = params.c();
    let inf = ExtReal::PosInfinity;
    if c == 0.0 {
        // Cubic factors as dh^2 (beta - 27 beta^2 / (32 dh)) up to sign.
        return Ok(DiscriminantThresholds { d1: ExtReal::Finite(0.0), d2: d_of(27.0 * beta / 32.0), d3: inf });
    }
    let roots = positive_roots(&discriminant_cubic_beta(beta, c));
    let Some(&dh1) = roots.iter().find(|&&r| r < c) else {
        return Err(Error::VerificationFailure(format!("no discriminant root in (0, c) for beta = {beta}")));
    };
    let upper: Vec<f64> = roots.into_iter().filter(|&r| r > c).collect();
    let (d2, d3) = if beta < 4.0 * c {
        (inf, inf)
    } else if beta < 8.0 * c {
        match upper.as_slice() {
            [a, .., b] => (d_of(*a), d_of(*b)),
            [a] => (d_of(*a), d_of(*a)),
            [] => (d_of(beta), d_of(beta)),
        }
    } else {
        (upper.first().map_or(d_of(beta), |&a| d_of(a)), inf)
    };
    Ok(DiscriminantThresholds { d1: d_of(dh1), d2, d3 })
}

/// Largest `d` where the discriminant of `q_alpha` vanishes.
pub fn d0_alpha(alpha: f64, params: &ProblemParams) -> Result<ExtReal> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("d0 needs finite alpha != 0, got {alpha}")));
    }
    let c = params.c();
    if c == 0.0 {
        return Ok(if alpha < 0.0 { ExtReal::Finite(0.0) } else { d_of(27.0 * alpha / 4.0) });
    }
    let roots = positive_roots(&discriminant_cubic_alpha(alpha, c));
    roots
        .into_iter()
        .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))))
        .map(d_of)
        .ok_or_else(|| Error::VerificationFailure(format!("no positive discriminant root for alpha = {alpha}")))
}

/// Real-root count of `q_beta` implied by the thresholds.
pub fn predicted_q_beta_count(t: &DiscriminantThresholds, d: f64) -> usize {
    let d = ExtReal::Finite(d);
    if d < t.d1 {
        0
    } else if t.d2 <= d && d <= t.d3 {
        4
    } else {
        2
    }
}

/// Real-root count of `q_alpha` implied by `d0`.
pub fn predicted_q_alpha_count(alpha: f64, d0: ExtReal, d: f64) -> usize {
    let above = ExtReal::Finite(d) >= d0;
    match (alpha > 0.0, above) {
        (true, true) => 4,
        (true, false) => 2,
        (false, true) => 2,
        (false, false) => 0,
    }
}

/// Compares `d` with a threshold, refusing to decide inside the guard band.
fn compare(d: f64, t: ExtReal, what: &str) -> Result<Ordering> {
    match t {
        ExtReal::Finite(t) => {
            if (d - t).abs() <= tol::GUARD_BAND_REL * (1.0 + t.abs()) && d != t {
                Err(Error::Degenerate(format!("d = {d} is within the guard band of {what} = {t}")))
            } else {
                Ok(d.total_cmp(&t))
            }
        }
        ExtReal::PosInfinity => Ok(Ordering::Less),
        ExtReal::NegInfinity => Ok(Ordering::Greater),
    }
}

/// Whether the fixed-beta curve has a maximal strip: `d > min(2 sqrt(beta), d2)`.
pub fn strip_exists_beta(beta: f64, params: &ProblemParams) -> Result<bool> {
    let t = discriminant_ds_beta(beta, params)?;
    let s = ExtReal::Finite(2.0 * beta.sqrt());
    let thr = if t.d2 < s { t.d2 } else { s };
    Ok(compare(params.d(), thr, "min(2 sqrt(beta), d2)")? == Ordering::Greater)
}

/// Whether the fixed-alpha curve has a maximal strip: `alpha > 0` and
/// (`alpha < c` or `d > d0`).
pub fn strip_exists_alpha(alpha: f64, params: &ProblemParams) -> Result<bool> {
    if alpha < 0.0 {
        return Ok(false);
    }
    if alpha < params.c() {
        return Ok(true);
    }
    let d0 = d0_alpha(alpha, params)?;
    Ok(compare(params.d(), d0, "d0")? == Ordering::Greater)
}

/// A maximal strip `s_low < Im w < s_high` and the curve points on its edges.
#[derive(Debug, Clone, PartialEq)]
pub struct StripReport {
    pub exists: bool,
    pub s_low: f64,
    pub s_high: f64,
    pub low_points: Vec<ComplexPoint>,
    pub high_points: Vec<ComplexPoint>,
    pub low_on_axis: bool,
    pub high_on_axis: bool,
    /// Smallest imaginary part of the curve and whether it is attained on the
    /// imaginary axis.
    pub minimum: Option<(f64, bool)>,
}

impl StripReport {
    fn none(minimum: Option<(f64, bool)>) -> Self {
        StripReport {
            exists: false,
            s_low: f64::NAN,
            s_high: f64::NAN,
            low_points: Vec::new(),
            high_points: Vec::new(),
            low_on_axis: false,
            high_on_axis: false,
            minimum,
        }
    }
}

/// One curve family, for scanning.
#[derive(Debug, Clone, Copy)]
pub enum Family {
    /// `W` over all real alpha at fixed beta.
    Beta(f64),
    /// `W` over all beta >= 0 at fixed alpha.
    Alpha(f64),
}

impl Family {
    /// Positive real parts of the off-axis curve points at ordinate `y`.
    pub fn real_parts(&self, y: f64, params: &ProblemParams) -> Vec<f64> {
        self.real_parts_clamped(y, params, 0.0)
    }

    /// As [`Family::real_parts`], accepting a slightly negative inner radicand
    /// (relative `slack`) as zero; used at double roots of the radicand.
    fn real_parts_clamped(&self, y: f64, params: &ProblemParams, slack: f64) -> Vec<f64> {
        if y == 0.0 {
            return Vec::new();
        }
        let (p, q, x2) = match *self {
            Family::Beta(b) => {
                let (c, d) = (params.c(), params.d());
                let p = c - d * d / 2.0 - d * y - b * d / (4.0 * y);
                let q = b * c + c * c + 2.0 * c * d * y + 4.0 * c * y * y;
                (p, q, fixed_beta_x2(b, y, params))
            }
            Family::Alpha(a) => {
                let (c, d) = (params.c(), params.d());
                if y == -d / 2.0 {
                    return Vec::new();
                }
                let r = a * d / (2.0 * (d + 2.0 * y));
                let s = -2.0 * a * c * y / (d + 2.0 * y);
                (r, s, fixed_alpha_x2(a, y, params))
            }
        };
        let x2 = if x2[0].is_nan() && slack > 0.0 {
            let disc = p * p - q;
            if disc >= -slack * (p * p + q.abs()) {
                [p - y * y, p - y * y]
            } else {
                x2
            }
        } else {
            x2
        };
        let mut out: Vec<f64> = x2.iter().filter(|&&v| v > 0.0 && v.is_finite()).map(|v| v.sqrt()).collect();
        if let Family::Alpha(_) = self {
            out.retain(|&x| beta_hat(num_complex::Complex64::new(x, y), params).is_ok_and(|b| b >= 0.0));
        }
        out
    }

    /// Ordinates of the curve closure on the imaginary axis.
    pub fn axis_ordinates(&self, params: &ProblemParams) -> Vec<f64> {
        let c = params.c();
        let mut out: Vec<f64> = match *self {
            Family::Beta(b) => {
                let mut v: Vec<f64> =
                    q_beta_real_roots(b, params).map(|r| r.roots.iter().map(|r| r.x).collect()).unwrap_or_default();
                if c > 0.0 {
                    v.push(0.0);
                }
                v
            }
            Family::Alpha(a) => {
                let mut v: Vec<f64> = q_alpha_real_roots(a, params)
                    .map(|r| r.roots.iter().zip(&r.admissible).filter(|(_, &ok)| ok).map(|(r, _)| r.x).collect())
                    .unwrap_or_default();
                if a > 0.0 && c > 0.0 {
                    v.push(0.0);
                }
                v
            }
        };
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Ordinate assigned to the point at infinity: `-d/2` for the
    /// fixed-alpha family, where the unbounded branches approach it; none for
    /// the fixed-beta family, whose unbounded branch flattens out at `0`.
    pub fn infinity_ordinate(&self, params: &ProblemParams) -> Option<f64> {
        match self {
            Family::Beta(_) => None,
            Family::Alpha(_) => Some(-params.d() / 2.0),
        }
    }

    fn occupied(&self, y: f64, params: &ProblemParams) -> bool {
        !self.real_parts(y, params).is_empty()
    }
}

const SCAN_SAMPLES: usize = 10_000;
const TOUCH_REL: f64 = 1e-7;

/// True when no curve point has ordinate strictly between `lo` and `hi`
/// (margin `eps` on both sides), by a dense scan plus the axis points.
pub fn band_is_empty(family: Family, lo: f64, hi: f64, eps: f64, params: &ProblemParams) -> bool {
    let (a, b) = (lo + eps, hi - eps);
    if a >= b {
        return true;
    }
    if family.axis_ordinates(params).iter().chain(&family.infinity_ordinate(params)).any(|&m| m > a && m < b) {
        return false;
    }
    (0..=SCAN_SAMPLES).all(|k| !family.occupied(a + (b - a) * k as f64 / SCAN_SAMPLES as f64, params))
}

/// Curve points with ordinate `s` (within a relative `1e-7`) and whether
/// they lie on the imaginary axis; `None` when the line `Im w = s` misses the
/// curve.
fn touching(family: Family, s: f64, params: &ProblemParams) -> Option<(Vec<ComplexPoint>, bool)> {
    let h = TOUCH_REL * (1.0 + s.abs());
    if family.axis_ordinates(params).iter().any(|&m| (m - s).abs() <= h) {
        return Some((vec![ComplexPoint::new(0.0, s)], true));
    }
    let xs = family.real_parts_clamped(s, params, 1e-9);
    if let Some(&x) = xs.iter().max_by(|a, b| a.total_cmp(b)) {
        return Some((vec![ComplexPoint::new(x, s), ComplexPoint::new(-x, s)], false));
    }
    for k in -10..=10 {
        let y = s + h * k as f64 / 10.0;
        if let Some(&x) = family.real_parts(y, params).first() {
            return Some((vec![ComplexPoint::new(x, y), ComplexPoint::new(-x, y)], false));
        }
    }
    if family.infinity_ordinate(params).is_some_and(|m| (m - s).abs() <= h) {
        return Some((vec![ComplexPoint::Infinity], false));
    }
    None
}

/// Tries every pair of candidate ordinates and returns the widest verified
/// strip.
pub fn detect_strip(family: Family, candidates: &[f64], params: &ProblemParams) -> Option<StripReport> {
    let mut cand: Vec<f64> = candidates.iter().copied().filter(|s| s.is_finite()).collect();
    cand.sort_by(f64::total_cmp);
    cand.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * (1.0 + b.abs()));
    let touches: Vec<Option<(Vec<ComplexPoint>, bool)>> = cand.iter().map(|&s| touching(family, s, params)).collect();
    let mut best: Option<StripReport> = None;
    for i in 0..cand.len() {
        let Some(lo) = &touches[i] else { continue };
        for j in i + 1..cand.len() {
            let Some(hi) = &touches[j] else { continue };
            let width = cand[j] - cand[i];
            if best.as_ref().is_some_and(|b| b.s_high - b.s_low >= width) {
                continue;
            }
            let eps = (1e-6 * (1.0 + cand[i].abs())).min(width / 8.0);
            if !band_is_empty(family, cand[i], cand[j], eps, params) {
                continue;
            }
            best = Some(StripReport {
                exists: true,
                s_low: cand[i],
                s_high: cand[j],
                low_points: lo.0.clone(),
                high_points: hi.0.clone(),
                low_on_axis: lo.1,
                high_on_axis: hi.1,
                minimum: None,
            });
        }
    }
    best
}

/// Closed-form candidate edges of the fixed-beta family.
pub fn candidates_beta(beta: f64, params: &ProblemParams) -> Vec<f64> {
    let (c, d) = (params.c(), params.d());
    let mut out = Family::Beta(beta).axis_ordinates(params);
    let disc = d * d - 4.0 * beta;
    if disc >= 0.0 {
        out.push((-d + disc.sqrt()) / 4.0);
        out.push((-d - disc.sqrt()) / 4.0);
    }
    if 4.0 * c != d * d {
        let r = 1.0 + 4.0 * beta / (4.0 * c - d * d);
        if r >= 0.0 {
            out.push((-d + d * r.sqrt()) / 4.0);
            out.push((-d - d * r.sqrt()) / 4.0);
        }
    }
    out
}

/// Closed-form candidate edges of the fixed-alpha family.
pub fn candidates_alpha(alpha: f64, params: &ProblemParams) -> Vec<f64> {
    let (c, d) = (params.c(), params.d());
    let mut out = Family::Alpha(alpha).axis_ordinates(params);
    out.push(-d / 2.0);
    if c > 0.0 && alpha <= c {
        let r = (1.0 - alpha / c).sqrt();
        out.push((-d + d * r) / 4.0);
        out.push((-d - d * r) / 4.0);
    }
    if alpha == c && c > 0.0 {
        out.push(-c.sqrt());
        if d * d >= 16.0 * c {
            out.push(-d / 4.0 - (d * d / 16.0 - c).sqrt());
        }
    }
    out
}

/// Smallest imaginary part of the fixed-beta curve and whether it is
/// attained on the imaginary axis.
pub fn min_imag_beta(beta: f64, params: &ProblemParams) -> Result<(f64, bool)> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("min_imag_beta needs beta > 0, got {beta}")));
    }
    let (c, d) = (params.c(), params.d());
    let dh = if c == 0.0 {
        0.0
    } else {
        let cubic =
            [-c.powi(3) * (beta + c), c * c * (2.0 * beta + 3.0 * c), beta * beta / 16.0 - beta * c - 3.0 * c * c, c];
        realpoly::real_roots(&cubic).into_iter().map(|r| r.x).find(|&x| x > 0.0 && x < c).ok_or_else(|| {
            Error::VerificationFailure(format!("no root of the minimum cubic in (0, c), beta = {beta}"))
        })?
    };
    if c > 0.0 && compare(d, d_of(dh), "2 sqrt(dh)")? == Ordering::Less {
        let r = 1.0 + 4.0 * beta / (4.0 * c - d * d);
        return Ok(((-d - d * r.sqrt()) / 4.0, false));
    }
    let mu1 = q_beta_real_roots(beta, params)?
        .roots
        .first()
        .map(|r| r.x)
        .ok_or_else(|| Error::VerificationFailure(format!("q_beta has no real root, beta = {beta}")))?;
    Ok((mu1, true))
}

/// Smallest imaginary part of the fixed-alpha curve for `alpha < 0`.
fn min_imag_alpha_negative(alpha: f64, params: &ProblemParams) -> Result<Option<(f64, bool)>> {
    let (c, d) = (params.c(), params.d());
    if c > 0.0 {
        let r = (1.0 - alpha / c).sqrt();
        let bound = 4.0 * c.sqrt() / (1.0 + r).sqrt();
        if compare(d, ExtReal::Finite(bound), "condition a)")? == Ordering::Less {
            return Ok(Some(((-d - d * r) / 4.0, false)));
        }
    }
    let roots = q_alpha_real_roots(alpha, params)?;
    Ok(roots.roots.iter().zip(&roots.admissible).find(|(_, &ok)| ok).map(|(r, _)| (r.x, true)))
}

/// Maximal strip of the fixed-beta curve, with edges verified by a scan.
pub fn strip_edges_beta(beta: f64, params: &ProblemParams) -> Result<StripReport> {
    let minimum = Some(min_imag_beta(beta, params)?);
    if !strip_exists_beta(beta, params)? {
        return Ok(StripReport::none(minimum));
    }
    let mut rep = detect_strip(Family::Beta(beta), &candidates_beta(beta, params), params).ok_or_else(|| {
        Error::VerificationFailure(format!("no candidate band passed the scan (beta = {beta}, d = {})", params.d()))
    })?;
    rep.minimum = minimum;
    Ok(rep)
}

/// Maximal strip of the fixed-alpha curve (`beta >= 0`). For `alpha < 0`
/// there is none and only the lowest point is reported.
pub fn strip_alpha(alpha: f64, params: &ProblemParams) -> Result<StripReport> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("strip_alpha needs finite alpha != 0, got {alpha}")));
    }
    if alpha < 0.0 {
        return Ok(StripReport::none(min_imag_alpha_negative(alpha, params)?));
    }
    if !strip_exists_alpha(alpha, params)? {
        return Ok(StripReport::none(None));
    }
    detect_strip(Family::Alpha(alpha), &candidates_alpha(alpha, params), params).ok_or_else(|| {
        Error::VerificationFailure(format!("no candidate band passed the scan (alpha = {alpha}, d = {})", params.d()))
    })
}
