//! Structure of the enclosure on the imaginary axis.
//!
//! The axis part is a finite union of closed segments and isolated points.
//! Candidate endpoints are the axis roots of the quartics at the box corners;
//! a candidate is a segment endpoint when its corner multiplicity `m` is
//! odd. The special points `0` and `delta_+-` are resolved by testing the
//! open gaps on either side, because the corner count is not reliable there
//! (for example every `p(alpha, 0)` vanishes at the poles).

use crate::error::{Error, Result};
use crate::membership::{axis_verdict, contains};
use crate::problem::{poles, ComplexPoint, ExtReal, OmegaBox, ProblemParams};
use crate::realpoly::{self, RealRoot};
use crate::tol;

/// Real roots of `q_beta` or `q_alpha` with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct RealRootList {
    pub roots: Vec<RealRoot>,
    /// For `q_alpha`: whether the root satisfies `nu <= -2c/d` (strictly when
    /// `alpha < -c`). Always true for `q_beta`.
    pub admissible: Vec<bool>,
}

impl RealRootList {
    pub fn count_with_mult(&self) -> usize {
        realpoly::count_with_mult(&self.roots)
    }
}

/// Coefficients (ascending) of
/// `q_beta(mu) = mu^4 + 2d mu^3 + (2c + d^2) mu^2 + d (beta/2 + 2c) mu + c (beta + c)`.
pub fn q_beta_coeffs(beta: f64, params: &ProblemParams) -> [f64; 5] {
    let (c, d) = (params.c(), params.d());
    [c * (beta + c), d * (beta / 2.0 + 2.0 * c), 2.0 * c + d * d, 2.0 * d, 1.0]
}

/// Coefficients (ascending) of `q_alpha(nu) = nu^4 + (d/2) nu^3 - (alpha d / 2) nu - alpha c`.
pub fn q_alpha_coeffs(alpha: f64, params: &ProblemParams) -> [f64; 5] {
    let (c, d) = (params.c(), params.d());
    [-alpha * c, -alpha * d / 2.0, 0.0, d / 2.0, 1.0]
}

pub fn q_beta_real_roots(beta: f64, params: &ProblemParams) -> Result<RealRootList> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("q_beta needs beta > 0, got {beta}")));
    }
    let roots = realpoly::real_roots(&q_beta_coeffs(beta, params));
    let admissible = vec![true; roots.len()];
    Ok(RealRootList { roots, admissible })
}

pub fn q_alpha_real_roots(alpha: f64, params: &ProblemParams) -> Result<RealRootList> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("q_alpha needs finite alpha != 0, got {alpha}")));
    }
    let (c, d) = (params.c(), params.d());
    let roots = realpoly::real_roots(&q_alpha_coeffs(alpha, params));
    let limit = -2.0 * c / d;
    let slack = tol::interval_slack(limit);
    let admissible =
        roots.iter().map(|r| if alpha < -c { r.x < limit - slack } else { r.x <= limit + slack }).collect();
    Ok(RealRootList { roots, admissible })
}

/// A box corner `(alpha, beta)`.
pub type Corner = (ExtReal, ExtReal);

/// A candidate point `i mu` of the axis structure.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisPoint {
    /// Ordinate; `+-inf` for the points at infinity along the axis.
    pub mu: f64,
    /// Corner multiplicity count; for special points the parity is derived
    /// from the neighbouring gaps instead.
    pub m: usize,
    pub corners: Vec<Corner>,
    /// True for `0` and the poles.
    pub special: bool,
    /// Whether the point is a segment endpoint.
    pub odd: bool,
}

/// Closed segments `[mu_a, mu_b]` and isolated ordinates of the enclosure on
/// the imaginary axis.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxisStructure {
    pub segments: Vec<(f64, f64)>,
    pub isolated: Vec<f64>,
    pub generators: Vec<AxisPoint>,
}

impl AxisStructure {
    /// Whether `i mu` belongs to the structure, with absolute slack `tol`.
    pub fn contains(&self, mu: f64, tol: f64) -> bool {
        self.segments.iter().any(|&(a, b)| mu >= a - tol && mu <= b + tol)
            || self.isolated.iter().any(|&x| (x - mu).abs() <= tol)
    }
}

/// The set `N` of pole ordinates `[Im delta_-, Im delta_+]` (as `mu` values)
/// when both poles are on the axis.
pub fn pole_interval(params: &ProblemParams) -> Option<(f64, f64)> {
    if !params.poles_on_axis() {
        return None;
    }
    let p = poles(params);
    let (a, b) = (p.delta_minus.im, p.delta_plus.im);
    Some((a.min(b), a.max(b)))
}

/// Axis roots (`mu` with multiplicity) of the quartic at a corner.
fn corner_axis_roots(corner: Corner, params: &ProblemParams) -> Vec<RealRoot> {
    let (alpha, beta) = corner;
    match (alpha, beta) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => {
            let (c, d) = (params.c(), params.d());
            realpoly::real_roots(&[a * c, a * d, a + b + c, d, 1.0])
        }
        (ExtReal::Finite(_), ExtReal::PosInfinity) => vec![RealRoot { x: 0.0, mult: 2 }],
        (a, _) => {
            let mut out = Vec::new();
            if let Some((lo, hi)) = pole_interval(params) {
                if lo == hi {
                    out.push(RealRoot { x: lo, mult: 2 });
                } else {
                    out.push(RealRoot { x: lo, mult: 1 });
                    out.push(RealRoot { x: hi, mult: 1 });
                }
            }
            if a == ExtReal::NegInfinity {
                out.push(RealRoot { x: f64::NEG_INFINITY, mult: 1 });
                out.push(RealRoot { x: f64::INFINITY, mult: 1 });
            }
            out
        }
    }
}

fn dedup_corners(v: [Corner; 2]) -> Vec<Corner> {
    if v[0] == v[1] {
        vec![v[0]]
    } else {
        v.to_vec()
    }
}

fn same_mu(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        a == b
    } else {
        tol::same_cluster(a, b)
    }
}

/// The corner root sets `R1` (diagonal `tau1` roots outside `N`) and `R2`
/// (antidiagonal `tau2` roots inside `N`), clustered, with multiplicity
/// counts `m`.
pub fn corner_root_sets(b: &OmegaBox, params: &ProblemParams) -> (Vec<AxisPoint>, Vec<AxisPoint>) {
    let tau1 = dedup_corners([(b.alpha_lo, b.beta_lo), (b.alpha_hi, b.beta_hi)]);
    let tau2 = dedup_corners([(b.alpha_lo, b.beta_hi), (b.alpha_hi, b.beta_lo)]);
    let n = pole_interval(params);
    let in_n = |mu: f64| match n {
        Some((lo, hi)) => {
            mu >= lo - tol::CLUSTER_REL * (1.0 + lo.abs()) && mu <= hi + tol::CLUSTER_REL * (1.0 + hi.abs())
        }
        None => false,
    };
    let collect = |tau: &[Corner], want_in_n: bool| {
        let mut pts: Vec<AxisPoint> = Vec::new();
        for &corner in tau {
            for r in corner_axis_roots(corner, params) {
                if in_n(r.x) != want_in_n {
                    continue;
                }
                match pts.iter_mut().find(|p| same_mu(p.mu, r.x)) {
                    Some(p) => {
                        p.m += r.mult;
                        if !p.corners.contains(&corner) {
                            p.corners.push(corner);
                        }
                    }
                    None => pts.push(AxisPoint {
                        mu: r.x,
                        m: r.mult,
                        corners: vec![corner],
                        special: false,
                        odd: r.mult % 2 == 1,
                    }),
                }
            }
        }
        pts.sort_by(|p, q| p.mu.total_cmp(&q.mu));
        pts
    };
    (collect(&tau1, false), collect(&tau2, true))
}

/// Membership of `i mu` for a non-special finite ordinate.
fn gap_inside(mu: f64, b: &OmegaBox, params: &ProblemParams) -> bool {
    axis_verdict(mu, b, params).inside
}

/// A probe ordinate strictly between `a` and `b` (either may be infinite).
fn probe_between(a: f64, b: f64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => 0.5 * (a + b),
        (true, false) => a + 1.0 + a.abs(),
        (false, true) => b - 1.0 - b.abs(),
        (false, false) => 0.0,
    }
}

/// The enclosure on the imaginary axis, as segments plus isolated points.
pub fn axis_segments(b: &OmegaBox, params: &ProblemParams) -> Result<AxisStructure> {
    let (r1, r2) = corner_root_sets(b, params);
    let mut pts: Vec<AxisPoint> = r1.into_iter().chain(r2).collect();

    // Special points on the axis always act as breakpoints.
    let mut specials = vec![0.0];
    if let Some((lo, hi)) = pole_interval(params) {
        specials.push(lo);
        specials.push(hi);
    }
    for s in specials {
        match pts.iter_mut().find(|p| same_mu(p.mu, s)) {
            Some(p) => {
                p.mu = s;
                p.special = true;
            }
            None => pts.push(AxisPoint { mu: s, m: 0, corners: Vec::new(), special: true, odd: false }),
        }
    }
    pts.sort_by(|p, q| p.mu.total_cmp(&q.mu));
    // Merge clusters that ended up adjacent after the union of R1 and R2.
    let mut merged: Vec<AxisPoint> = Vec::with_capacity(pts.len());
    for p in pts {
        match merged.last_mut() {
            Some(last) if same_mu(last.mu, p.mu) => {
                last.m += p.m;
                last.special |= p.special;
                if p.special {
                    last.mu = p.mu;
                }
                for c in p.corners {
                    if !last.corners.contains(&c) {
                        last.corners.push(c);
                    }
                }
            }
            _ => merged.push(p),
        }
    }
    let mut pts = merged;

    let single_corner = b.alpha_lo == b.alpha_hi && b.beta_lo == b.beta_hi;
    let n = pts.len();
    for i in 0..n {
        pts[i].odd = if single_corner {
            false
        } else if pts[i].special {
            let below = if i == 0 { f64::NEG_INFINITY } else { pts[i - 1].mu };
            let above = if i + 1 == n { f64::INFINITY } else { pts[i + 1].mu };
            let mu = pts[i].mu;
            let left = gap_inside(probe_between(below, mu), b, params);
            let right = gap_inside(probe_between(mu, above), b, params);
            left != right
        } else {
            pts[i].m % 2 == 1
        };
    }

    let odd: Vec<f64> = pts.iter().filter(|p| p.odd).map(|p| p.mu).collect();
    if odd.len() % 2 == 1 {
        return Err(Error::OddPairing(odd.len()));
    }
    let segments: Vec<(f64, f64)> = odd.chunks(2).map(|w| (w[0], w[1])).collect();
    let in_segment = |mu: f64| segments.iter().any(|&(a, c)| mu >= a && mu <= c);
    let isolated = pts
        .iter()
        .filter(|p| !p.odd && p.mu.is_finite() && !in_segment(p.mu))
        .filter(|p| if p.special { contains(ComplexPoint::new(0.0, p.mu), b, params).inside } else { p.m > 0 })
        .map(|p| p.mu)
        .collect();
    Ok(AxisStructure { segments, isolated, generators: pts })
}
