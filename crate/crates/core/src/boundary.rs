//! Boundary curves of the enclosure and the planar region map.
//!
//! Off the imaginary axis the boundary consists of the images of the four
//! box edges. Along a fixed-beta edge the real part is an explicit function
//! of the imaginary part, `Re w = +-sqrt(P +- sqrt(P^2 - Q) - y^2)`, and
//! along a fixed-alpha edge the same holds with `R, S` in place of `P, Q`.
//! Curves are therefore sampled on a grid of ordinates `y`, with validity
//! transitions localised by bisection.

use num_complex::Complex64;
use std::collections::HashMap;

use rayon::prelude::*;

use crate::axis::{q_alpha_real_roots, q_beta_real_roots};
use crate::membership::{alpha_hat, beta_hat, contains, exclusion_threshold};
use crate::problem::{in_closed, poles, ComplexPoint, ExtReal, OmegaBox, ProblemParams};

/// Which box edge a curve comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeTag {
    BetaLo,
    BetaHi,
    AlphaLo,
    AlphaHi,
}

impl EdgeTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeTag::BetaLo => "beta_lo",
            EdgeTag::BetaHi => "beta_hi",
            EdgeTag::AlphaLo => "alpha_lo",
            EdgeTag::AlphaHi => "alpha_hi",
        }
    }
}

/// Family of the curve: fixed beta (alpha varies) or fixed alpha.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind {
    FixedBeta(f64),
    FixedAlpha(f64),
}

/// A connected run of samples on one branch. `outer` is the sign in front of
/// the inner radical, `side` the sign of the real part.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub outer: i8,
    pub side: i8,
    pub points: Vec<Complex64>,
}

impl Polyline {
    pub fn branch_tag(&self) -> String {
        let s = |v: i8| if v >= 0 { '+' } else { '-' };
        format!("{}{}", s(self.outer), s(self.side))
    }
}

/// Sampled curve of one parameter slice.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchCurve {
    pub kind: CurveKind,
    pub edge: Option<EdgeTag>,
    pub polylines: Vec<Polyline>,
    /// Isolated members of the curve closure (`0`, poles, infinity).
    pub points: Vec<ComplexPoint>,
    /// Ordinates `mu` where the curve closure meets the imaginary axis.
    pub axis_hits: Vec<f64>,
}

impl BranchCurve {
    pub fn all_points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.polylines.iter().flat_map(|p| p.points.iter().copied())
    }
}

/// `x^2` values for the fixed-beta branches at ordinate `y` (outer sign -1, +1).
pub fn fixed_beta_x2(beta: f64, y: f64, params: &ProblemParams) -> [f64; 2] {
    let (c, d) = (params.c(), params.d());
    let p = c - d * d / 2.0 - d * y - beta * d / (4.0 * y);
    let q = beta * c + c * c + 2.0 * c * d * y + 4.0 * c * y * y;
    radical_pair(p, q, y)
}

/// `x^2` values for the fixed-alpha branches at ordinate `y` (outer sign -1, +1).
pub fn fixed_alpha_x2(alpha: f64, y: f64, params: &ProblemParams) -> [f64; 2] {
    let (c, d) = (params.c(), params.d());
    let r = alpha * d / (2.0 * (d + 2.0 * y));
    let s = -2.0 * alpha * c * y / (d + 2.0 * y);
    radical_pair(r, s, y)
}

fn radical_pair(p: f64, q: f64, y: f64) -> [f64; 2] {
    let disc = p * p - q;
    if !(disc >= 0.0) || !disc.is_finite() {
        return [f64::NAN, f64::NAN];
    }
    let sq = disc.sqrt();
    [p - sq - y * y, p + sq - y * y]
}

const VERIFY_REL: f64 = 1e-6;

/// Per-slice data shared by the tracing routine.
struct Slice<'a> {
    kind: CurveKind,
    params: &'a ProblemParams,
    filter: Option<(f64, f64)>,
}

impl Slice<'_> {
    /// Nonnegative real part of the branch point at ordinate `y`, if the
    /// point exists, verifies its defining parameter and passes the filter.
    fn eval(&self, outer: usize, y: f64) -> Option<f64> {
        if y == 0.0 {
            return None;
        }
        let x2 = match self.kind {
            CurveKind::FixedBeta(b) => fixed_beta_x2(b, y, self.params)[outer],
            CurveKind::FixedAlpha(a) => {
                if y == -self.params.d() / 2.0 {
                    return None;
                }
                fixed_alpha_x2(a, y, self.params)[outer]
            }
        };
        if !(x2 >= 0.0) || !x2.is_finite() {
            return None;
        }
        let x = x2.sqrt();
        let w = Complex64::new(x, y);
        if x == 0.0 {
            // Axis contact: parameters of the double root are not unique
            // through the inverse maps; accept only with a finite filter check
            // of the companion parameter at a nearby off-axis point.
            return self.check(Complex64::new(f64::EPSILON.sqrt() * (1.0 + y.abs()), y)).then_some(0.0);
        }
        self.check(w).then_some(x)
    }

    fn check(&self, w: Complex64) -> bool {
        let (own, other) = match self.kind {
            CurveKind::FixedBeta(b) => (beta_hat(w, self.params).map(|v| (v, b)), alpha_hat(w, self.params)),
            CurveKind::FixedAlpha(a) => (alpha_hat(w, self.params).map(|v| (v, a)), beta_hat(w, self.params)),
        };
        let (Ok((v, want)), Ok(o)) = (own, other) else { return false };
        if w.re > 1e-6 && (v - want).abs() > VERIFY_REL * (1.0 + want.abs()) {
            return false;
        }
        match self.filter {
            Some((lo, hi)) => in_closed(o, lo, hi),
            None => true,
        }
    }
}

/// Traces the two outer branches over the grid, splitting runs at validity
/// changes and refining each change by bisection.
fn trace(slice: &Slice, grid: &[f64]) -> Vec<Polyline> {
    let mut out = Vec::new();
    for outer in 0..2 {
        let sign: i8 = if outer == 0 { -1 } else { 1 };
        let vals: Vec<Option<f64>> = grid.iter().map(|&y| slice.eval(outer, y)).collect();
        let mut runs: Vec<Vec<Complex64>> = Vec::new();
        let mut run: Vec<Complex64> = Vec::new();
        for k in 0..grid.len() {
            match vals[k] {
                Some(x) => {
                    if run.is_empty() && k > 0 {
                        if let Some(p) = refine(slice, outer, grid[k - 1], grid[k]) {
                            run.push(p);
                        }
                    }
                    run.push(Complex64::new(x, grid[k]));
                }
                None if !run.is_empty() => {
                    if let Some(p) = refine(slice, outer, grid[k], grid[k - 1]) {
                        run.push(p);
                    }
                    runs.push(std::mem::take(&mut run));
                }
                None => {}
            }
        }
        if !run.is_empty() {
            runs.push(run);
        }
        for pts in runs {
            let mirrored = pts.iter().map(|z| Complex64::new(-z.re, z.im)).collect();
            out.push(Polyline { outer: sign, side: 1, points: pts });
            out.push(Polyline { outer: sign, side: -1, points: mirrored });
        }
    }
    out
}

/// Bisection between an invalid ordinate `bad` and a valid one `good`;
/// returns the valid point closest to the transition.
fn refine(slice: &Slice, outer: usize, bad: f64, good: f64) -> Option<Complex64> {
    let (mut b, mut g) = (bad, good);
    let mut xg = slice.eval(outer, g)?;
    for _ in 0..60 {
        let m = 0.5 * (b + g);
        if m == b || m == g {
            break;
        }
        match slice.eval(outer, m) {
            Some(x) => {
                g = m;
                xg = x;
            }
            None => b = m,
        }
    }
    Some(Complex64::new(xg, g))
}

/// Uniform ordinate grid on `[lo, hi]` avoiding the singular ordinates `0`
/// and `-d/2` of the branch formulas.
pub fn im_grid(lo: f64, hi: f64, n: usize, params: &ProblemParams) -> Vec<f64> {
    let n = n.max(2);
    let h = (hi - lo) / (n - 1) as f64;
    let bad = [0.0, -params.d() / 2.0];
    (0..n)
        .map(|k| {
            let y = lo + k as f64 * h;
            if bad.iter().any(|&s| (y - s).abs() < 1e-9 * h.abs().max(1e-300)) {
                y + 0.25 * h
            } else {
                y
            }
        })
        .collect()
}

/// Ordinate grid covering every off-axis point of the enclosure
/// (`|y|` up to the exclusion threshold, 10% margin).
pub fn default_im_grid(b: &OmegaBox, params: &ProblemParams, n: usize) -> Vec<f64> {
    let mut y = exclusion_threshold(b, params);
    if !y.is_finite() {
        y = 10.0 * (params.d() + params.c().sqrt() + 1.0);
    }
    im_grid(-1.1 * y, 1.1 * y, n, params)
}

/// The fixed-beta curve `{w : beta_hat(w) = beta}` for `beta > 0`.
pub fn curve_fixed_beta(beta: f64, grid: &[f64], params: &ProblemParams) -> crate::Result<BranchCurve> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(crate::Error::InvalidArgument(format!("fixed-beta curve needs beta > 0, got {beta}")));
    }
    Ok(fixed_beta_curve(beta, None, grid, params))
}

fn fixed_beta_curve(beta: f64, filter: Option<(f64, f64)>, grid: &[f64], params: &ProblemParams) -> BranchCurve {
    let slice = Slice { kind: CurveKind::FixedBeta(beta), params, filter };
    let polylines = trace(&slice, grid);
    let mut points = Vec::new();
    if params.c() > 0.0 && filter.is_none_or(|(lo, _)| lo <= 0.0) {
        points.push(ComplexPoint::new(0.0, 0.0));
    }
    if filter.is_none_or(|(lo, hi)| lo.is_infinite() || hi.is_infinite()) {
        points.push(ComplexPoint::Infinity);
    }
    let mut axis_hits: Vec<f64> = if beta > 0.0 {
        q_beta_real_roots(beta, params).map(|r| r.roots.iter().map(|r| r.x).collect()).unwrap_or_default()
    } else {
        Vec::new()
    };
    if params.c() > 0.0 {
        axis_hits.push(0.0);
    }
    axis_hits.sort_by(f64::total_cmp);
    axis_hits.dedup();
    BranchCurve { kind: CurveKind::FixedBeta(beta), edge: None, polylines, points, axis_hits }
}

/// The fixed-alpha curve for `beta >= 0`, restricted to `Pi_beta` minus the
/// line `Im w = -d/2`.
pub fn curve_fixed_alpha(alpha: f64, grid: &[f64], params: &ProblemParams) -> crate::Result<BranchCurve> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(crate::Error::InvalidArgument(format!("fixed-alpha curve needs alpha != 0, got {alpha}")));
    }
    Ok(fixed_alpha_curve(alpha, (0.0, f64::INFINITY), grid, params))
}

fn fixed_alpha_curve(alpha: f64, beta_range: (f64, f64), grid: &[f64], params: &ProblemParams) -> BranchCurve {
    let (c, d) = (params.c(), params.d());
    let slice = Slice { kind: CurveKind::FixedAlpha(alpha), params, filter: Some(beta_range) };
    let polylines = trace(&slice, grid);
    let mut points = Vec::new();
    let zero_beta = in_closed(0.0, beta_range.0, beta_range.1);
    let pole_rule = if alpha < -c { d * d < 4.0 * c } else { d * d <= 4.0 * c };
    if zero_beta && pole_rule {
        let p = poles(params);
        points.push(ComplexPoint::Finite(p.delta_plus));
        if p.delta_minus != p.delta_plus {
            points.push(ComplexPoint::Finite(p.delta_minus));
        }
    }
    if beta_range.1.is_infinite() {
        points.push(ComplexPoint::Infinity);
    }
    let mut axis_hits: Vec<f64> = q_alpha_real_roots(alpha, params)
        .map(|r| r.roots.iter().zip(&r.admissible).filter(|(_, &ok)| ok).map(|(r, _)| r.x).collect())
        .unwrap_or_default();
    if alpha > 0.0 && c > 0.0 {
        axis_hits.push(0.0);
    }
    axis_hits.sort_by(f64::total_cmp);
    axis_hits.dedup();
    BranchCurve { kind: CurveKind::FixedAlpha(alpha), edge: None, polylines, points, axis_hits }
}

/// Cap used when a curve runs off to infinity along the real axis.
const FAR: f64 = 1e8;

/// The `beta = 0` slice: real points `+-sqrt(alpha)` and the poles.
fn beta_zero_curve(b: &OmegaBox, params: &ProblemParams) -> BranchCurve {
    let (alo, ahi) = b.alpha();
    let mut polylines = Vec::new();
    if ahi >= 0.0 {
        let x0 = alo.max(0.0).sqrt();
        let x1 = ahi.sqrt().min(FAR);
        for side in [1i8, -1] {
            let s = side as f64;
            polylines.push(Polyline {
                outer: 1,
                side,
                points: vec![Complex64::new(s * x0, 0.0), Complex64::new(s * x1, 0.0)],
            });
        }
    }
    let p = poles(params);
    let mut points = vec![ComplexPoint::Finite(p.delta_plus)];
    if p.delta_minus != p.delta_plus {
        points.push(ComplexPoint::Finite(p.delta_minus));
    }
    BranchCurve { kind: CurveKind::FixedBeta(0.0), edge: None, polylines, points, axis_hits: Vec::new() }
}

/// The `alpha = 0` slice: a double root at 0 and the horizontal points
/// `+-sqrt(beta + c - d^2/4) - i d/2`.
fn alpha_zero_curve(b: &OmegaBox, params: &ProblemParams) -> BranchCurve {
    let (c, d) = (params.c(), params.d());
    let (blo, bhi) = b.beta();
    let shift = c - d * d / 4.0;
    let mut polylines = Vec::new();
    if bhi + shift >= 0.0 {
        let x0 = (blo + shift).max(0.0).sqrt();
        let x1 = (bhi + shift).sqrt().min(FAR);
        for side in [1i8, -1] {
            let s = side as f64;
            polylines.push(Polyline {
                outer: 1,
                side,
                points: vec![Complex64::new(s * x0, -d / 2.0), Complex64::new(s * x1, -d / 2.0)],
            });
        }
    }
    BranchCurve {
        kind: CurveKind::FixedAlpha(0.0),
        edge: None,
        polylines,
        points: vec![ComplexPoint::new(0.0, 0.0)],
        axis_hits: vec![0.0],
    }
}

/// Images of the box edges: `W_{dOmega}` off the imaginary axis.
pub fn boundary_set(b: &OmegaBox, grid: &[f64], params: &ProblemParams) -> Vec<BranchCurve> {
    let (alo, ahi) = b.alpha();
    let (blo, bhi) = b.beta();
    let mut out = Vec::new();

    let mut beta_edges = vec![(EdgeTag::BetaLo, blo)];
    if bhi.is_finite() && bhi != blo {
        beta_edges.push((EdgeTag::BetaHi, bhi));
    }
    for (tag, beta) in beta_edges {
        let mut curve = if beta == 0.0 {
            beta_zero_curve(b, params)
        } else {
            fixed_beta_curve(beta, Some((alo, ahi)), grid, params)
        };
        curve.edge = Some(tag);
        out.push(curve);
    }

    let mut alpha_edges = vec![(EdgeTag::AlphaLo, b.alpha_lo)];
    if b.alpha_hi != b.alpha_lo {
        alpha_edges.push((EdgeTag::AlphaHi, b.alpha_hi));
    }
    for (tag, alpha) in alpha_edges {
        let mut curve = match alpha {
            ExtReal::Finite(0.0) => alpha_zero_curve(b, params),
            ExtReal::Finite(a) => fixed_alpha_curve(a, (blo, bhi), grid, params),
            _ => {
                let p = poles(params);
                let mut points = vec![ComplexPoint::Finite(p.delta_plus)];
                if p.delta_minus != p.delta_plus {
                    points.push(ComplexPoint::Finite(p.delta_minus));
                }
                points.push(ComplexPoint::Infinity);
                BranchCurve {
                    kind: CurveKind::FixedAlpha(alpha.to_f64()),
                    edge: None,
                    polylines: Vec::new(),
                    points,
                    axis_hits: Vec::new(),
                }
            }
        };
        curve.edge = Some(tag);
        out.push(curve);
    }
    out
}

/// Rectangle of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

/// Default viewport: symmetric in the real part and reaching below the
/// lowest sampled boundary point.
pub fn default_viewport(b: &OmegaBox, params: &ProblemParams) -> Viewport {
    let d = params.d();
    let (blo, bhi) = b.beta();
    let bmax = if bhi.is_finite() { bhi.max(0.0) } else { blo.max(0.0) };
    let grid = default_im_grid(b, params, 2048);
    let curves = boundary_set(b, &grid, params);
    let (mut lowest, mut highest) = (0.0f64, 0.0f64);
    for c in &curves {
        for z in c.all_points() {
            lowest = lowest.min(z.im);
            highest = highest.max(z.im);
        }
    }
    let im_min = (-(d + (d * d + 4.0 * bmax).sqrt()) / 1.5).min(1.1 * lowest);
    let im_max = 0.5f64.max(1.1 * highest);
    let (alo, ahi) = b.alpha();
    let amax = [alo, ahi].iter().filter(|a| a.is_finite()).fold(0.0f64, |m, a| m.max(a.abs()));
    let theta = poles(params).theta;
    let l =
        [2.0, 1.5 * amax.sqrt(), 1.5 * theta.re.abs(), d, 0.75 * (im_max - im_min)].iter().copied().fold(0.0, f64::max);
    Viewport { re_min: -l, re_max: l, im_min, im_max }
}

/// Raster cell label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Inside,
    Outside,
    Boundary,
}

/// Raster classification of a viewport into enclosure and complement.
#[derive(Debug, Clone)]
pub struct RegionMap {
    pub viewport: Viewport,
    pub nx: usize,
    pub ny: usize,
    /// Row-major labels, row 0 at `im_max`. Cells crossed by a boundary curve
    /// are `Boundary`.
    pub labels: Vec<Label>,
    /// Final inside/outside decision for every cell, boundary cells included
    /// (decided pointwise).
    pub inside: Vec<bool>,
    /// Component id per non-boundary cell (`usize::MAX` on boundary cells).
    pub component: Vec<usize>,
    pub n_components: usize,
    /// Component pairs separated by an odd number of curves.
    pub adjacency: Vec<(usize, usize)>,
    /// Number of alternation rounds of the coloring.
    pub iterations: usize,
    /// Fraction of non-boundary cells whose coloring agreed with pointwise
    /// membership before any fallback.
    pub agreement_before: f64,
    /// Same fraction after fallback (1.0 by construction).
    pub agreement_after: f64,
    /// Components relabeled by majority vote.
    pub fallback_components: Vec<usize>,
    /// Cells overridden individually after the majority vote.
    pub overridden_cells: usize,
}

impl RegionMap {
    pub fn center(&self, i: usize, j: usize) -> Complex64 {
        cell_center(&self.viewport, self.nx, self.ny, i, j)
    }

    /// Number of connected components of inside, non-boundary cells.
    pub fn inside_component_count(&self) -> usize {
        let mut seen = vec![false; self.n_components];
        for (k, &c) in self.component.iter().enumerate() {
            if c != usize::MAX && self.inside[k] {
                seen[c] = true;
            }
        }
        seen.iter().filter(|&&s| s).count()
    }
}

fn cell_center(v: &Viewport, nx: usize, ny: usize, i: usize, j: usize) -> Complex64 {
    let hx = (v.re_max - v.re_min) / nx as f64;
    let hy = (v.im_max - v.im_min) / ny as f64;
    Complex64::new(v.re_min + (i as f64 + 0.5) * hx, v.im_max - (j as f64 + 0.5) * hy)
}

/// Rasterized boundary: marked cells plus, per cell, the curve segments
/// whose bounding box meets it.
struct Raster {
    nx: usize,
    ny: usize,
    v: Viewport,
    mask: Vec<bool>,
    segments: Vec<(Complex64, Complex64)>,
    cell_segments: Vec<Vec<u32>>,
}

impl Raster {
    fn new(v: Viewport, nx: usize, ny: usize) -> Self {
        Raster { nx, ny, v, mask: vec![false; nx * ny], segments: Vec::new(), cell_segments: vec![Vec::new(); nx * ny] }
    }

    fn cell_of(&self, z: Complex64) -> (isize, isize) {
        let hx = (self.v.re_max - self.v.re_min) / self.nx as f64;
        let hy = (self.v.im_max - self.v.im_min) / self.ny as f64;
        (((z.re - self.v.re_min) / hx).floor() as isize, ((self.v.im_max - z.im) / hy).floor() as isize)
    }

    fn clamp(&self, (i, j): (isize, isize)) -> (usize, usize) {
        (i.clamp(0, self.nx as isize - 1) as usize, j.clamp(0, self.ny as isize - 1) as usize)
    }

    /// Marks every cell touched by the segment `a-b` (clipped to the viewport).
    fn add_segment(&mut self, a: Complex64, b: Complex64) {
        let Some((a, b)) = clip(&self.v, a, b) else { return };
        let id = self.segments.len() as u32;
        self.segments.push((a, b));
        let (ia, ja) = self.clamp(self.cell_of(a));
        let (ib, jb) = self.clamp(self.cell_of(b));
        for j in ja.min(jb)..=ja.max(jb) {
            for i in ia.min(ib)..=ia.max(ib) {
                self.cell_segments[j * self.nx + i].push(id);
            }
        }
        let hx = (self.v.re_max - self.v.re_min) / self.nx as f64;
        let hy = (self.v.im_max - self.v.im_min) / self.ny as f64;
        let steps = (((b.re - a.re) / hx).abs().max(((b.im - a.im) / hy).abs()) * 4.0).ceil() as usize + 1;
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            let (i, j) = self.clamp(self.cell_of(a + (b - a) * t));
            self.mask[j * self.nx + i] = true;
        }
    }

    /// Number of curve segments crossed by the straight path between the
    /// centers of two cells on a common row or column.
    fn crossings(&self, k0: usize, k1: usize) -> usize {
        let (nx, ny) = (self.nx, self.ny);
        let z0 = cell_center(&self.v, nx, ny, k0 % nx, k0 / nx);
        let z1 = cell_center(&self.v, nx, ny, k1 % nx, k1 / nx);
        let step = if k1 / nx == k0 / nx { 1 } else { nx };
        let mut ids: Vec<u32> =
            (0..=(k1 - k0) / step).flat_map(|s| self.cell_segments[k0 + s * step].iter().copied()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.into_iter().filter(|&id| segments_cross(z0, z1, self.segments[id as usize])).count()
    }
}

/// Proper crossing test with half-open parametrisation of the curve segment,
/// so a path through a shared vertex counts once.
fn segments_cross(p0: Complex64, p1: Complex64, (a, b): (Complex64, Complex64)) -> bool {
    let cross = |u: Complex64, w: Complex64| u.re * w.im - u.im * w.re;
    let r = p1 - p0;
    let s = b - a;
    let den = cross(r, s);
    if den == 0.0 {
        return false;
    }
    let q = a - p0;
    let t = cross(q, s) / den;
    let u = cross(q, r) / den;
    (0.0..=1.0).contains(&t) && (0.0..1.0).contains(&u)
}

/// Liang-Barsky clipping.
fn clip(v: &Viewport, a: Complex64, b: Complex64) -> Option<(Complex64, Complex64)> {
    let d = b - a;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [(-d.re, a.re - v.re_min), (d.re, v.re_max - a.re), (-d.im, a.im - v.im_min), (d.im, v.im_max - a.im)]
    {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    Some((a + d * t0, a + d * t1))
}

/// Minimum number of walks for two components to count as neighbours.
const NEIGHBOUR_CONTACTS: usize = 4;

/// Widest run of boundary cells walked across when linking components.
const MAX_CROSSING: usize = 8;

/// Classifies the viewport raster into enclosure and complement by
/// alternately coloring the components of the boundary complement, starting
/// from the component that reaches the top of the viewport, and cross-checks
/// every cell against pointwise membership.
pub fn classify_regions(b: &OmegaBox, viewport: &Viewport, resolution: usize, params: &ProblemParams) -> RegionMap {
    let nx = (resolution.max(64) + 1) & !1;
    let ny = nx;
    let v = *viewport;

    // Pointwise membership at the cell centers.
    let pointwise: Vec<bool> = (0..nx * ny)
        .into_par_iter()
        .map(|k| contains(ComplexPoint::Finite(cell_center(&v, nx, ny, k % nx, k / nx)), b, params).inside)
        .collect();

    let mut raster = Raster::new(v, nx, ny);
    if !b.is_degenerate() {
        let span = (v.im_max - v.im_min).abs();
        let ylo = v.im_min - 0.05 * span;
        let yhi = v.im_max + 0.05 * span;
        let grid = im_grid(ylo, yhi, (8 * ny).max(2048), params);
        for curve in boundary_set(b, &grid, params) {
            for pl in &curve.polylines {
                for w in pl.points.windows(2) {
                    raster.add_segment(w[0], w[1]);
                }
            }
        }
        // Mirror for exact symmetry of the raster.
        for j in 0..ny {
            for i in 0..nx / 2 {
                let (l, r) = (j * nx + i, j * nx + nx - 1 - i);
                let m = raster.mask[l] || raster.mask[r];
                raster.mask[l] = m;
                raster.mask[r] = m;
            }
        }
    }
    let mask = &raster.mask;

    // Components of the complement (4-connectivity).
    let mut component = vec![usize::MAX; nx * ny];
    let mut n_components = 0;
    let mut stack = Vec::new();
    for start in 0..nx * ny {
        if mask[start] || component[start] != usize::MAX {
            continue;
        }
        component[start] = n_components;
        stack.push(start);
        while let Some(k) = stack.pop() {
            let (i, j) = (k % nx, k / nx);
            let mut visit = |kk: usize| {
                if !mask[kk] && component[kk] == usize::MAX {
                    component[kk] = n_components;
                    stack.push(kk);
                }
            };
            if i > 0 {
                visit(k - 1);
            }
            if i + 1 < nx {
                visit(k + 1);
            }
            if j > 0 {
                visit(k - nx);
            }
            if j + 1 < ny {
                visit(k + nx);
            }
        }
        n_components += 1;
    }

    // Neighbour relation: walk straight across each run of boundary cells
    // and record the parity of the number of curve crossings.
    let mut votes_parity: HashMap<(usize, usize), [usize; 2]> = HashMap::new();
    for k in 0..nx * ny {
        let c0 = component[k];
        if c0 == usize::MAX {
            continue;
        }
        let (i, j) = (k % nx, k / nx);
        for (di, dj) in [(1usize, 0usize), (0, 1)] {
            for step in 2..=MAX_CROSSING + 1 {
                let (ii, jj) = (i + di * step, j + dj * step);
                if ii >= nx || jj >= ny || !mask[(i + di * (step - 1)) + (j + dj * (step - 1)) * nx] {
                    break;
                }
                let kk = jj * nx + ii;
                if mask[kk] {
                    continue;
                }
                let c1 = component[kk];
                if c1 != c0 {
                    let odd = raster.crossings(k, kk) % 2;
                    votes_parity.entry((c0.min(c1), c0.max(c1))).or_insert([0, 0])[odd] += 1;
                }
                break;
            }
        }
    }
    let mut adjacency: Vec<(usize, usize, bool)> = votes_parity
        .into_iter()
        .filter(|(_, v)| v[0] + v[1] >= NEIGHBOUR_CONTACTS)
        .map(|(k, v)| (k.0, k.1, v[1] > v[0]))
        .collect();
    adjacency.sort();
    let mut graph = vec![Vec::new(); n_components];
    for &(p, q, odd) in &adjacency {
        graph[p].push((q, odd));
        graph[q].push((p, odd));
    }

    // Coloring from the top component: crossing an odd number of curves
    // switches between outside and inside.
    let mut color: Vec<Option<bool>> = vec![None; n_components];
    let mut iterations = 0;
    let mut top_counts = vec![0usize; n_components];
    for i in 0..nx {
        if component[i] != usize::MAX {
            top_counts[component[i]] += 1;
        }
    }
    if let Some((top, _)) = top_counts.iter().enumerate().filter(|(_, &n)| n > 0).max_by_key(|(_, &n)| n) {
        color[top] = Some(false);
        let mut frontier = vec![top];
        while !frontier.is_empty() {
            iterations += 1;
            let mut next = Vec::new();
            for &p in &frontier {
                let cp = color[p].unwrap();
                for &(q, odd) in &graph[p] {
                    if color[q].is_none() {
                        color[q] = Some(cp ^ odd);
                        next.push(q);
                    }
                }
            }
            frontier = next;
        }
    }
    let adjacency: Vec<(usize, usize)> = adjacency.into_iter().filter(|a| a.2).map(|a| (a.0, a.1)).collect();

    // Cross-check and fallback.
    let mut votes = vec![(0usize, 0usize); n_components];
    for k in 0..nx * ny {
        let c = component[k];
        if c != usize::MAX {
            if pointwise[k] {
                votes[c].0 += 1;
            } else {
                votes[c].1 += 1;
            }
        }
    }
    let free_cells = component.iter().filter(|&&c| c != usize::MAX).count().max(1);
    let mut agree = 0usize;
    for k in 0..nx * ny {
        let c = component[k];
        if c != usize::MAX && color[c] == Some(pointwise[k]) {
            agree += 1;
        }
    }
    let agreement_before = agree as f64 / free_cells as f64;
    let mut fallback_components = Vec::new();
    for c in 0..n_components {
        let (yes, no) = votes[c];
        let wrong = match color[c] {
            Some(true) => no,
            Some(false) => yes,
            None => yes + no,
        };
        if wrong > 0 {
            fallback_components.push(c);
            color[c] = Some(yes > no);
            log::debug!("region component {c} relabeled by majority vote ({yes} inside, {no} outside)");
        }
    }
    let mut inside = vec![false; nx * ny];
    let mut labels = vec![Label::Boundary; nx * ny];
    let mut overridden_cells = 0;
    for k in 0..nx * ny {
        let c = component[k];
        if c == usize::MAX {
            inside[k] = pointwise[k];
            continue;
        }
        let mut v = color[c].unwrap_or(pointwise[k]);
        if v != pointwise[k] {
            overridden_cells += 1;
            v = pointwise[k];
        }
        inside[k] = v;
        labels[k] = if v { Label::Inside } else { Label::Outside };
    }
    if overridden_cells > 0 {
        log::debug!("{overridden_cells} region cells overridden pointwise");
    }
    RegionMap {
        viewport: v,
        nx,
        ny,
        labels,
        inside,
        component,
        n_components,
        adjacency,
        iterations,
        agreement_before,
        agreement_after: 1.0,
        fallback_components,
        overridden_cells,
    }
}
