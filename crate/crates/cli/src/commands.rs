//! The analysis commands. Each returns the text written to the output.

use num_complex::Complex64;
use range_enclosure::axis::{axis_segments, AxisStructure};
use range_enclosure::boundary::{boundary_set, default_im_grid, BranchCurve, EdgeTag};
use range_enclosure::membership::{BoxEdge, SpecialRule};
use range_enclosure::pseudo::{epsilon0, pseudo_axis_segments, pseudo_contour, resolvent_bound, Epsilon0Branch};
use range_enclosure::strip::{strip_alpha, strip_edges_beta, StripReport};
use range_enclosure::{contains, poles, ComplexPoint, ExtReal, MembershipVerdict, Witness};
use serde_json::Value;

use crate::config::Problem;
use crate::output::{complex, csv_writer, ext, finish_csv, fmt_f64, num, obj, point, to_json_string};
use crate::Failure;

/// Boundary curves are sampled on this many ordinates per unit of resolution.
const GRID_PER_RESOLUTION: usize = 8;

pub fn poles_cmd(pb: &Problem) -> Result<String, Failure> {
    let p = poles(&pb.params);
    Ok(to_json_string(&obj([
        ("theta", complex(p.theta)),
        ("delta_plus", complex(p.delta_plus)),
        ("delta_minus", complex(p.delta_minus)),
    ])))
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Special(rule) => {
            let name = match rule {
                SpecialRule::Zero => "zero",
                SpecialRule::DeltaPlus => "delta_plus",
                SpecialRule::DeltaMinus => "delta_minus",
                SpecialRule::Infinity => "infinity",
            };
            obj([("kind", "special".into()), ("rule", name.into())])
        }
        Witness::Axis(edge) => {
            let edge = match edge {
                Some(BoxEdge::AlphaLo) => "alpha_lo".into(),
                Some(BoxEdge::AlphaHi) => "alpha_hi".into(),
                Some(BoxEdge::BetaLo) => "beta_lo".into(),
                Some(BoxEdge::BetaHi) => "beta_hi".into(),
                None => Value::Null,
            };
            obj([("kind", "axis".into()), ("edge", edge)])
        }
        Witness::OffAxis { beta_hat, alpha_hat } => {
            obj([("kind", "off_axis".into()), ("beta_hat", num(*beta_hat)), ("alpha_hat", num(*alpha_hat))])
        }
        Witness::DiskBoundary => obj([("kind", "disk_boundary".into())]),
    }
}

pub fn member_cmd(pb: &Problem, omega: ComplexPoint) -> Result<String, Failure> {
    let v: MembershipVerdict = contains(omega, &pb.omega_box, &pb.params);
    Ok(to_json_string(&obj([
        ("omega", point(&omega)),
        ("inside", v.inside.into()),
        ("boundary_flag", v.boundary_flag.into()),
        ("witness", witness_json(&v.witness)),
    ])))
}

pub fn axis_cmd(pb: &Problem, epsilon: Option<f64>) -> Result<String, Failure> {
    let s: AxisStructure = match epsilon {
        Some(e) => pseudo_axis_segments(&pb.omega_box, e, &pb.params)?,
        None => axis_segments(&pb.omega_box, &pb.params)?,
    };
    let segments = s.segments.iter().map(|&(a, b)| Value::Array(vec![num(a), num(b)])).collect();
    let isolated = s.isolated.iter().map(|&x| num(x)).collect();
    Ok(to_json_string(&obj([
        ("epsilon", epsilon.map_or(Value::Null, num)),
        ("segments", Value::Array(segments)),
        ("isolated", Value::Array(isolated)),
    ])))
}

pub fn boundary_curves(pb: &Problem) -> Vec<BranchCurve> {
    let grid = default_im_grid(&pb.omega_box, &pb.params, GRID_PER_RESOLUTION * pb.resolution);
    boundary_set(&pb.omega_box, &grid, &pb.params)
}

pub fn edge_name(e: Option<EdgeTag>) -> &'static str {
    e.map_or("", |e| e.as_str())
}

pub fn boundary_cmd(pb: &Problem) -> Result<String, Failure> {
    let mut w = csv_writer();
    w.write_record(["re", "im", "edge_tag", "branch_tag"]).map_err(Failure::io)?;
    for curve in boundary_curves(pb) {
        let edge = edge_name(curve.edge);
        for pl in &curve.polylines {
            let tag = pl.branch_tag();
            for z in &pl.points {
                w.write_record([fmt_f64(z.re), fmt_f64(z.im), edge.into(), tag.clone()]).map_err(Failure::io)?;
            }
        }
        for p in &curve.points {
            let (re, im) = match p {
                ComplexPoint::Finite(z) => (z.re, z.im),
                ComplexPoint::Infinity => (f64::INFINITY, f64::INFINITY),
            };
            w.write_record([fmt_f64(re), fmt_f64(im), edge.into(), "point".into()]).map_err(Failure::io)?;
        }
    }
    finish_csv(w).map_err(Failure::Config)
}

fn strip_json(rep: &StripReport) -> Value {
    let pts = |v: &[ComplexPoint]| Value::Array(v.iter().map(point).collect());
    obj([
        ("exists", rep.exists.into()),
        ("s_low", num(rep.s_low)),
        ("s_high", num(rep.s_high)),
        ("low_points", pts(&rep.low_points)),
        ("high_points", pts(&rep.high_points)),
        ("low_on_axis", rep.low_on_axis.into()),
        ("high_on_axis", rep.high_on_axis.into()),
        ("minimum", rep.minimum.map_or(Value::Null, |(m, on_axis)| obj([("im", num(m)), ("on_axis", on_axis.into())]))),
    ])
}

pub enum StripTarget {
    Beta(f64),
    Alpha(f64),
    Edges,
}

pub fn strip_cmd(pb: &Problem, target: StripTarget) -> Result<String, Failure> {
    match target {
        StripTarget::Beta(b) => Ok(to_json_string(&strip_json(&strip_edges_beta(b, &pb.params)?))),
        StripTarget::Alpha(a) => Ok(to_json_string(&strip_json(&strip_alpha(a, &pb.params)?))),
        StripTarget::Edges => {
            let b = &pb.omega_box;
            let mut edges = Vec::new();
            for (name, v) in [("beta_lo", b.beta_lo), ("beta_hi", b.beta_hi)] {
                // beta <= 0 slices have no strip analysis.
                match v {
                    ExtReal::Finite(x) if x > 0.0 => edges.push((name, strip_edges_beta(x, &pb.params)?)),
                    _ => {}
                }
            }
            for (name, v) in [("alpha_lo", b.alpha_lo), ("alpha_hi", b.alpha_hi)] {
                match v {
                    ExtReal::Finite(x) if x != 0.0 => edges.push((name, strip_alpha(x, &pb.params)?)),
                    _ => {}
                }
            }
            let all = !edges.is_empty() && edges.iter().all(|(_, r)| r.exists);
            let lo = edges.iter().map(|(_, r)| r.s_low).fold(f64::NEG_INFINITY, f64::max);
            let hi = edges.iter().map(|(_, r)| r.s_high).fold(f64::INFINITY, f64::min);
            let intersection =
                if all && lo < hi { obj([("s_low", num(lo)), ("s_high", num(hi))]) } else { Value::Null };
            eprintln!(
                "warning: the intersection of per-edge strips is a numeric combination only; \
                 it is not known to be a strip of the full enclosure"
            );
            let per_edge = edges.iter().map(|(n, r)| ((*n).to_string(), strip_json(r))).collect();
            Ok(to_json_string(&obj([("edges", Value::Object(per_edge)), ("intersection", intersection)])))
        }
    }
}

pub fn contours(pb: &Problem, eps: f64) -> Result<Vec<Vec<Complex64>>, Failure> {
    Ok(pseudo_contour(&pb.omega_box, eps, &pb.viewport(), pb.resolution, &pb.params)?)
}

pub fn pseudo_cmd(pb: &Problem, eps: f64) -> Result<String, Failure> {
    let mut w = csv_writer();
    w.write_record(["contour", "re", "im"]).map_err(Failure::io)?;
    for (k, c) in contours(pb, eps)?.iter().enumerate() {
        for z in c {
            w.write_record([k.to_string(), fmt_f64(z.re), fmt_f64(z.im)]).map_err(Failure::io)?;
        }
    }
    finish_csv(w).map_err(Failure::Config)
}

pub fn bound_cmd(pb: &Problem, omega: Complex64) -> Result<String, Failure> {
    let e = epsilon0(omega, &pb.omega_box, &pb.params)?;
    let bound = resolvent_bound(omega, &pb.omega_box, &pb.params)?;
    let branch = match e.branch {
        Epsilon0Branch::AlphaLo => "alpha_lo",
        Epsilon0Branch::AlphaHi => "alpha_hi",
        Epsilon0Branch::Interior => "interior",
        Epsilon0Branch::AxisSeparable => "axis_separable",
    };
    Ok(to_json_string(&obj([
        ("omega", complex(omega)),
        ("epsilon0", num(e.value)),
        ("bound", ext(bound)),
        ("argmin", obj([("alpha", num(e.argmin.0)), ("beta", num(e.argmin.1))])),
        ("branch", branch.into()),
    ])))
}
