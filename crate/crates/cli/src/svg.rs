//! Static SVG figure: shaded enclosure, boundary curves, axis segments,
//! poles and optional epsilon contours.

use std::fmt::Write;

use num_complex::Complex64;
use range_enclosure::axis::axis_segments;
use range_enclosure::boundary::{classify_regions, EdgeTag, Viewport};
use range_enclosure::poles;

use crate::commands::{boundary_curves, contours};
use crate::config::Problem;
use crate::Failure;

const WIDTH: f64 = 800.0;
const SHADE_RESOLUTION: usize = 256;

struct Frame {
    v: Viewport,
    height: f64,
}

impl Frame {
    fn new(v: Viewport) -> Self {
        let height = (WIDTH * (v.im_max - v.im_min) / (v.re_max - v.re_min)).clamp(200.0, 1600.0);
        Frame { v, height }
    }

    fn x(&self, re: f64) -> f64 {
        (re - self.v.re_min) / (self.v.re_max - self.v.re_min) * WIDTH
    }

    fn y(&self, im: f64) -> f64 {
        (self.v.im_max - im) / (self.v.im_max - self.v.im_min) * self.height
    }

    /// Pixel coordinates, clamped far outside the frame to keep numbers small.
    fn px(&self, z: Complex64) -> (f64, f64) {
        let lim = 10.0 * (WIDTH + self.height);
        (self.x(z.re).clamp(-lim, lim), self.y(z.im).clamp(-lim, lim))
    }
}

fn edge_color(e: Option<EdgeTag>) -> &'static str {
    match e {
        Some(EdgeTag::BetaLo) => "#1f77b4",
        Some(EdgeTag::BetaHi) => "#d62728",
        Some(EdgeTag::AlphaLo) => "#2ca02c",
        Some(EdgeTag::AlphaHi) => "#9467bd",
        None => "#000000",
    }
}

fn polyline(out: &mut String, f: &Frame, pts: &[Complex64], style: &str) {
    if pts.len() < 2 {
        return;
    }
    let coords: Vec<String> = pts
        .iter()
        .map(|&z| {
            let (x, y) = f.px(z);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    writeln!(out, r#"<polyline fill="none" {style} points="{}"/>"#, coords.join(" ")).unwrap();
}

pub fn figure(pb: &Problem, epsilons: &[f64]) -> Result<String, Failure> {
    let v = pb.viewport();
    let f = Frame::new(v);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{h:.0}" viewBox="0 0 {WIDTH:.0} {h:.0}">"#,
        h = f.height
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    // Shaded enclosure, one rectangle per run of inside cells.
    let map = classify_regions(&pb.omega_box, &v, SHADE_RESOLUTION.min(pb.resolution.max(64)), &pb.params);
    let (cw, ch) = (WIDTH / map.nx as f64, f.height / map.ny as f64);
    writeln!(out, r##"<g fill="#cfd8e6" stroke="none" shape-rendering="crispEdges">"##).unwrap();
    for j in 0..map.ny {
        let mut i = 0;
        while i < map.nx {
            if !map.inside[j * map.nx + i] {
                i += 1;
                continue;
            }
            let start = i;
            while i < map.nx && map.inside[j * map.nx + i] {
                i += 1;
            }
            writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/>"#,
                start as f64 * cw,
                j as f64 * ch,
                (i - start) as f64 * cw,
                ch
            )
            .unwrap();
        }
    }
    writeln!(out, "</g>").unwrap();

    // Coordinate axes.
    let (x0, y0) = (f.x(0.0), f.y(0.0));
    writeln!(
        out,
        r##"<g stroke="#999999" stroke-width="0.5"><line x1="0" y1="{y0:.2}" x2="{WIDTH:.0}" y2="{y0:.2}"/><line x1="{x0:.2}" y1="0" x2="{x0:.2}" y2="{:.2}"/></g>"##,
        f.height
    )
    .unwrap();

    for curve in boundary_curves(pb) {
        let style = format!(r#"stroke="{}" stroke-width="1.2""#, edge_color(curve.edge));
        for pl in &curve.polylines {
            polyline(&mut out, &f, &pl.points, &style);
        }
    }

    let axis = axis_segments(&pb.omega_box, &pb.params)?;
    let clip = |y: f64| y.clamp(v.im_min - 1.0, v.im_max + 1.0);
    for &(a, b) in &axis.segments {
        writeln!(
            out,
            r##"<line stroke="#ff7f0e" stroke-width="3" x1="{x0:.2}" y1="{:.2}" x2="{x0:.2}" y2="{:.2}"/>"##,
            f.y(clip(a)),
            f.y(clip(b))
        )
        .unwrap();
    }
    for &m in axis.isolated.iter().filter(|m| m.is_finite()) {
        writeln!(out, r##"<circle fill="#ff7f0e" r="3" cx="{x0:.2}" cy="{:.2}"/>"##, f.y(m)).unwrap();
    }

    for (k, &eps) in epsilons.iter().enumerate() {
        let style = format!(r##"stroke="#444444" stroke-width="0.8" stroke-dasharray="{}""##, 4 + 2 * k);
        for c in contours(pb, eps)? {
            polyline(&mut out, &f, &c, &style);
        }
    }

    let p = poles(&pb.params);
    for z in [p.delta_plus, p.delta_minus] {
        let (x, y) = f.px(z);
        writeln!(
            out,
            r#"<path stroke="black" stroke-width="1.2" d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}"/>"#,
            x - 4.0,
            y - 4.0,
            x + 4.0,
            y + 4.0,
            x - 4.0,
            y + 4.0,
            x + 4.0,
            y - 4.0
        )
        .unwrap();
    }
    let (ox, oy) = f.px(Complex64::new(0.0, 0.0));
    writeln!(out, r#"<circle fill="black" r="2" cx="{ox:.2}" cy="{oy:.2}"/>"#).unwrap();
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}
