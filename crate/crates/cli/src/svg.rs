//! Poincaré-disk rendering: the unit disk fills a 1000×1000 viewBox.

use std::fmt::Write;

use halfelastica::curvegen::{annulus_radii, CurveKind, CurveSamples};

const SIZE: f64 = 1000.0;
const HALF: f64 = SIZE / 2.0;

fn x_of(u: f64) -> f64 {
    HALF * (1.0 + u)
}

fn y_of(v: f64) -> f64 {
    HALF * (1.0 - v)
}

pub struct Svg {
    body: String,
}

impl Svg {
    pub fn new() -> Self {
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">"#
        );
        let _ = writeln!(
            body,
            r#"<defs><clipPath id="disk"><circle cx="{HALF}" cy="{HALF}" r="{HALF}"/></clipPath></defs>"#
        );
        let _ = writeln!(
            body,
            r##"<circle id="boundary" cx="{HALF}" cy="{HALF}" r="{HALF}" fill="none" stroke="#000" stroke-width="1"/>"##
        );
        Svg { body }
    }

    /// A circle given in disk coordinates, clipped to the disk.
    pub fn circle(&mut self, id: &str, center: (f64, f64), radius: f64, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle id="{id}" class="guide" cx="{:.6}" cy="{:.6}" r="{:.6}" fill="none" stroke="{color}" stroke-width="1" stroke-dasharray="4 3" clip-path="url(#disk)"/>"#,
            x_of(center.0),
            y_of(center.1),
            HALF * radius
        );
    }

    /// The horizontal diameter, the orbit through the origin for the space-like family.
    pub fn diameter(&mut self, id: &str, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<line id="{id}" class="guide" x1="0" y1="{HALF}" x2="{SIZE}" y2="{HALF}" stroke="{color}" stroke-width="1" stroke-dasharray="4 3"/>"#
        );
    }

    pub fn polyline(&mut self, id: &str, points: &[(f64, f64)], color: &str) {
        let _ = write!(
            self.body,
            r#"<polyline id="{id}" fill="none" stroke="{color}" stroke-width="1.5" points=""#
        );
        for (i, &(u, v)) in points.iter().enumerate() {
            let sep = if i == 0 { "" } else { " " };
            let _ = write!(self.body, "{sep}{:.6},{:.6}", x_of(u), y_of(v));
        }
        self.body.push_str("\"/>\n");
    }

    pub fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

/// Height `k` of the center of the horocycle at `(0, 1)` through `z`.
fn horocycle_center(z: (f64, f64)) -> f64 {
    let (u, v) = z;
    (1.0 - u * u - v * v) / (2.0 * (1.0 - v))
}

/// Axis intercept of the hypercycle through `(±1, 0)` and `z`.
fn hypercycle_intercept(z: (f64, f64)) -> f64 {
    let (u, v) = z;
    if v == 0.0 {
        return 0.0;
    }
    let h = (u * u + v * v - 1.0) / (2.0 * v);
    -1.0 / (h + h.signum() * (1.0 + h * h).sqrt())
}

fn extremes(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    })
}

/// The trajectory with its bounding orbits: osculating horocycles (BL),
/// osculating hypercycle arcs (BS) or the annulus circles (BT).
pub fn render_curve(curve: &CurveSamples) -> String {
    let mut svg = Svg::new();
    let pts: Vec<(f64, f64)> = curve.samples.iter().map(|s| s.poincare).collect();
    match curve.kind {
        CurveKind::BL => {
            let (lo, hi) = extremes(pts.iter().map(|&z| horocycle_center(z)));
            for (id, k) in [("osculating-lower", lo), ("osculating-upper", hi)] {
                svg.circle(id, (0.0, k), 1.0 - k, "#c33");
            }
        }
        CurveKind::BS => {
            let (lo, hi) = extremes(pts.iter().map(|&z| hypercycle_intercept(z)));
            for (id, t) in [("osculating-lower", lo), ("osculating-upper", hi)] {
                if t.abs() < 1e-12 {
                    svg.diameter(id, "#c33");
                } else {
                    let h = (t * t - 1.0) / (2.0 * t);
                    svg.circle(id, (0.0, h), (1.0 + h * h).sqrt(), "#c33");
                }
            }
        }
        CurveKind::BT => {
            let (inner, outer) = annulus_radii(&curve.quartic);
            svg.circle("annulus-inner", (0.0, 0.0), inner, "#36c");
            svg.circle("annulus-outer", (0.0, 0.0), outer, "#36c");
        }
    }
    svg.polyline("trajectory", &pts, "#000");
    svg.finish()
}
