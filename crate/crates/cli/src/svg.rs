//! Write-only SVG figures in the z = 0 chart.

use std::fmt::Write;

use num_traits::ToPrimitive;
use tropical_pencil::pencil::CellGeometry;
use tropical_pencil::primitives::{ProjPoint, SupportSet};
use tropical_pencil::subdivision::CurveGraph;

const SIZE: f64 = 480.0;
const INSET: f64 = 120.0;

fn xy(p: &ProjPoint) -> (f64, f64) {
    let f = |i: usize| p.get(i).to_f64().unwrap_or(0.0);
    (f(0) - f(2), f(1) - f(2))
}

/// Affine map from a padded bounding box onto the canvas, y pointing up.
struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
    span: f64,
}

impl Frame {
    fn around(points: &[(f64, f64)]) -> Frame {
        let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for &(x, y) in points {
            lo_x = lo_x.min(x);
            lo_y = lo_y.min(y);
            hi_x = hi_x.max(x);
            hi_y = hi_y.max(y);
        }
        if points.is_empty() {
            (lo_x, lo_y, hi_x, hi_y) = (0.0, 0.0, 0.0, 0.0);
        }
        let side = (hi_x - lo_x).max(hi_y - lo_y).max(1.0);
        let pad = side * 0.5;
        let span = side + 2.0 * pad;
        let cx = (lo_x + hi_x) / 2.0;
        let cy = (lo_y + hi_y) / 2.0;
        Frame { x0: cx - span / 2.0, y0: cy - span / 2.0, scale: SIZE / span, span }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        ((x - self.x0) * self.scale, SIZE - (y - self.y0) * self.scale)
    }

    /// Far enough along any direction to leave the canvas.
    fn far(&self, (x, y): (f64, f64), (dx, dy): (f64, f64)) -> (f64, f64) {
        let norm = (dx * dx + dy * dy).sqrt().max(1e-9);
        let t = 2.0 * self.span / norm;
        (x + t * dx, y + t * dy)
    }
}

fn header() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

fn line(out: &mut String, a: (f64, f64), b: (f64, f64), style: &str) {
    let _ = writeln!(out, "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" {style}/>", a.0, a.1, b.0, b.1);
}

fn dot(out: &mut String, p: (f64, f64), r: f64, fill: &str) {
    let _ = writeln!(out, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{r}\" fill=\"{fill}\"/>", p.0, p.1);
}

/// The dual subdivision in the top-right corner.
fn inset(out: &mut String, a: &SupportSet, cells: &[Vec<usize>]) {
    let d = a.degree().max(1) as f64;
    let step = (INSET - 20.0) / d;
    let at = |i: usize| {
        let (r, s) = a.planar(i);
        (SIZE - INSET + 10.0 + r as f64 * step, 10.0 + (d - s as f64) * step)
    };
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"0\" width=\"{INSET}\" height=\"{INSET}\" fill=\"#f4f4f4\" stroke=\"#999\"/>",
        SIZE - INSET
    );
    for cell in cells {
        let pts: Vec<String> = cell.iter().map(|&i| at(i)).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(out, "<polygon points=\"{}\" fill=\"none\" stroke=\"#369\"/>", pts.join(" "));
    }
    for i in 0..a.len() {
        dot(out, at(i), 2.5, "#369");
    }
}

pub fn curve(a: &SupportSet, g: &CurveGraph) -> String {
    let pts: Vec<(f64, f64)> = g.vertices.iter().map(|v| xy(&v.point)).collect();
    let frame = Frame::around(&pts);
    let mut out = header();
    let stroke = "stroke=\"black\" stroke-width=\"2\"";
    for e in &g.edges {
        line(&mut out, frame.map(pts[e.from]), frame.map(pts[e.to]), stroke);
    }
    for r in &g.rays {
        let from = pts[r.from];
        let to = frame.far(from, (r.direction.0 as f64, r.direction.1 as f64));
        line(&mut out, frame.map(from), frame.map(to), stroke);
    }
    for &p in &pts {
        dot(&mut out, frame.map(p), 3.0, "black");
    }
    inset(&mut out, a, g.subdivision.cells());
    out.push_str("</svg>\n");
    out
}

pub fn locus(pieces: &[CellGeometry], config: &[ProjPoint]) -> String {
    let mut anchors: Vec<(f64, f64)> = config.iter().map(xy).collect();
    for g in pieces {
        match g {
            CellGeometry::Point(p) => anchors.push(xy(p)),
            CellGeometry::Segment(p, q) => anchors.extend([xy(p), xy(q)]),
            CellGeometry::Ray { from, .. } => anchors.push(xy(from)),
            CellGeometry::Line { through, .. } => anchors.push(xy(through)),
        }
    }
    let frame = Frame::around(&anchors);
    let mut out = header();
    let stroke = "stroke=\"#c33\" stroke-width=\"3\"";
    for g in pieces {
        match g {
            CellGeometry::Point(p) => dot(&mut out, frame.map(xy(p)), 5.0, "#c33"),
            CellGeometry::Segment(p, q) => line(&mut out, frame.map(xy(p)), frame.map(xy(q)), stroke),
            CellGeometry::Ray { from, direction } => {
                let o = xy(from);
                let to = frame.far(o, (direction.0 as f64, direction.1 as f64));
                line(&mut out, frame.map(o), frame.map(to), stroke);
            }
            CellGeometry::Line { through, direction } => {
                let o = xy(through);
                let d = (direction.0 as f64, direction.1 as f64);
                let a = frame.far(o, d);
                let b = frame.far(o, (-d.0, -d.1));
                line(&mut out, frame.map(a), frame.map(b), stroke);
            }
        }
    }
    for p in config {
        dot(&mut out, frame.map(xy(p)), 3.0, "black");
    }
    out.push_str("</svg>\n");
    out
}
