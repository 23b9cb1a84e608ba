use std::fmt::Write;

use super::{solution_triangles, Solution};
use crate::cdt::Instance;
use crate::geom::triangle_class;
use crate::Point;

const SIZE: f64 = 1000.0;
const MARGIN: f64 = 0.02 * SIZE;

struct View {
    min: [f64; 2],
    max_y: f64,
    scale: f64,
}

impl View {
    fn new(points: &[[f64; 2]]) -> View {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let scale = if extent > 0.0 { (SIZE - 2.0 * MARGIN) / extent } else { 1.0 };
        View { min: lo, max_y: hi[1], scale }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (MARGIN + (p[0] - self.min[0]) * self.scale, MARGIN + (self.max_y - p[1]) * self.scale)
    }
}

/// SVG picture of an instance and, optionally, a solution. Obtuse triangles
/// are filled red, constraints drawn green, Steiner points red.
pub fn render_svg(inst: &Instance, sol: Option<&Solution>) -> String {
    let mut pts: Vec<Point> = inst.points.clone();
    if let Some(s) = sol {
        pts.extend(s.steiner_points.iter().cloned());
    }
    let approx: Vec<[f64; 2]> = pts.iter().map(Point::to_f64).collect();
    let view = View::new(&approx);
    let at = |i: usize| view.map(approx[i]);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    if let Some(s) = sol {
        if let Some(tris) = solution_triangles(inst, s) {
            for t in tris {
                if triangle_class([&pts[t[0]], &pts[t[1]], &pts[t[2]]]).is_ok_and(|c| !c.is_obtuse()) {
                    continue;
                }
                let [a, b, c] = t.map(at);
                let _ = writeln!(
                    out,
                    r##"<polygon points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3}" fill="#e0301e" fill-opacity="0.6"/>"##,
                    a.0, a.1, b.0, b.1, c.0, c.1
                );
            }
        }
        for &(a, b) in &s.edges {
            if a < pts.len() && b < pts.len() {
                line(&mut out, at(a), at(b), "#808080", 1.0);
            }
        }
    }

    for &(a, b) in &inst.constraints {
        line(&mut out, at(a), at(b), "#1a9641", 2.5);
    }
    let ring: Vec<String> = inst.boundary.iter().map(|&i| at(i)).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
    let _ = writeln!(out, r#"<polygon points="{}" fill="none" stroke="black" stroke-width="4"/>"#, ring.join(" "));

    for i in 0..inst.points.len() {
        dot(&mut out, at(i), "black");
    }
    for i in inst.points.len()..pts.len() {
        dot(&mut out, at(i), "#e0301e");
    }
    out.push_str("</svg>\n");
    out
}

fn line(out: &mut String, a: (f64, f64), b: (f64, f64), color: &str, width: f64) {
    let _ = writeln!(
        out,
        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="{width}"/>"#,
        a.0, a.1, b.0, b.1
    );
}

fn dot(out: &mut String, p: (f64, f64), color: &str) {
    let _ = writeln!(out, r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="{color}"/>"#, p.0, p.1);
}
