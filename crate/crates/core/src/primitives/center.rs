//! Polygon centers: a point whose fan to every polygon vertex is a
//! non-obtuse triangulation.
//!
//! For a boundary edge `(p, q)` the apex `x` of triangle `pqx` is
//! non-obtuse iff `x` lies in the slab between the normals to `pq` at `p`
//! and `q` and outside the disk with diameter `pq`. The feasible set is the
//! intersection over all edges together with the kernel half-planes. It is
//! searched numerically (vertices of the constraint arrangement plus a
//! coarse grid, then hill climbing on the minimum slack) and every
//! candidate is confirmed with exact arithmetic before it is returned.

use super::{dist2_f64, SimplePolygon};
use crate::geom::rational::{rationalize, RationalizeConfig};
use crate::geom::{self, Orientation, TriangleClass};
use crate::Point;

#[derive(Clone, Debug)]
pub struct CenterConfig {
    /// Grid resolution per axis for interior seed points.
    pub grid: usize,
    /// How many of the best seeds get polished and rationalized.
    pub polish: usize,
}

impl Default for CenterConfig {
    fn default() -> Self {
        CenterConfig { grid: 12, polish: 6 }
    }
}

/// Exact check: every fan triangle `(p, q, x)` is counterclockwise and
/// non-obtuse.
pub fn center_feasible(poly: &SimplePolygon, x: &Point) -> bool {
    let v = poly.vertices();
    let n = v.len();
    (0..n).all(|i| {
        let (p, q) = (&v[i], &v[(i + 1) % n]);
        geom::orientation(p, q, x) == Orientation::CounterClockwise
            && geom::triangle_class([p, q, x]) == Ok(TriangleClass::NonObtuse)
    })
}

pub fn polygon_center(poly: &SimplePolygon) -> Option<Point> {
    polygon_center_with(poly, &CenterConfig::default())
}

enum Curve {
    /// Points `x` with `n . x = c`.
    Line {
        n: [f64; 2],
        c: f64,
    },
    Circle {
        center: [f64; 2],
        r: f64,
    },
}

struct Constraints {
    edges: Vec<([f64; 2], [f64; 2], f64)>,
}

impl Constraints {
    /// Minimum over all constraints of the signed distance to violation.
    fn slack(&self, x: [f64; 2]) -> f64 {
        self.slack_parts(x).0
    }

    /// `(overall slack, orientation slack)`. Orientation must hold strictly,
    /// so points with no orientation margin are useless even at slack zero.
    fn slack_parts(&self, x: [f64; 2]) -> (f64, f64) {
        let mut worst = f64::INFINITY;
        let mut turn = f64::INFINITY;
        for &(p, q, len) in &self.edges {
            let d = [q[0] - p[0], q[1] - p[1]];
            let s1 = ((x[0] - p[0]) * d[0] + (x[1] - p[1]) * d[1]) / len;
            let s2 = ((q[0] - x[0]) * d[0] + (q[1] - x[1]) * d[1]) / len;
            let m = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
            let s3 = dist2_f64(x, m).sqrt() - len / 2.0;
            let s4 = (d[0] * (x[1] - p[1]) - d[1] * (x[0] - p[0])) / len;
            worst = worst.min(s1).min(s2).min(s3).min(s4);
            turn = turn.min(s4);
        }
        (worst, turn)
    }
}

pub fn polygon_center_with(poly: &SimplePolygon, cfg: &CenterConfig) -> Option<Point> {
    let v: Vec<[f64; 2]> = poly.vertices().iter().map(|p| p.to_f64()).collect();
    let n = v.len();
    if n < 3 {
        return None;
    }
    let cons = Constraints {
        edges: (0..n)
            .map(|i| {
                let (p, q) = (v[i], v[(i + 1) % n]);
                (p, q, dist2_f64(p, q).sqrt())
            })
            .collect(),
    };
    let (mut lo, mut hi) = (v[0], v[0]);
    for p in &v {
        lo = [lo[0].min(p[0]), lo[1].min(p[1])];
        hi = [hi[0].max(p[0]), hi[1].max(p[1])];
    }
    let diam = dist2_f64(lo, hi).sqrt();
    let scale = lo[0].abs().max(lo[1].abs()).max(hi[0].abs()).max(hi[1].abs()).max(1.0);
    let eps = 1e-9 * diam.max(1e-300);

    let mut curves = Vec::with_capacity(4 * n);
    for &(p, q, len) in &cons.edges {
        let d = [(q[0] - p[0]) / len, (q[1] - p[1]) / len];
        curves.push(Curve::Line { n: d, c: d[0] * p[0] + d[1] * p[1] });
        curves.push(Curve::Line { n: d, c: d[0] * q[0] + d[1] * q[1] });
        let nrm = [-d[1], d[0]];
        curves.push(Curve::Line { n: nrm, c: nrm[0] * p[0] + nrm[1] * p[1] });
        curves.push(Curve::Circle { center: [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0], r: len / 2.0 });
    }

    let mut seeds: Vec<[f64; 2]> = Vec::new();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            intersect(&curves[i], &curves[j], &mut seeds);
        }
    }
    let mut centroid = [0.0, 0.0];
    for p in &v {
        centroid[0] += p[0] / n as f64;
        centroid[1] += p[1] / n as f64;
    }
    seeds.push(centroid);
    let g = cfg.grid.max(2);
    for i in 0..=g {
        for j in 0..=g {
            let s = i as f64 / g as f64;
            let t = j as f64 / g as f64;
            seeds.push([lo[0] + (hi[0] - lo[0]) * s, lo[1] + (hi[1] - lo[1]) * t]);
        }
    }

    // Arrangement vertices sit on constraint boundaries; probe a small ring
    // around each near-feasible one to reach the interior of thin wedges.
    let mut scored: Vec<([f64; 2], f64)> = Vec::with_capacity(seeds.len() * 2);
    let push = |p: [f64; 2], scored: &mut Vec<([f64; 2], f64)>| {
        let (sl, turn) = cons.slack_parts(p);
        if turn > eps {
            scored.push((p, sl));
        }
        sl
    };
    for s in seeds {
        if !s[0].is_finite() || !s[1].is_finite() {
            continue;
        }
        if push(s, &mut scored) > -1e-6 * diam {
            let r = 1e-4 * diam;
            for k in 0..16 {
                let a = k as f64 * std::f64::consts::TAU / 16.0;
                push([s[0] + r * a.cos(), s[1] + r * a.sin()], &mut scored);
            }
        }
    }
    scored.sort_by(|a, b| b.1.total_cmp(&a.1));
    scored.dedup_by(|a, b| dist2_f64(a.0, b.0) < eps * eps);
    if scored.is_empty() || scored[0].1 < -eps {
        return None;
    }

    let mut polished: Vec<([f64; 2], f64)> = scored
        .iter()
        .take(cfg.polish.max(1))
        .filter(|(_, s)| *s >= -eps)
        .map(|&(p, _)| climb(&cons, p, diam))
        .collect();
    polished.sort_by(|a, b| b.1.total_cmp(&a.1));

    for (p, slack) in polished {
        let tolerance = (slack * 0.5).max(1e-9 * scale);
        let found = rationalize(p, |x| center_feasible(poly, x), &RationalizeConfig::with_tolerance(tolerance));
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Compass search maximizing the minimum slack.
fn climb(cons: &Constraints, start: [f64; 2], diam: f64) -> ([f64; 2], f64) {
    let mut x = start;
    let mut best = cons.slack(x);
    let mut step = 0.05 * diam;
    let dirs: Vec<[f64; 2]> = (0..16)
        .map(|k| {
            let a = k as f64 * std::f64::consts::TAU / 16.0;
            [a.cos(), a.sin()]
        })
        .collect();
    while step > 1e-12 * diam.max(1e-300) {
        let mut moved = false;
        for d in &dirs {
            let y = [x[0] + step * d[0], x[1] + step * d[1]];
            let s = cons.slack(y);
            if s > best {
                best = s;
                x = y;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (x, best)
}

fn intersect(a: &Curve, b: &Curve, out: &mut Vec<[f64; 2]>) {
    match (a, b) {
        (Curve::Line { n: n1, c: c1 }, Curve::Line { n: n2, c: c2 }) => {
            let det = n1[0] * n2[1] - n1[1] * n2[0];
            if det.abs() < 1e-12 {
                return;
            }
            out.push([(c1 * n2[1] - c2 * n1[1]) / det, (n1[0] * c2 - n2[0] * c1) / det]);
        }
        (Curve::Line { n, c }, Curve::Circle { center, r }) | (Curve::Circle { center, r }, Curve::Line { n, c }) => {
            // closest point on the line to the center, then +- along it
            let d = n[0] * center[0] + n[1] * center[1] - c;
            let foot = [center[0] - d * n[0], center[1] - d * n[1]];
            let h2 = r * r - d * d;
            if h2 < 0.0 {
                return;
            }
            let h = h2.sqrt();
            let t = [-n[1], n[0]];
            out.push([foot[0] + h * t[0], foot[1] + h * t[1]]);
            out.push([foot[0] - h * t[0], foot[1] - h * t[1]]);
        }
        (Curve::Circle { center: c1, r: r1 }, Curve::Circle { center: c2, r: r2 }) => {
            let d2 = dist2_f64(*c1, *c2);
            let d = d2.sqrt();
            if d == 0.0 || d > r1 + r2 || d < (r1 - r2).abs() {
                return;
            }
            let a = (r1 * r1 - r2 * r2 + d2) / (2.0 * d);
            let h = (r1 * r1 - a * a).max(0.0).sqrt();
            let u = [(c2[0] - c1[0]) / d, (c2[1] - c1[1]) / d];
            let m = [c1[0] + a * u[0], c1[1] + a * u[1]];
            out.push([m[0] - h * u[1], m[1] + h * u[0]]);
            out.push([m[0] + h * u[1], m[1] - h * u[0]]);
        }
    }
}
