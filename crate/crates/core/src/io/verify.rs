//! Exact solution checker. Independent of the triangulation code: it only
//! looks at the point list and the edge list.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::Solution;
use crate::cdt::Instance;
use crate::geom::{
    cross, locate_in_polygon, on_open_segment, open_segments_intersect, polygon_area2, triangle_class, PolygonLocation,
};
use crate::{Point, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ViolationCode {
    NotTriangulation,
    ConstraintUncovered,
    ObtuseTriangle,
    IndexRange,
    DuplicateVertex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub instance_uid: String,
    pub steiner_count: usize,
    pub triangle_count: usize,
    pub obtuse_count: usize,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

struct Checker {
    violations: Vec<Violation>,
}

impl Checker {
    fn push(&mut self, code: ViolationCode, detail: impl Into<String>) {
        self.violations.push(Violation { code, detail: detail.into() });
    }
}

pub fn verify(inst: &Instance, sol: &Solution) -> VerifyReport {
    let (report, _) = check(inst, sol);
    report
}

/// Triangles of a structurally valid solution, as CCW index triples.
pub fn solution_triangles(inst: &Instance, sol: &Solution) -> Option<Vec<[usize; 3]>> {
    check(inst, sol).1
}

fn check(inst: &Instance, sol: &Solution) -> (VerifyReport, Option<Vec<[usize; 3]>>) {
    let mut ck = Checker { violations: Vec::new() };
    let pts: Vec<Point> = inst.points.iter().chain(&sol.steiner_points).cloned().collect();
    let tris = check_all(inst, sol, &pts, &mut ck);
    let obtuse_count = ck.violations.iter().filter(|v| v.code == ViolationCode::ObtuseTriangle).count();
    let report = VerifyReport {
        valid: ck.violations.is_empty(),
        instance_uid: sol.instance_uid.clone(),
        steiner_count: sol.steiner_points.len(),
        triangle_count: tris.as_ref().map_or(0, Vec::len),
        obtuse_count,
        violations: ck.violations,
    };
    (report, tris)
}

fn check_all(inst: &Instance, sol: &Solution, pts: &[Point], ck: &mut Checker) -> Option<Vec<[usize; 3]>> {
    use ViolationCode::*;
    let n = pts.len();
    if sol.instance_uid != inst.uid {
        ck.push(NotTriangulation, format!("solution is for `{}`, instance is `{}`", sol.instance_uid, inst.uid));
    }
    for &(a, b) in &sol.edges {
        if a >= n || b >= n {
            ck.push(IndexRange, format!("edge ({a}, {b}) with {n} points"));
        }
    }
    if !ck.violations.is_empty() {
        return None;
    }
    let mut seen: HashMap<&Point, usize> = HashMap::new();
    for (i, p) in pts.iter().enumerate() {
        if let Some(j) = seen.insert(p, i) {
            ck.push(DuplicateVertex, format!("points {j} and {i} coincide"));
        }
    }
    if !ck.violations.is_empty() {
        return None;
    }

    let region = inst.boundary_polygon();
    for (k, p) in sol.steiner_points.iter().enumerate() {
        if locate_in_polygon(&region, p) == PolygonLocation::Outside {
            ck.push(NotTriangulation, format!("Steiner point {} lies outside the region", inst.points.len() + k));
        }
    }

    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(a, b) in &sol.edges {
        if a == b {
            ck.push(NotTriangulation, format!("self-loop at {a}"));
        } else {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let edges: Vec<(usize, usize)> = edges.into_iter().collect();
    let structural_ok = check_embedding(pts, &edges, &region, ck);

    check_constraints(inst, pts, &edges, ck);

    if !structural_ok {
        return None;
    }
    let tris = faces(pts, &edges, &region, ck)?;
    for t in &tris {
        let class = triangle_class([&pts[t[0]], &pts[t[1]], &pts[t[2]]]);
        if class.map_or(true, |c| c.is_obtuse()) {
            ck.push(ObtuseTriangle, format!("triangle ({}, {}, {})", t[0], t[1], t[2]));
        }
    }
    Some(tris)
}

fn bbox(p: &[f64; 2], q: &[f64; 2]) -> [f64; 4] {
    [p[0].min(q[0]), p[1].min(q[1]), p[0].max(q[0]), p[1].max(q[1])]
}

/// Crossings, vertices inside edges, edges leaving the region and isolated
/// vertices. Returns false if anything was found.
fn check_embedding(pts: &[Point], edges: &[(usize, usize)], region: &[Point], ck: &mut Checker) -> bool {
    use ViolationCode::NotTriangulation;
    let before = ck.violations.len();
    let approx: Vec<[f64; 2]> = pts.iter().map(Point::to_f64).collect();
    // slack for rounding of huge rationals in the bbox prefilter
    let pad = |v: f64| v.abs() * 1e-9 + 1e-9;

    let mut order: Vec<usize> = (0..edges.len()).collect();
    let boxes: Vec<[f64; 4]> = edges.iter().map(|&(a, b)| bbox(&approx[a], &approx[b])).collect();
    order.sort_by(|&i, &j| boxes[i][0].total_cmp(&boxes[j][0]));
    for (k, &i) in order.iter().enumerate() {
        let (a, b) = edges[i];
        for &j in &order[k + 1..] {
            if boxes[j][0] > boxes[i][2] + pad(boxes[i][2]) {
                break;
            }
            if boxes[j][1] > boxes[i][3] + pad(boxes[i][3]) || boxes[i][1] > boxes[j][3] + pad(boxes[j][3]) {
                continue;
            }
            let (c, d) = edges[j];
            if open_segments_intersect(&pts[a], &pts[b], &pts[c], &pts[d]) {
                ck.push(NotTriangulation, format!("edges ({a}, {b}) and ({c}, {d}) cross"));
            }
        }
    }

    let mut by_x: Vec<usize> = (0..pts.len()).collect();
    by_x.sort_by(|&i, &j| approx[i][0].total_cmp(&approx[j][0]));
    let xs: Vec<f64> = by_x.iter().map(|&i| approx[i][0]).collect();
    for (e, &(a, b)) in edges.iter().enumerate() {
        let bx = boxes[e];
        let lo = xs.partition_point(|&x| x < bx[0] - pad(bx[0]));
        let hi = xs.partition_point(|&x| x <= bx[2] + pad(bx[2]));
        for &v in &by_x[lo..hi] {
            if v != a && v != b && on_open_segment(&pts[a], &pts[b], &pts[v]) {
                ck.push(NotTriangulation, format!("point {v} lies inside edge ({a}, {b})"));
            }
        }
        if locate_in_polygon(region, &pts[a].midpoint(&pts[b])) == PolygonLocation::Outside {
            ck.push(NotTriangulation, format!("edge ({a}, {b}) leaves the region"));
        }
    }

    let mut degree = vec![0usize; pts.len()];
    for &(a, b) in edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    for (v, d) in degree.iter().enumerate() {
        if *d < 2 {
            ck.push(NotTriangulation, format!("point {v} has degree {d}"));
        }
    }
    ck.violations.len() == before
}

/// Counterclockwise angular order of directions, starting at +x.
fn angular_cmp(o: &Point, p: &Point, q: &Point) -> Ordering {
    let half = |r: &Point| {
        let (dx, dy) = r.delta(o);
        if dy.is_positive() || (dy.is_zero() && dx.is_positive()) {
            0
        } else {
            1
        }
    };
    half(p).cmp(&half(q)).then_with(|| {
        let c = cross(o, p, q);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Face traversal of the embedded graph. Every bounded face must be a
/// triangle, there must be one outer face, and the triangles must add up to
/// the region's area.
fn faces(pts: &[Point], edges: &[(usize, usize)], region: &[Point], ck: &mut Checker) -> Option<Vec<[usize; 3]>> {
    use ViolationCode::NotTriangulation;
    let mut around: Vec<Vec<usize>> = vec![Vec::new(); pts.len()];
    for &(a, b) in edges {
        around[a].push(b);
        around[b].push(a);
    }
    let mut position: HashMap<(usize, usize), usize> = HashMap::new();
    for (v, nb) in around.iter_mut().enumerate() {
        nb.sort_by(|&p, &q| angular_cmp(&pts[v], &pts[p], &pts[q]));
        for (i, &w) in nb.iter().enumerate() {
            position.insert((v, w), i);
        }
    }
    let next = |u: usize, v: usize| -> usize {
        let nb = &around[v];
        let i = position[&(v, u)];
        nb[(i + nb.len() - 1) % nb.len()]
    };

    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut tris = Vec::new();
    let mut outer = 0usize;
    let mut area = Rational::zero();
    let mut ok = true;
    for &(a, b) in edges {
        for start in [(a, b), (b, a)] {
            if used.contains(&start) {
                continue;
            }
            let mut cycle = Vec::new();
            let (mut u, mut v) = start;
            loop {
                used.insert((u, v));
                cycle.push(u);
                let w = next(u, v);
                (u, v) = (v, w);
                if (u, v) == start {
                    break;
                }
            }
            let poly: Vec<Point> = cycle.iter().map(|&i| pts[i].clone()).collect();
            let a2 = polygon_area2(&poly);
            if !a2.is_positive() {
                outer += 1;
            } else if cycle.len() != 3 {
                ok = false;
                ck.push(NotTriangulation, format!("face with {} sides at point {}", cycle.len(), cycle[0]));
            } else {
                area += &a2;
                tris.push([cycle[0], cycle[1], cycle[2]]);
            }
        }
    }
    if outer != 1 {
        ok = false;
        ck.push(NotTriangulation, format!("{outer} unbounded faces; the edge graph is not connected"));
    }
    if ok && area != polygon_area2(region) {
        ok = false;
        ck.push(NotTriangulation, "triangles do not cover the region");
    }
    ok.then_some(tris)
}

/// Every boundary edge and constraint must be a chain of solution edges
/// through the points on it.
fn check_constraints(inst: &Instance, pts: &[Point], edges: &[(usize, usize)], ck: &mut Checker) {
    let have: HashSet<(usize, usize)> = edges.iter().copied().collect();
    for (a, b) in inst.constraint_segments() {
        let (pa, pb) = (&pts[a], &pts[b]);
        let mut chain: Vec<usize> = (0..pts.len()).filter(|&v| on_open_segment(pa, pb, &pts[v])).collect();
        chain.sort_by(|&u, &v| pa.dist2(&pts[u]).cmp(&pa.dist2(&pts[v])));
        chain.insert(0, a);
        chain.push(b);
        for w in chain.windows(2) {
            if !have.contains(&(w[0].min(w[1]), w[0].max(w[1]))) {
                ck.push(
                    ViolationCode::ConstraintUncovered,
                    format!("constraint ({a}, {b}) misses piece ({}, {})", w[0], w[1]),
                );
                break;
            }
        }
    }
}
