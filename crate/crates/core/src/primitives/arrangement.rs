//! Cells of the arrangement of clipped circumcircles, discovered by
//! sampling. A cell is identified by its conflict set; only the set and the
//! polygon formed by its triangles matter to action generation.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::clip::{clipped_circumcircle_contains, clipped_contains_f64};
use super::{dist2_f64, lerp, SimplePolygon};
use crate::cdt::{Cdt, TriId, VertexId};
use crate::geom::rational::{rationalize, RationalizeConfig};
use crate::Point;

#[derive(Clone, Debug)]
pub struct ArrangementConfig {
    /// Offset of samples around circle intersections, relative to the
    /// smaller radius.
    pub offset: f64,
    /// Barycentric grid order used inside each obtuse triangle.
    pub grid: usize,
}

impl Default for ArrangementConfig {
    fn default() -> Self {
        ArrangementConfig { offset: 1e-3, grid: 4 }
    }
}

#[derive(Clone, Debug)]
pub struct ArrangementCell {
    /// Sorted triangle ids.
    pub conflict_set: Vec<TriId>,
    pub sample_point: Point,
    /// Boundary vertex ids of the union of the conflict triangles, CCW.
    pub boundary: Vec<VertexId>,
    pub polygon: SimplePolygon,
}

/// Boundary cycle of a union of triangles, if it is a single closed curve
/// without pinch vertices.
pub(crate) fn union_boundary(cdt: &Cdt, tris: &[TriId]) -> Option<Vec<VertexId>> {
    let set: HashSet<TriId> = tris.iter().copied().collect();
    let mut next: HashMap<VertexId, VertexId> = HashMap::new();
    for &t in tris {
        let tri = cdt.triangle(t)?;
        for i in 0..3 {
            let (a, b) = tri.edge(i);
            if cdt.edge_owner(b, a).is_some_and(|nb| set.contains(&nb)) {
                continue;
            }
            if next.insert(a, b).is_some() {
                return None;
            }
        }
    }
    let start = *next.keys().min()?;
    let mut cycle = vec![start];
    let mut cur = next[&start];
    while cur != start {
        if cycle.len() > next.len() {
            return None;
        }
        cycle.push(cur);
        cur = *next.get(&cur)?;
    }
    (cycle.len() == next.len()).then_some(cycle)
}

/// Polygon covered by the triangles, provided it is a topological disk
/// with every triangle vertex on its boundary.
pub fn union_polygon(cdt: &Cdt, tris: &[TriId]) -> Option<(Vec<VertexId>, SimplePolygon)> {
    let cycle = union_boundary(cdt, tris)?;
    let on_cycle: HashSet<VertexId> = cycle.iter().copied().collect();
    for &t in tris {
        if cdt.triangle(t)?.v.iter().any(|v| !on_cycle.contains(v)) {
            return None;
        }
    }
    let pts = cycle.iter().map(|&v| cdt.point(v).clone()).collect();
    Some((cycle, SimplePolygon::from_ccw_unchecked(pts)))
}

struct Disk {
    t: TriId,
    c: [f64; 2],
    r: f64,
}

pub fn circle_arrangement_cells(cdt: &Cdt, cfg: &ArrangementConfig) -> Vec<ArrangementCell> {
    let obtuse = cdt.obtuse_triangles();
    if obtuse.is_empty() {
        return Vec::new();
    }
    let disks: Vec<Disk> = cdt
        .triangle_ids()
        .map(|t| {
            let (c, r2) = cdt.circumcircle_f64(t);
            Disk { t, c, r: r2.sqrt() }
        })
        .collect();
    let index: HashMap<TriId, usize> = disks.iter().enumerate().map(|(i, d)| (d.t, i)).collect();

    let mut found: BTreeMap<Vec<TriId>, Point> = BTreeMap::new();
    // float conflict sets already seen; only new or uncertain ones are
    // computed exactly
    let mut seen: HashSet<Vec<TriId>> = HashSet::new();
    for &o in &obtuse {
        let d = &disks[index[&o]];
        let near: Vec<&Disk> = disks.iter().filter(|e| dist2_f64(d.c, e.c) < (d.r + e.r).powi(2)).collect();
        for s in samples(cdt, d, &near, cfg) {
            if dist2_f64(s, d.c) >= d.r * d.r * (1.0 + 1e-9) {
                continue;
            }
            let tol = (1e-6 * d.r).max(1e-300);
            if let Some(key) = float_conflict_set(cdt, &near, s, 4.0 * tol) {
                if key.is_empty() || !seen.insert(key) {
                    continue;
                }
            }
            let Some(q) = rationalize(s, |_| true, &RationalizeConfig::with_tolerance(tol)) else { continue };
            let mut set: Vec<TriId> =
                near.iter().filter(|e| clipped_circumcircle_contains(cdt, e.t, &q)).map(|e| e.t).collect();
            if set.is_empty() {
                continue;
            }
            set.sort_unstable();
            found.entry(set).or_insert(q);
        }
    }

    found
        .into_iter()
        .filter(|(set, _)| set.iter().any(|&t| cdt.triangle(t).is_some_and(|x| x.is_obtuse())))
        .filter_map(|(conflict_set, sample_point)| {
            let (boundary, polygon) = union_polygon(cdt, &conflict_set)?;
            Some(ArrangementCell { conflict_set, sample_point, boundary, polygon })
        })
        .collect()
}

/// Conflict set in floating point, or `None` if the sample is within `band`
/// of some circle. The band is wider than the rationalization tolerance, so
/// a decided sample keeps its set after rounding.
fn float_conflict_set(cdt: &Cdt, near: &[&Disk], s: [f64; 2], band: f64) -> Option<Vec<TriId>> {
    let mut set = Vec::new();
    for e in near {
        let dist = dist2_f64(s, e.c).sqrt();
        if (dist - e.r).abs() <= band {
            return None;
        }
        if dist < e.r && clipped_contains_f64(cdt, e.t, s) {
            set.push(e.t);
        }
    }
    set.sort_unstable();
    Some(set)
}

fn samples(cdt: &Cdt, d: &Disk, near: &[&Disk], cfg: &ArrangementConfig) -> Vec<[f64; 2]> {
    let v = cdt.triangle(d.t).expect("live").v;
    let corners = [cdt.approx(v[0]), cdt.approx(v[1]), cdt.approx(v[2])];
    let mut out = vec![d.c];
    let g = cfg.grid.max(1);
    for i in 0..=g {
        for j in 0..=g - i {
            let k = g - i - j;
            if i == g || j == g || k == g {
                continue;
            }
            let (a, b, c) = (i as f64 / g as f64, j as f64 / g as f64, k as f64 / g as f64);
            out.push([
                a * corners[0][0] + b * corners[1][0] + c * corners[2][0],
                a * corners[0][1] + b * corners[1][1] + c * corners[2][1],
            ]);
        }
    }
    for e in near {
        if e.t == d.t {
            continue;
        }
        let w = cdt.triangle(e.t).expect("live").v;
        let (p, q, r) = (cdt.approx(w[0]), cdt.approx(w[1]), cdt.approx(w[2]));
        out.push([(p[0] + q[0] + r[0]) / 3.0, (p[1] + q[1] + r[1]) / 3.0]);
        out.push(lerp(d.c, e.c, 0.5));
        let delta = cfg.offset * d.r.min(e.r);
        let dist = dist2_f64(d.c, e.c).sqrt();
        if dist <= 0.0 {
            continue;
        }
        let u = [(e.c[0] - d.c[0]) / dist, (e.c[1] - d.c[1]) / dist];
        // along the line of centers: the lens and both crescents
        for s in [dist - e.r - delta, dist - e.r + delta, d.r - delta, d.r + delta, 0.5 * (dist - e.r + d.r)] {
            out.push([d.c[0] + s * u[0], d.c[1] + s * u[1]]);
        }
        if dist >= d.r + e.r || dist <= (d.r - e.r).abs() {
            continue;
        }
        let a = (d.r * d.r - e.r * e.r + dist * dist) / (2.0 * dist);
        let h = (d.r * d.r - a * a).max(0.0).sqrt();
        let m = [d.c[0] + a * u[0], d.c[1] + a * u[1]];
        for x in [[m[0] - h * u[1], m[1] + h * u[0]], [m[0] + h * u[1], m[1] - h * u[0]]] {
            let to_d = unit([d.c[0] - x[0], d.c[1] - x[1]]);
            let to_e = unit([e.c[0] - x[0], e.c[1] - x[1]]);
            for (sd, se) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                out.push([x[0] + delta * (sd * to_d[0] + se * to_e[0]), x[1] + delta * (sd * to_d[1] + se * to_e[1])]);
            }
        }
    }
    out
}

fn unit(v: [f64; 2]) -> [f64; 2] {
    let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
    if n == 0.0 {
        v
    } else {
        [v[0] / n, v[1] / n]
    }
}

/// True iff the triangle set covers the polygon's area exactly.
#[cfg(test)]
pub(crate) fn covers_polygon(cdt: &Cdt, tris: &[TriId], poly: &SimplePolygon) -> bool {
    let mut sum = crate::Rational::from_integer(0.into());
    for &t in tris {
        let [a, b, c] = cdt.tri_points(t);
        sum += crate::geom::polygon_area2(&[a.clone(), b.clone(), c.clone()]);
    }
    sum == crate::geom::polygon_area2(poly.vertices())
}
