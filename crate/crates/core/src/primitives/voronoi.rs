//! Visibility-bounded Voronoi diagram as the dual of the CDT, and the
//! Voronoi-based insertion point for obtuse triangles.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::clip::{blocked_f64, clipped_circumcircle_contains, clipped_contains_f64};
use super::{dist2_f64, inside_polygon_f64, lerp};
use crate::cdt::{edge_key, Cdt, TriId, VertexId};
use crate::geom::rational::{rationalize, RationalizeConfig};
use crate::geom::PolygonLocation;
use crate::{Error, Point, Result};

const EDGE_SAMPLES: usize = 32;
const SEARCH_SAMPLES: usize = 48;
const BISECTIONS: usize = 40;

#[derive(Clone, Debug, PartialEq)]
pub struct VoronoiEdge {
    /// Indices into [`BoundedVoronoi::vertices`].
    pub endpoints: [usize; 2],
    /// The two sites the edge is equidistant from.
    pub sites: (VertexId, VertexId),
    /// Triangles on either side of the dual CDT edge.
    pub dual: (TriId, TriId),
}

#[derive(Clone, Debug, Default)]
pub struct BoundedVoronoi {
    pub sites: Vec<VertexId>,
    /// Circumcenters of triangles followed by clip points.
    pub vertices: Vec<[f64; 2]>,
    pub edges: Vec<VoronoiEdge>,
    by_triangle: HashMap<TriId, Vec<usize>>,
}

impl BoundedVoronoi {
    pub fn segment(&self, e: usize) -> ([f64; 2], [f64; 2]) {
        let [i, j] = self.edges[e].endpoints;
        (self.vertices[i], self.vertices[j])
    }

    /// Edges dual to a side of triangle `t`.
    pub fn edges_of(&self, t: TriId) -> &[usize] {
        self.by_triangle.get(&t).map(Vec::as_slice).unwrap_or(&[])
    }
}

fn region_f64(cdt: &Cdt) -> Vec<[f64; 2]> {
    cdt.region().iter().map(|p| p.to_f64()).collect()
}

/// Builds one edge per unconstrained CDT edge, running between the
/// circumcenters of the adjacent triangles and clipped to the run that lies
/// in the region and sees both sites.
pub fn visibility_voronoi(cdt: &Cdt) -> BoundedVoronoi {
    let region = region_f64(cdt);
    let mut vor = BoundedVoronoi { sites: cdt.vertex_ids().collect(), ..Default::default() };
    let mut center_of: HashMap<TriId, usize> = HashMap::new();
    for t in cdt.triangle_ids() {
        center_of.insert(t, vor.vertices.len());
        vor.vertices.push(cdt.circumcircle_f64(t).0);
    }
    for (a, b) in cdt.edges() {
        if cdt.is_constrained(a, b) {
            continue;
        }
        let (Some(t1), Some(t2)) = (cdt.edge_owner(a, b), cdt.edge_owner(b, a)) else { continue };
        let (c1, c2) = (vor.vertices[center_of[&t1]], vor.vertices[center_of[&t2]]);
        let (pa, pb) = (cdt.approx(a), cdt.approx(b));
        let valid =
            |x: [f64; 2]| inside_polygon_f64(&region, x) && !blocked_f64(cdt, x, pa) && !blocked_f64(cdt, x, pb);
        let m = lerp(pa, pb, 0.5);
        let Some((lo, hi)) = clip_run(c1, c2, m, &valid) else { continue };
        let mut endpoint = |s: f64, at_zero: usize, at_one: usize| {
            if s == 0.0 {
                at_zero
            } else if s == 1.0 {
                at_one
            } else {
                vor.vertices.push(lerp(c1, c2, s));
                vor.vertices.len() - 1
            }
        };
        let i = endpoint(lo, center_of[&t1], center_of[&t2]);
        let j = endpoint(hi, center_of[&t1], center_of[&t2]);
        let e = vor.edges.len();
        vor.edges.push(VoronoiEdge { endpoints: [i, j], sites: edge_key(a, b), dual: (t1, t2) });
        vor.by_triangle.entry(t1).or_default().push(e);
        vor.by_triangle.entry(t2).or_default().push(e);
    }
    vor
}

/// Parameter interval `[lo, hi]` of the valid run on `c1 -> c2` nearest to
/// the projection of `m`.
fn clip_run(c1: [f64; 2], c2: [f64; 2], m: [f64; 2], valid: &impl Fn([f64; 2]) -> bool) -> Option<(f64, f64)> {
    let len2 = dist2_f64(c1, c2);
    let scale = c1[0].abs().max(c1[1].abs()).max(1.0);
    if len2 <= (1e-12 * scale).powi(2) {
        return valid(c1).then_some((0.0, 1.0));
    }
    let d = [c2[0] - c1[0], c2[1] - c1[1]];
    let s0 = (((m[0] - c1[0]) * d[0] + (m[1] - c1[1]) * d[1]) / len2).clamp(0.0, 1.0);
    let at = |s: f64| lerp(c1, c2, s);
    let start = if valid(at(s0)) {
        s0
    } else {
        (0..=EDGE_SAMPLES)
            .map(|k| k as f64 / EDGE_SAMPLES as f64)
            .filter(|&s| valid(at(s)))
            .min_by(|x, y| (x - s0).abs().total_cmp(&(y - s0).abs()))?
    };
    let grow = |dir: f64| -> f64 {
        let step = 1.0 / EDGE_SAMPLES as f64;
        let mut good = start;
        loop {
            let next = (good + dir * step).clamp(0.0, 1.0);
            if next == good {
                return good;
            }
            if !valid(at(next)) {
                return bisect(good, next, |s| valid(at(s)));
            }
            good = next;
        }
    };
    Some((grow(-1.0), grow(1.0)))
}

/// Last parameter between `good` and `bad` still accepted by `ok`.
fn bisect(mut good: f64, mut bad: f64, ok: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..BISECTIONS {
        let mid = 0.5 * (good + bad);
        if ok(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// Insertion point for obtuse `t`: on a Voronoi edge near the dual vertex
/// of `t`, inside the clipped circumcircle of `t`, as far as
/// possible from the edge's sites.
pub fn voronoi_insertion_point(cdt: &Cdt, t: TriId) -> Result<Option<Point>> {
    voronoi_insertion_point_in(cdt, &visibility_voronoi(cdt), t)
}

/// Same as [`voronoi_insertion_point`] with a precomputed diagram.
pub fn voronoi_insertion_point_in(cdt: &Cdt, vor: &BoundedVoronoi, t: TriId) -> Result<Option<Point>> {
    let tri = cdt.triangle(t).ok_or_else(|| Error::Precondition(format!("triangle {t} does not exist")))?;
    if !tri.is_obtuse() {
        return Err(Error::Precondition("voronoi insertion needs an obtuse triangle".into()));
    }
    let (a, b) = cdt.longest_side(t);
    if cdt.is_constrained(a, b) {
        return Err(Error::Precondition("longest side is constrained".into()));
    }
    let region = region_f64(cdt);
    let admissible = |x: [f64; 2]| inside_polygon_f64(&region, x) && clipped_contains_f64(cdt, t, x);

    // Walk triangles across unconstrained edges that cut the circumdisk of
    // `t`; the Voronoi edges dual to their sides are the search space. The
    // walk is over the CDT because clipped Voronoi edges need not connect.
    let disk = cdt.circumcircle_f64(t);
    let mut seen_tri: HashSet<TriId> = HashSet::from([t]);
    let mut queue: VecDeque<TriId> = VecDeque::from([t]);
    let mut edges: BTreeSet<usize> = BTreeSet::new();
    while let Some(u) = queue.pop_front() {
        edges.extend(vor.edges_of(u));
        for i in 0..3 {
            let (x, y) = cdt.triangle(u).expect("live").edge(i);
            if cdt.is_constrained(x, y) || disk_span(cdt.approx(x), cdt.approx(y), disk).is_none() {
                continue;
            }
            if let Some(w) = cdt.edge_owner(y, x) {
                if seen_tri.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }

    // (distance^2, boundary point, interior neighbour)
    let mut best: Option<(f64, [f64; 2], [f64; 2])> = None;
    for e in edges {
        let (p, q) = vor.segment(e);
        let Some(span) = disk_span(p, q, disk) else { continue };
        if let Some(found) = best_on_edge(cdt, vor, e, span, &admissible) {
            if best.as_ref().is_none_or(|b| found.0 > b.0) {
                best = Some(found);
            }
        }
    }
    let Some((_, edge_pt, inner)) = best else { return Ok(None) };
    let target = lerp(edge_pt, inner, 1e-3);
    let scale = target[0].abs().max(target[1].abs()).max(1.0);
    let tol = (0.5 * dist2_f64(edge_pt, target).sqrt()).max(1e-12 * scale);
    let found = rationalize(
        target,
        |p| cdt.region_location(p) == PolygonLocation::Inside && clipped_circumcircle_contains(cdt, t, p),
        &RationalizeConfig::with_tolerance(tol),
    );
    Ok(found)
}

/// Parameter range of `p -> q` inside the closed disk.
fn disk_span(p: [f64; 2], q: [f64; 2], (c, r2): ([f64; 2], f64)) -> Option<(f64, f64)> {
    let d = [q[0] - p[0], q[1] - p[1]];
    let f = [p[0] - c[0], p[1] - c[1]];
    let a = d[0] * d[0] + d[1] * d[1];
    let b = 2.0 * (f[0] * d[0] + f[1] * d[1]);
    let cc = f[0] * f[0] + f[1] * f[1] - r2;
    if a == 0.0 {
        return (cc <= 0.0).then_some((0.0, 1.0));
    }
    let disc = b * b - 4.0 * a * cc;
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    let (lo, hi) = (((-b - root) / (2.0 * a)).max(0.0), ((-b + root) / (2.0 * a)).min(1.0));
    (lo <= hi).then_some((lo, hi))
}

/// Farthest admissible point from the sites on edge `e` within `span`,
/// refined against its inadmissible neighbour.
fn best_on_edge(
    cdt: &Cdt,
    vor: &BoundedVoronoi,
    e: usize,
    (lo, hi): (f64, f64),
    admissible: &impl Fn([f64; 2]) -> bool,
) -> Option<(f64, [f64; 2], [f64; 2])> {
    let (p, q) = vor.segment(e);
    let site = cdt.approx(vor.edges[e].sites.0);
    let at = |s: f64| lerp(p, q, s);
    let params: Vec<f64> = (0..=SEARCH_SAMPLES).map(|k| lo + (hi - lo) * k as f64 / SEARCH_SAMPLES as f64).collect();
    let ok: Vec<bool> = params.iter().map(|&s| admissible(at(s))).collect();
    let k = (0..params.len())
        .filter(|&k| ok[k])
        .max_by(|&i, &j| dist2_f64(at(params[i]), site).total_cmp(&dist2_f64(at(params[j]), site)).then(j.cmp(&i)))?;
    // the distance is convex along the edge, so it grows away from the
    // interior; push toward whichever neighbour is farther and inadmissible
    let mut s = params[k];
    let mut inner = if k > 0 { params[k - 1] } else { params[(k + 1).min(params.len() - 1)] };
    for nb in [k.wrapping_sub(1), k + 1] {
        if nb >= params.len() || ok[nb] {
            continue;
        }
        if dist2_f64(at(params[nb]), site) > dist2_f64(at(s), site) {
            let refined = bisect(s, params[nb], |x| admissible(at(x)));
            inner = s;
            s = refined;
        }
    }
    Some((dist2_f64(at(s), site), at(s), at(inner)))
}
