//! Clipped circumcircles: the piece of a triangle's circumdisk, cut by
//! constrained segments, that contains the triangle. Membership is
//! approximated by visibility from the triangle's centroid.

use crate::cdt::{Cdt, TriId};
use crate::geom::{self, CirclePosition};
use crate::{Point, Rational};

use super::crosses_f64;

/// The circumdisk of one triangle together with its clipping context.
#[derive(Clone, Debug)]
pub struct ClippedDisk {
    pub triangle: TriId,
    pub center: [f64; 2],
    pub radius_squared: Rational,
    pub centroid: Point,
}

impl ClippedDisk {
    pub fn new(cdt: &Cdt, t: TriId) -> Self {
        let [a, b, c] = cdt.tri_points(t);
        let exact = geom::circumcenter(a, b, c).expect("live triangles are not degenerate");
        ClippedDisk {
            triangle: t,
            center: exact.to_f64(),
            radius_squared: exact.dist2(a),
            centroid: geom::centroid(a, b, c),
        }
    }

    pub fn contains(&self, cdt: &Cdt, q: &Point) -> bool {
        clipped_circumcircle_contains(cdt, self.triangle, q)
    }
}

/// True iff `q` is strictly inside the circumcircle of `t` and the segment
/// from `q` to the centroid of `t` crosses no constrained edge.
pub fn clipped_circumcircle_contains(cdt: &Cdt, t: TriId, q: &Point) -> bool {
    let qa = q.to_f64();
    if cdt.in_circumcircle(t, q, qa) != CirclePosition::Inside {
        return false;
    }
    let [a, b, c] = cdt.tri_points(t);
    let g = geom::centroid(a, b, c);
    !segment_blocked(cdt, q, &g)
}

/// Whether a constrained edge properly crosses the segment `p`-`q`.
pub(crate) fn segment_blocked(cdt: &Cdt, p: &Point, q: &Point) -> bool {
    let (pa, qa) = (p.to_f64(), q.to_f64());
    let (lo, hi) = ([pa[0].min(qa[0]), pa[1].min(qa[1])], [pa[0].max(qa[0]), pa[1].max(qa[1])]);
    let pad = 1e-9 * (1.0 + hi[0].abs().max(hi[1].abs()).max(lo[0].abs()).max(lo[1].abs()));
    cdt.constrained_iter().any(|(a, b)| {
        let (aa, ba) = (cdt.approx(a), cdt.approx(b));
        if aa[0].max(ba[0]) < lo[0] - pad
            || aa[0].min(ba[0]) > hi[0] + pad
            || aa[1].max(ba[1]) < lo[1] - pad
            || aa[1].min(ba[1]) > hi[1] + pad
        {
            return false;
        }
        geom::open_segments_intersect(p, q, cdt.point(a), cdt.point(b))
    })
}

/// Floating-point membership test for numeric searches.
pub fn clipped_contains_f64(cdt: &Cdt, t: TriId, q: [f64; 2]) -> bool {
    let (center, r2) = cdt.circumcircle_f64(t);
    let d2 = (q[0] - center[0]).powi(2) + (q[1] - center[1]).powi(2);
    if d2 >= r2 {
        return false;
    }
    let v = cdt.triangle(t).expect("live").v;
    let (a, b, c) = (cdt.approx(v[0]), cdt.approx(v[1]), cdt.approx(v[2]));
    let g = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0];
    !blocked_f64(cdt, q, g)
}

pub(crate) fn blocked_f64(cdt: &Cdt, p: [f64; 2], q: [f64; 2]) -> bool {
    let (lo, hi) = ([p[0].min(q[0]), p[1].min(q[1])], [p[0].max(q[0]), p[1].max(q[1])]);
    cdt.constrained_iter().any(|(a, b)| {
        let (aa, ba) = (cdt.approx(a), cdt.approx(b));
        if aa[0].max(ba[0]) < lo[0] || aa[0].min(ba[0]) > hi[0] || aa[1].max(ba[1]) < lo[1] || aa[1].min(ba[1]) > hi[1]
        {
            return false;
        }
        crosses_f64(p, q, aa, ba)
    })
}

/// Exact conflict set of `q`: all triangles whose clipped circumcircle
/// contains it, sorted by id.
pub fn conflict_set(cdt: &Cdt, q: &Point) -> Vec<TriId> {
    let qa = q.to_f64();
    cdt.triangle_ids()
        .filter(|&t| {
            let (c, r2) = cdt.circumcircle_f64(t);
            let d2 = (qa[0] - c[0]).powi(2) + (qa[1] - c[1]).powi(2);
            // float prefilter with a wide margin; the exact test decides
            d2 <= r2 * (1.0 + 1e-6) + 1e-12
        })
        .filter(|&t| clipped_circumcircle_contains(cdt, t, q))
        .collect()
}
