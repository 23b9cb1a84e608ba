//! Floating-point sign filters. Each returns `Some` only when the sign of the
//! approximate determinant is certain given that every input coordinate is
//! the correctly rounded value of an exact rational. Callers fall back to
//! the exact predicate on `None`.

use super::{CirclePosition, Orientation};

// Generous relative bound: input rounding (1 ulp per coordinate) plus the
// arithmetic of the determinant stays well below this.
const ORIENT_BOUND: f64 = 1e-13;
const INCIRCLE_BOUND: f64 = 1e-12;

pub fn orientation(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> Option<Orientation> {
    let l = (q[0] - p[0]) * (r[1] - p[1]);
    let rr = (q[1] - p[1]) * (r[0] - p[0]);
    let det = l - rr;
    let mag =
        (q[0].abs() + p[0].abs()) * (r[1].abs() + p[1].abs()) + (q[1].abs() + p[1].abs()) * (r[0].abs() + p[0].abs());
    let bound = ORIENT_BOUND * mag;
    if !det.is_finite() || !bound.is_finite() {
        return None;
    }
    if det > bound {
        Some(Orientation::CounterClockwise)
    } else if det < -bound {
        Some(Orientation::Clockwise)
    } else {
        None
    }
}

/// Sign of the raw in-circle determinant (positive when `s` is inside a
/// counterclockwise `p`, `q`, `r`).
pub fn in_circle_det(p: [f64; 2], q: [f64; 2], r: [f64; 2], s: [f64; 2]) -> Option<i8> {
    let m = |a: [f64; 2]| (a[0] - s[0], a[1] - s[1], a[0].abs() + s[0].abs(), a[1].abs() + s[1].abs());
    let (ax, ay, aax, aay) = m(p);
    let (bx, by, bbx, bby) = m(q);
    let (cx, cy, ccx, ccy) = m(r);
    let a2 = ax * ax + ay * ay;
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let det = a2 * (bx * cy - by * cx) - b2 * (ax * cy - ay * cx) + c2 * (ax * by - ay * bx);
    let aa2 = aax * aax + aay * aay;
    let bb2 = bbx * bbx + bby * bby;
    let cc2 = ccx * ccx + ccy * ccy;
    let mag = aa2 * (bbx * ccy + bby * ccx) + bb2 * (aax * ccy + aay * ccx) + cc2 * (aax * bby + aay * bbx);
    let bound = INCIRCLE_BOUND * mag;
    if !det.is_finite() || !bound.is_finite() {
        return None;
    }
    if det > bound {
        Some(1)
    } else if det < -bound {
        Some(-1)
    } else {
        None
    }
}

/// In-circle test for a counterclockwise triangle `p`, `q`, `r`.
pub fn in_circle_ccw(p: [f64; 2], q: [f64; 2], r: [f64; 2], s: [f64; 2]) -> Option<CirclePosition> {
    in_circle_det(p, q, r, s).map(|sgn| if sgn > 0 { CirclePosition::Inside } else { CirclePosition::Outside })
}
