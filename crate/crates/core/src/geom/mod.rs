//! Points, segments and the exact predicates everything else is built on.
//!
//! All predicates are generic over [`Scalar`]. With [`crate::Rational`] they
//! are exact; with `f64` they are the usual floating-point approximations
//! and are only used for candidate search and rendering.

pub mod filter;
pub mod rational;

use std::fmt;

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};
use thiserror::Error;

/// Numeric field the geometry kernel is generic over.
pub trait Scalar: Clone + PartialOrd + fmt::Debug + Num + Signed + FromPrimitive + ToPrimitive {}

impl<T> Scalar for T where T: Clone + PartialOrd + fmt::Debug + Num + Signed + FromPrimitive + ToPrimitive {}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("degenerate triangle: the three points are collinear")]
    Collinear,
    #[error("coincident points")]
    Coincident,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }

    /// Components of `self - other`.
    pub fn delta(&self, other: &Self) -> (S, S) {
        (self.x.clone() - other.x.clone(), self.y.clone() - other.y.clone())
    }

    pub fn dist2(&self, other: &Self) -> S {
        let (dx, dy) = self.delta(other);
        dx.clone() * dx + dy.clone() * dy
    }

    pub fn midpoint(&self, other: &Self) -> Self {
        let two = S::one() + S::one();
        Point { x: (self.x.clone() + other.x.clone()) / two.clone(), y: (self.y.clone() + other.y.clone()) / two }
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.x.to_f64().unwrap_or(f64::NAN), self.y.to_f64().unwrap_or(f64::NAN)]
    }
}

impl<S: fmt::Display> fmt::Display for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment<S> {
    pub a: Point<S>,
    pub b: Point<S>,
}

impl<S: Scalar> Segment<S> {
    pub fn new(a: Point<S>, b: Point<S>) -> Result<Self, GeomError> {
        if a == b {
            return Err(GeomError::Coincident);
        }
        Ok(Segment { a, b })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CirclePosition {
    Inside,
    On,
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AngleClass {
    Acute,
    Right,
    Obtuse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriangleClass {
    NonObtuse,
    /// Index (0, 1 or 2) of the obtuse corner.
    ObtuseAt(usize),
}

impl TriangleClass {
    pub fn is_obtuse(self) -> bool {
        matches!(self, TriangleClass::ObtuseAt(_))
    }
}

fn sign_of<S: Scalar>(v: &S) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Twice the signed area of `pqr`.
pub fn cross<S: Scalar>(p: &Point<S>, q: &Point<S>, r: &Point<S>) -> S {
    let (ux, uy) = q.delta(p);
    let (vx, vy) = r.delta(p);
    ux * vy - uy * vx
}

/// Sign of `(q - p) x (r - p)`.
pub fn orientation<S: Scalar>(p: &Point<S>, q: &Point<S>, r: &Point<S>) -> Orientation {
    match sign_of(&cross(p, q, r)) {
        1 => Orientation::CounterClockwise,
        -1 => Orientation::Clockwise,
        _ => Orientation::Collinear,
    }
}

/// Position of `s` relative to the circle through `p`, `q`, `r`, independent
/// of the orientation of the three defining points.
pub fn in_circle<S: Scalar>(
    p: &Point<S>,
    q: &Point<S>,
    r: &Point<S>,
    s: &Point<S>,
) -> Result<CirclePosition, GeomError> {
    let orient = sign_of(&cross(p, q, r));
    if orient == 0 {
        return Err(GeomError::Collinear);
    }
    let (ax, ay) = p.delta(s);
    let (bx, by) = q.delta(s);
    let (cx, cy) = r.delta(s);
    let a2 = ax.clone() * ax.clone() + ay.clone() * ay.clone();
    let b2 = bx.clone() * bx.clone() + by.clone() * by.clone();
    let c2 = cx.clone() * cx.clone() + cy.clone() * cy.clone();
    let det = a2 * (bx.clone() * cy.clone() - by.clone() * cx.clone()) - b2 * (ax.clone() * cy - ay.clone() * cx)
        + c2 * (ax * by - ay * bx);
    Ok(match sign_of(&det) * orient {
        1 => CirclePosition::Inside,
        -1 => CirclePosition::Outside,
        _ => CirclePosition::On,
    })
}

pub fn dot_at<S: Scalar>(a: &Point<S>, b: &Point<S>, c: &Point<S>) -> S {
    let (ux, uy) = a.delta(b);
    let (vx, vy) = c.delta(b);
    ux * vx + uy * vy
}

/// Classifies the angle at `b` in the corner `a`-`b`-`c`.
pub fn angle_class_at<S: Scalar>(a: &Point<S>, b: &Point<S>, c: &Point<S>) -> Result<AngleClass, GeomError> {
    if a == b || c == b {
        return Err(GeomError::Coincident);
    }
    Ok(match sign_of(&dot_at(a, b, c)) {
        1 => AngleClass::Acute,
        0 => AngleClass::Right,
        _ => AngleClass::Obtuse,
    })
}

pub fn triangle_class<S: Scalar>(t: [&Point<S>; 3]) -> Result<TriangleClass, GeomError> {
    if orientation(t[0], t[1], t[2]) == Orientation::Collinear {
        return Err(GeomError::Collinear);
    }
    for i in 0..3 {
        let prev = t[(i + 2) % 3];
        let next = t[(i + 1) % 3];
        if angle_class_at(prev, t[i], next)? == AngleClass::Obtuse {
            return Ok(TriangleClass::ObtuseAt(i));
        }
    }
    Ok(TriangleClass::NonObtuse)
}

/// True iff `p` lies on the open segment `ab`.
pub fn on_open_segment<S: Scalar>(a: &Point<S>, b: &Point<S>, p: &Point<S>) -> bool {
    if orientation(a, b, p) != Orientation::Collinear || p == a || p == b {
        return false;
    }
    // collinear: p is strictly between iff (p - a).(p - b) < 0
    dot_at(a, p, b).is_negative()
}

/// True iff the open segments share at least one point.
pub fn segments_properly_intersect<S: Scalar>(s1: &Segment<S>, s2: &Segment<S>) -> bool {
    open_segments_intersect(&s1.a, &s1.b, &s2.a, &s2.b)
}

pub fn open_segments_intersect<S: Scalar>(a: &Point<S>, b: &Point<S>, c: &Point<S>, d: &Point<S>) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    if o1 == Orientation::Collinear && o2 == Orientation::Collinear {
        // Overlap of positive length along the common line.
        let key = |p: &Point<S>| -> S {
            let (dx, dy) = b.delta(a);
            let (px, py) = p.delta(a);
            px * dx + py * dy
        };
        let (mut lo1, mut hi1) = (key(a), key(b));
        if lo1 > hi1 {
            std::mem::swap(&mut lo1, &mut hi1);
        }
        let (mut lo2, mut hi2) = (key(c), key(d));
        if lo2 > hi2 {
            std::mem::swap(&mut lo2, &mut hi2);
        }
        let lo = if lo1 > lo2 { lo1 } else { lo2 };
        let hi = if hi1 < hi2 { hi1 } else { hi2 };
        return lo < hi;
    }
    if o1 == Orientation::Collinear || o2 == Orientation::Collinear {
        return false;
    }
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if o3 == Orientation::Collinear || o4 == Orientation::Collinear {
        return false;
    }
    o1 != o2 && o3 != o4
}

/// Exact circumcenter; `None` for collinear input.
pub fn circumcenter<S: Scalar>(a: &Point<S>, b: &Point<S>, c: &Point<S>) -> Option<Point<S>> {
    let (bx, by) = b.delta(a);
    let (cx, cy) = c.delta(a);
    let d = (bx.clone() * cy.clone() - by.clone() * cx.clone()) * (S::one() + S::one());
    if d.is_zero() {
        return None;
    }
    let b2 = bx.clone() * bx.clone() + by.clone() * by.clone();
    let c2 = cx.clone() * cx.clone() + cy.clone() * cy.clone();
    let ux = (cy * b2.clone() - by * c2.clone()) / d.clone();
    let uy = (bx * c2 - cx * b2) / d;
    Some(Point::new(a.x.clone() + ux, a.y.clone() + uy))
}

pub fn centroid<S: Scalar>(a: &Point<S>, b: &Point<S>, c: &Point<S>) -> Point<S> {
    let three = S::from_u8(3).expect("scalar holds small integers");
    Point::new(
        (a.x.clone() + b.x.clone() + c.x.clone()) / three.clone(),
        (a.y.clone() + b.y.clone() + c.y.clone()) / three,
    )
}

/// Twice the signed area of a closed polygon.
pub fn polygon_area2<S: Scalar>(pts: &[Point<S>]) -> S {
    let n = pts.len();
    let mut acc = S::zero();
    for i in 0..n {
        let p = &pts[i];
        let q = &pts[(i + 1) % n];
        acc = acc + p.x.clone() * q.y.clone() - p.y.clone() * q.x.clone();
    }
    acc
}

/// Whether a closed polygon is simple (no two non-adjacent edges meet, no
/// adjacent edges fold back, no repeated vertices).
pub fn is_simple_polygon<S: Scalar>(pts: &[Point<S>]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            if pts[i] == pts[j] {
                return false;
            }
        }
    }
    for i in 0..n {
        let (a, b) = (&pts[i], &pts[(i + 1) % n]);
        for j in i + 1..n {
            let (c, d) = (&pts[j], &pts[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                if open_segments_intersect(a, b, c, d) {
                    return false;
                }
                continue;
            }
            if open_segments_intersect(a, b, c, d)
                || on_open_segment(a, b, c)
                || on_open_segment(a, b, d)
                || on_open_segment(c, d, a)
                || on_open_segment(c, d, b)
            {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolygonLocation {
    Inside,
    Boundary,
    Outside,
}

/// Exact point-in-polygon by crossing number.
pub fn locate_in_polygon<S: Scalar>(pts: &[Point<S>], p: &Point<S>) -> PolygonLocation {
    let n = pts.len();
    let mut inside = false;
    for i in 0..n {
        let a = &pts[i];
        let b = &pts[(i + 1) % n];
        if a == p || on_open_segment(a, b, p) {
            return PolygonLocation::Boundary;
        }
        if (a.y > p.y) != (b.y > p.y) {
            // x-coordinate of the crossing compared without division
            let o = orientation(a, b, p);
            let upward = b.y > a.y;
            if (upward && o == Orientation::CounterClockwise) || (!upward && o == Orientation::Clockwise) {
                inside = !inside;
            }
        }
    }
    if inside {
        PolygonLocation::Inside
    } else {
        PolygonLocation::Outside
    }
}
