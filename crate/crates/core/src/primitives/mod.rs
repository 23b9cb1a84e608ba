//! Geometric primitives used by action generation: altitude drops, polygon
//! centers, the visibility-bounded Voronoi diagram, clipped circumcircles
//! and their arrangement.

mod arrangement;
mod center;
mod clip;
mod voronoi;

pub(crate) use arrangement::union_boundary;
pub use arrangement::{circle_arrangement_cells, union_polygon, ArrangementCell, ArrangementConfig};
pub use center::{center_feasible, polygon_center, polygon_center_with, CenterConfig};
pub use clip::{clipped_circumcircle_contains, clipped_contains_f64, conflict_set, ClippedDisk};
pub use voronoi::{
    visibility_voronoi, voronoi_insertion_point, voronoi_insertion_point_in, BoundedVoronoi, VoronoiEdge,
};

use num_traits::Signed;

use crate::geom::{self, TriangleClass};
use crate::{Error, Point, Result};

/// Simple polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplePolygon {
    vertices: Vec<Point>,
}

impl SimplePolygon {
    /// Validates simplicity; clockwise input is reversed.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if !geom::is_simple_polygon(&vertices) {
            return Err(Error::Precondition("polygon is not simple".into()));
        }
        let area = geom::polygon_area2(&vertices);
        if area.is_negative() {
            vertices.reverse();
        }
        Ok(SimplePolygon { vertices })
    }

    /// Skips the simplicity check; the caller guarantees a simple CCW ring.
    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point>) -> Self {
        SimplePolygon { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Foot of the altitude from the obtuse corner onto the longest side.
pub fn altitude_drop(t: [&Point; 3]) -> Result<Point> {
    let i = match geom::triangle_class(t)? {
        TriangleClass::ObtuseAt(i) => i,
        TriangleClass::NonObtuse => return Err(Error::Precondition("altitude drop needs an obtuse triangle".into())),
    };
    let apex = t[i];
    let p = t[(i + 1) % 3];
    let q = t[(i + 2) % 3];
    let (dx, dy) = q.delta(p);
    let (ax, ay) = apex.delta(p);
    let s = (ax * &dx + ay * &dy) / (&dx * &dx + &dy * &dy);
    Ok(Point::new(&p.x + &s * dx, &p.y + s * dy))
}

// ----- small floating-point helpers shared by the numeric searches -------

pub(crate) fn orient_f64(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Strict crossing of two segments in floating point.
pub(crate) fn crosses_f64(p: [f64; 2], q: [f64; 2], a: [f64; 2], b: [f64; 2]) -> bool {
    let d1 = orient_f64(p, q, a);
    let d2 = orient_f64(p, q, b);
    let d3 = orient_f64(a, b, p);
    let d4 = orient_f64(a, b, q);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

pub(crate) fn dist2_f64(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

pub(crate) fn lerp(a: [f64; 2], b: [f64; 2], s: f64) -> [f64; 2] {
    [a[0] + (b[0] - a[0]) * s, a[1] + (b[1] - a[1]) * s]
}

pub(crate) fn inside_polygon_f64(poly: &[[f64; 2]], p: [f64; 2]) -> bool {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}
