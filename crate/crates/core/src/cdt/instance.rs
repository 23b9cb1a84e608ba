use crate::geom;
use crate::{Error, Point, Result};

/// A planar straight-line graph inside a simple polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub uid: String,
    pub points: Vec<Point>,
    /// Indices of the region polygon, counterclockwise.
    pub boundary: Vec<usize>,
    /// Extra constraint edges (index pairs) not on the boundary.
    pub constraints: Vec<(usize, usize)>,
}

impl Instance {
    /// Builds and validates an instance. A clockwise boundary is reversed.
    pub fn new(
        uid: impl Into<String>,
        points: Vec<Point>,
        mut boundary: Vec<usize>,
        constraints: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = points.len();
        if boundary.iter().any(|&i| i >= n) {
            return Err(Error::InvalidInstance("boundary index out of range".into()));
        }
        let poly: Vec<Point> = boundary.iter().map(|&i| points[i].clone()).collect();
        if geom::polygon_area2(&poly) < crate::Rational::from_integer(0.into()) {
            boundary.reverse();
        }
        let inst = Instance { uid: uid.into(), points, boundary, constraints };
        inst.validate()?;
        Ok(inst)
    }

    pub fn boundary_polygon(&self) -> Vec<Point> {
        self.boundary.iter().map(|&i| self.points[i].clone()).collect()
    }

    /// Boundary edges followed by the extra constraints.
    pub fn constraint_segments(&self) -> Vec<(usize, usize)> {
        let m = self.boundary.len();
        let mut out: Vec<(usize, usize)> = (0..m).map(|i| (self.boundary[i], self.boundary[(i + 1) % m])).collect();
        out.extend(self.constraints.iter().copied());
        out
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.points.len();
        let mut seen = vec![false; n];
        for &i in &self.boundary {
            if i >= n {
                return Err(Error::InvalidInstance("boundary index out of range".into()));
            }
            if seen[i] {
                return Err(Error::InvalidInstance(format!("boundary repeats index {i}")));
            }
            seen[i] = true;
        }
        let poly = self.boundary_polygon();
        if !geom::is_simple_polygon(&poly) {
            return Err(Error::InvalidInstance("region boundary is not a simple polygon".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.points[i] == self.points[j] {
                    return Err(Error::InvalidInstance(format!("points {i} and {j} coincide")));
                }
            }
        }
        for (k, p) in self.points.iter().enumerate() {
            if geom::locate_in_polygon(&poly, p) == geom::PolygonLocation::Outside {
                return Err(Error::InvalidInstance(format!("point {k} lies outside the region")));
            }
        }
        for &(a, b) in &self.constraints {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidInstance(format!("bad constraint ({a}, {b})")));
            }
            // the segment must stay inside the closed region
            let mid = self.points[a].midpoint(&self.points[b]);
            if geom::locate_in_polygon(&poly, &mid) == geom::PolygonLocation::Outside {
                return Err(Error::InvalidInstance(format!("constraint ({a}, {b}) leaves the region")));
            }
        }
        let segs = self.constraint_segments();
        for i in 0..segs.len() {
            let (a, b) = segs[i];
            for &(c, d) in &segs[i + 1..] {
                let (pa, pb, pc, pd) = (&self.points[a], &self.points[b], &self.points[c], &self.points[d]);
                if geom::open_segments_intersect(pa, pb, pc, pd) {
                    return Err(Error::CrossingConstraints);
                }
            }
        }
        Ok(())
    }
}
