//! Constrained Delaunay triangulation of a small simple polygon, used to
//! refill holes left by constraint insertion and vertex removal.

use crate::geom::{self, CirclePosition, Orientation};
use crate::{Error, Point, Result};

/// Triangulates a simple polygon given as counterclockwise vertex ids. Only
/// the polygon edges act as constraints. `pos` maps ids to coordinates.
pub(crate) fn triangulate_polygon<'a, F>(poly: &[usize], pos: F) -> Result<Vec<[usize; 3]>>
where
    F: Fn(usize) -> &'a Point,
{
    let mut out = Vec::with_capacity(poly.len().saturating_sub(2));
    let mut stack: Vec<Vec<usize>> = vec![poly.to_vec()];
    while let Some(cur) = stack.pop() {
        let n = cur.len();
        if n < 3 {
            continue;
        }
        if n == 3 {
            if geom::orientation(pos(cur[0]), pos(cur[1]), pos(cur[2])) != Orientation::CounterClockwise {
                return Err(Error::Cavity);
            }
            out.push([cur[0], cur[1], cur[2]]);
            continue;
        }
        let (p0, p1) = (pos(cur[0]), pos(cur[1]));
        let mut best: Option<usize> = None;
        for k in 2..n {
            if !ear_valid(&cur, k, &pos) {
                continue;
            }
            match best {
                None => best = Some(k),
                Some(b) => {
                    let inside = geom::in_circle(p0, p1, pos(cur[b]), pos(cur[k]))?;
                    if inside == CirclePosition::Inside {
                        best = Some(k);
                    }
                }
            }
        }
        let k = best.ok_or(Error::Cavity)?;
        out.push([cur[0], cur[1], cur[k]]);
        stack.push(cur[1..=k].to_vec());
        let mut rest = cur[k..].to_vec();
        rest.push(cur[0]);
        stack.push(rest);
    }
    Ok(out)
}

/// Whether triangle `(cur[0], cur[1], cur[k])` lies inside the polygon.
fn ear_valid<'a, F>(cur: &[usize], k: usize, pos: &F) -> bool
where
    F: Fn(usize) -> &'a Point,
{
    let n = cur.len();
    let (a, b, c) = (pos(cur[0]), pos(cur[1]), pos(cur[k]));
    if geom::orientation(a, b, c) != Orientation::CounterClockwise {
        return false;
    }
    for (i, &w) in cur.iter().enumerate() {
        if i == 0 || i == 1 || i == k {
            continue;
        }
        let q = pos(w);
        // no polygon vertex inside or on the sides of the triangle
        let o1 = geom::orientation(a, b, q);
        let o2 = geom::orientation(b, c, q);
        let o3 = geom::orientation(c, a, q);
        if o1 != Orientation::Clockwise && o2 != Orientation::Clockwise && o3 != Orientation::Clockwise {
            return false;
        }
    }
    for i in 0..n {
        let (i0, i1) = (cur[i], cur[(i + 1) % n]);
        let side = |x: usize, y: usize| (i0 == x && i1 == y) || (i0 == y && i1 == x);
        if side(cur[1], cur[k]) || side(cur[k], cur[0]) {
            continue;
        }
        let (e0, e1) = (pos(i0), pos(i1));
        if geom::open_segments_intersect(b, c, e0, e1) || geom::open_segments_intersect(c, a, e0, e1) {
            return false;
        }
    }
    true
}
