//! Shared fixtures: a fixed desk suite of small instances and helpers.
#![allow(dead_code)]

use nonobtuse::cdt::Instance;
use nonobtuse::geom::{cross, locate_in_polygon, PolygonLocation};
use nonobtuse::{pt, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn distinct_point(rng: &mut ChaCha8Rng, taken: &[Point], lo: (i64, i64), hi: (i64, i64)) -> Point {
    loop {
        let p = pt(rng.gen_range(lo.0..=hi.0), rng.gen_range(lo.1..=hi.1));
        if !taken.contains(&p) {
            return p;
        }
    }
}

/// Square or rectangle with interior points and up to `constraints`
/// random constraint segments between them.
pub fn square_instance(uid: &str, seed: u64, interior: usize, constraints: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let w = rng.gen_range(600..=1000);
        let h = rng.gen_range(600..=1000);
        let mut pts = vec![pt(0, 0), pt(w, 0), pt(w, h), pt(0, h)];
        while pts.len() < 4 + interior {
            let p = distinct_point(&mut rng, &pts, (1, 1), (w - 1, h - 1));
            pts.push(p);
        }
        let mut cons = Vec::new();
        for _ in 0..constraints {
            let a = rng.gen_range(4..pts.len());
            let b = rng.gen_range(4..pts.len());
            if a != b {
                cons.push((a, b));
            }
        }
        if let Ok(inst) = Instance::new(uid, pts, vec![0, 1, 2, 3], cons) {
            return inst;
        }
    }
}

/// Star-shaped polygon with `k` vertices plus interior points.
pub fn polygon_instance(uid: &str, seed: u64, k: usize, interior: usize, constraints: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut angles: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let mut pts: Vec<Point> = Vec::new();
        for a in angles {
            let r = rng.gen_range(250.0..500.0);
            let p = pt((500.0 + r * a.cos()).round() as i64, (500.0 + r * a.sin()).round() as i64);
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let region = pts.clone();
        let b = pts.len();
        let mut tries = 0;
        while pts.len() < b + interior && tries < 1000 {
            tries += 1;
            let p = distinct_point(&mut rng, &pts, (250, 250), (750, 750));
            if locate_in_polygon(&region, &p) == PolygonLocation::Inside {
                pts.push(p);
            }
        }
        let mut cons = Vec::new();
        for _ in 0..constraints.min(pts.len().saturating_sub(b + 1)) {
            let a = rng.gen_range(b..pts.len());
            let c = rng.gen_range(b..pts.len());
            if a != c {
                cons.push((a, c));
            }
        }
        if let Ok(inst) = Instance::new(uid, pts, (0..b).collect(), cons) {
            return inst;
        }
    }
}

/// Strict convex hull, counterclockwise.
pub fn convex_hull(pts: &[Point]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a].cmp(&pts[b]));
    let mut hull: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        for &i in &idx {
            while hull.len() >= start + 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if cross(&pts[a], &pts[b], &pts[i]) > num_traits::Zero::zero() {
                    break;
                }
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
        if pass == 0 {
            idx.reverse();
        }
    }
    hull
}

/// Point set whose region is the convex hull, in the style of the public
/// challenge "point-set" instances.
pub fn point_set_instance(uid: &str, seed: u64, n: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut pts = Vec::new();
        while pts.len() < n {
            let p = distinct_point(&mut rng, &pts, (0, 0), (1000, 1000));
            pts.push(p);
        }
        let hull = convex_hull(&pts);
        let region: Vec<Point> = hull.iter().map(|&i| pts[i].clone()).collect();
        let on_edge =
            (0..n).any(|i| !hull.contains(&i) && locate_in_polygon(&region, &pts[i]) != PolygonLocation::Inside);
        if on_edge {
            continue;
        }
        if let Ok(inst) = Instance::new(uid, pts, hull, vec![]) {
            return inst;
        }
    }
}

/// Twenty fixed instances: synthetic squares, random simple polygons with
/// at most 30 vertices, and point sets with at most 20 points.
pub fn desk_suite() -> Vec<Instance> {
    let mut out = Vec::new();
    for (i, (interior, cons)) in [(4, 0), (8, 0), (12, 0), (6, 1), (10, 2), (14, 2)].into_iter().enumerate() {
        out.push(square_instance(&format!("square-{i}"), 100 + i as u64, interior, cons));
    }
    for (i, (k, interior, cons)) in
        [(8, 0, 0), (12, 2, 0), (16, 3, 1), (20, 0, 0), (24, 4, 1), (28, 2, 0), (30, 3, 1)].into_iter().enumerate()
    {
        out.push(polygon_instance(&format!("polygon-{i}"), 200 + i as u64, k, interior, cons));
    }
    for (i, n) in [8, 10, 12, 14, 16, 18, 20].into_iter().enumerate() {
        out.push(point_set_instance(&format!("point-set-{i}"), 300 + i as u64, n));
    }
    out
}
