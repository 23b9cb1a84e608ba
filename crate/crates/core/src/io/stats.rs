use num_traits::Zero;
use serde::Serialize;

use super::{verify, Solution};
use crate::cdt::Instance;
use crate::geom::dot_at;
use crate::io::solution_triangles;
use crate::{Error, Point, Result};

pub const LARGEST_BINS: usize = 90;
pub const SMALLEST_BINS: usize = 60;

#[derive(Clone, Debug, Serialize)]
pub struct InstanceStat {
    pub instance_uid: String,
    pub input_points: usize,
    pub steiner_points: usize,
    pub triangles: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StatsReport {
    pub triangles: usize,
    pub right_triangles: usize,
    pub right_fraction: f64,
    /// One-degree bins of the largest angle over [0, 90].
    pub largest_angle: Vec<usize>,
    /// One-degree bins of the smallest angle over [0, 60].
    pub smallest_angle: Vec<usize>,
    pub instances: Vec<InstanceStat>,
}

fn angle_deg(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let u = [a[0] - b[0], a[1] - b[1]];
    let v = [c[0] - b[0], c[1] - b[1]];
    (u[0] * v[1] - u[1] * v[0]).abs().atan2(u[0] * v[0] + u[1] * v[1]).to_degrees()
}

fn bin(angle: f64, bins: usize) -> usize {
    (angle.max(0.0).floor() as usize).min(bins - 1)
}

/// Angle histograms over verified non-obtuse solutions.
pub fn stats(entries: &[(Instance, Solution)]) -> Result<StatsReport> {
    if entries.is_empty() {
        return Err(Error::Precondition("no solutions given".into()));
    }
    let mut report = StatsReport {
        triangles: 0,
        right_triangles: 0,
        right_fraction: 0.0,
        largest_angle: vec![0; LARGEST_BINS],
        smallest_angle: vec![0; SMALLEST_BINS],
        instances: Vec::new(),
    };
    for (inst, sol) in entries {
        let check = verify(inst, sol);
        if !check.valid {
            let first = check.violations.first().map_or(String::new(), |v| format!("{:?}: {}", v.code, v.detail));
            return Err(Error::Precondition(format!("solution for `{}` is not valid ({first})", sol.instance_uid)));
        }
        let tris = solution_triangles(inst, sol).expect("verified");
        let pts: Vec<Point> = inst.points.iter().chain(&sol.steiner_points).cloned().collect();
        for t in &tris {
            let p = t.map(|i| &pts[i]);
            let f = p.map(Point::to_f64);
            let angles = [angle_deg(f[2], f[0], f[1]), angle_deg(f[0], f[1], f[2]), angle_deg(f[1], f[2], f[0])];
            let largest = angles.iter().copied().fold(f64::MIN, f64::max);
            let smallest = angles.iter().copied().fold(f64::MAX, f64::min);
            report.largest_angle[bin(largest, LARGEST_BINS)] += 1;
            report.smallest_angle[bin(smallest, SMALLEST_BINS)] += 1;
            if (0..3).any(|i| dot_at(p[(i + 2) % 3], p[i], p[(i + 1) % 3]).is_zero()) {
                report.right_triangles += 1;
            }
        }
        report.triangles += tris.len();
        report.instances.push(InstanceStat {
            instance_uid: sol.instance_uid.clone(),
            input_points: inst.points.len(),
            steiner_points: sol.steiner_points.len(),
            triangles: tris.len(),
        });
    }
    report.right_fraction = report.right_triangles as f64 / report.triangles as f64;
    Ok(report)
}

impl StatsReport {
    /// Histogram table: one row per degree with both counts.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,largest_angle,smallest_angle\n");
        for d in 0..LARGEST_BINS {
            let small = self.smallest_angle.get(d).map_or(String::new(), |c| c.to_string());
            out.push_str(&format!("{d},{},{small}\n", self.largest_angle[d]));
        }
        out
    }
}
