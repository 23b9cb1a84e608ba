//! Instance and solution files, the exact verifier, SVG output and
//! solution statistics.

mod stats;
mod svg;
mod verify;

pub use stats::{stats, InstanceStat, StatsReport};
pub use svg::render_svg;
pub use verify::{solution_triangles, verify, VerifyReport, Violation, ViolationCode};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::cdt::{Cdt, Instance};
use crate::geom::rational::{format_rational, from_int, parse_rational};
use crate::{Error, Point, Result};

pub const SOLUTION_CONTENT_TYPE: &str = "CG_SHOP_2025_Solution";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub instance_uid: String,
    pub steiner_points: Vec<Point>,
    /// Index pairs over the instance points followed by the Steiner points.
    pub edges: Vec<(usize, usize)>,
}

impl Solution {
    /// Steiner points in vertex-id order; edges sorted.
    pub fn from_cdt(inst: &Instance, cdt: &Cdt) -> Solution {
        let n = inst.points.len();
        let steiner = cdt.steiner_vertices();
        let mut index = vec![usize::MAX; cdt.vertex_ids().max().map_or(0, |v| v + 1)];
        for (v, slot) in index.iter_mut().enumerate().take(n) {
            *slot = v;
        }
        for (k, &v) in steiner.iter().enumerate() {
            index[v] = n + k;
        }
        let mut edges: Vec<(usize, usize)> = cdt
            .edges()
            .into_iter()
            .map(|(a, b)| {
                let (x, y) = (index[a], index[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        Solution {
            instance_uid: inst.uid.clone(),
            steiner_points: steiner.iter().map(|&v| cdt.point(v).clone()).collect(),
            edges,
        }
    }

    pub fn steiner_count(&self) -> usize {
        self.steiner_points.len()
    }
}

fn schema(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), msg: msg.into() }
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| schema(name, "missing field"))
}

fn array<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Vec<Value>> {
    field(obj, name)?.as_array().ok_or_else(|| schema(name, "expected an array"))
}

fn integers(obj: &Map<String, Value>, name: &str) -> Result<Vec<i64>> {
    array(obj, name)?
        .iter()
        .enumerate()
        .map(|(i, v)| v.as_i64().ok_or_else(|| schema(format!("{name}[{i}]"), "expected an integer")))
        .collect()
}

fn indices(obj: &Map<String, Value>, name: &str) -> Result<Vec<usize>> {
    array(obj, name)?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| schema(format!("{name}[{i}]"), "expected a non-negative integer"))
        })
        .collect()
}

fn pairs(obj: &Map<String, Value>, name: &str) -> Result<Vec<(usize, usize)>> {
    array(obj, name)?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let bad = || schema(format!("{name}[{i}]"), "expected a pair of indices");
            let pair = v.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let a = pair[0].as_u64().ok_or_else(bad)? as usize;
            let b = pair[1].as_u64().ok_or_else(bad)? as usize;
            Ok((a, b))
        })
        .collect()
}

fn object(bytes: &[u8]) -> Result<Map<String, Value>> {
    match serde_json::from_slice::<Value>(bytes)? {
        Value::Object(m) => Ok(m),
        _ => Err(schema("$", "expected an object")),
    }
}

pub fn parse_instance(bytes: &[u8]) -> Result<Instance> {
    let obj = object(bytes)?;
    let uid = field(&obj, "instance_uid")?.as_str().ok_or_else(|| schema("instance_uid", "expected a string"))?;
    let xs = integers(&obj, "points_x")?;
    let ys = integers(&obj, "points_y")?;
    if xs.len() != ys.len() {
        return Err(schema("points_y", format!("length {} differs from points_x ({})", ys.len(), xs.len())));
    }
    if let Some(n) = obj.get("num_points") {
        if n.as_u64() != Some(xs.len() as u64) {
            return Err(schema("num_points", format!("does not match the {} points given", xs.len())));
        }
    }
    let boundary = indices(&obj, "region_boundary")?;
    let constraints =
        if obj.contains_key("additional_constraints") { pairs(&obj, "additional_constraints")? } else { Vec::new() };
    if let Some(n) = obj.get("num_constraints") {
        if n.as_u64() != Some(constraints.len() as u64) {
            return Err(schema(
                "num_constraints",
                format!("does not match the {} constraints given", constraints.len()),
            ));
        }
    }
    let points = xs.into_iter().zip(ys).map(|(x, y)| Point::new(from_int(x), from_int(y))).collect();
    Instance::new(uid, points, boundary, constraints)
}

#[derive(Serialize)]
struct InstanceOut<'a> {
    instance_uid: &'a str,
    num_points: usize,
    points_x: Vec<i64>,
    points_y: Vec<i64>,
    region_boundary: &'a [usize],
    num_constraints: usize,
    additional_constraints: Vec<[usize; 2]>,
}

/// Writes an instance with integer coordinates.
pub fn write_instance(inst: &Instance) -> Result<String> {
    let int = |r: &crate::Rational, axis: &str| -> Result<i64> {
        if !r.is_integer() {
            return Err(schema(axis, "instance coordinates must be integers"));
        }
        i64::try_from(r.to_integer()).map_err(|_| schema(axis, "coordinate out of range"))
    };
    let out = InstanceOut {
        instance_uid: &inst.uid,
        num_points: inst.points.len(),
        points_x: inst.points.iter().map(|p| int(&p.x, "points_x")).collect::<Result<_>>()?,
        points_y: inst.points.iter().map(|p| int(&p.y, "points_y")).collect::<Result<_>>()?,
        region_boundary: &inst.boundary,
        num_constraints: inst.constraints.len(),
        additional_constraints: inst.constraints.iter().map(|&(a, b)| [a, b]).collect(),
    };
    Ok(serde_json::to_string_pretty(&out)?)
}

#[derive(Serialize, Deserialize)]
struct SolutionOut {
    content_type: String,
    instance_uid: String,
    steiner_points_x: Vec<String>,
    steiner_points_y: Vec<String>,
    edges: Vec<[usize; 2]>,
}

pub fn write_solution(sol: &Solution) -> Result<String> {
    let out = SolutionOut {
        content_type: SOLUTION_CONTENT_TYPE.into(),
        instance_uid: sol.instance_uid.clone(),
        steiner_points_x: sol.steiner_points.iter().map(|p| format_rational(&p.x)).collect(),
        steiner_points_y: sol.steiner_points.iter().map(|p| format_rational(&p.y)).collect(),
        edges: sol.edges.iter().map(|&(a, b)| [a, b]).collect(),
    };
    Ok(serde_json::to_string_pretty(&out)? + "\n")
}

fn coordinates(obj: &Map<String, Value>, name: &str) -> Result<Vec<crate::Rational>> {
    array(obj, name)?
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            Value::String(s) => Ok(parse_rational(s)?),
            Value::Number(n) if n.is_i64() => Ok(from_int(n.as_i64().expect("checked"))),
            _ => Err(schema(format!("{name}[{i}]"), "expected a rational string or an integer")),
        })
        .collect()
}

pub fn parse_solution(bytes: &[u8]) -> Result<Solution> {
    let obj = object(bytes)?;
    if let Some(ct) = obj.get("content_type") {
        if ct.as_str() != Some(SOLUTION_CONTENT_TYPE) {
            return Err(schema("content_type", format!("expected {SOLUTION_CONTENT_TYPE:?}")));
        }
    }
    let uid = field(&obj, "instance_uid")?.as_str().ok_or_else(|| schema("instance_uid", "expected a string"))?;
    let xs = coordinates(&obj, "steiner_points_x")?;
    let ys = coordinates(&obj, "steiner_points_y")?;
    if xs.len() != ys.len() {
        return Err(schema("steiner_points_y", "length differs from steiner_points_x"));
    }
    Ok(Solution {
        instance_uid: uid.to_string(),
        steiner_points: xs.into_iter().zip(ys).map(|(x, y)| Point::new(x, y)).collect(),
        edges: pairs(&obj, "edges")?,
    })
}
