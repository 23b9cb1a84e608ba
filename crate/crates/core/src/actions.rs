//! Candidate actions on a CDT: insertions at altitude feet, Voronoi points
//! and arrangement-cell centers, relocation of a Steiner point, and merging
//! two adjacent Steiner points into one.

use std::collections::BTreeSet;
use std::fmt;

use crate::cdt::{Cdt, TriId, VertexId};
use crate::geom::{self, PolygonLocation};
use crate::primitives::{
    altitude_drop, circle_arrangement_cells, conflict_set, polygon_center_with, union_boundary, visibility_voronoi,
    voronoi_insertion_point_in, ArrangementConfig, CenterConfig, SimplePolygon,
};
use crate::{Error, Point, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionKind {
    InsertAltitude(TriId),
    InsertVoronoi(TriId),
    /// Index into the cells of the arrangement at generation time.
    InsertCellCenter(usize),
    Relocate(VertexId),
    DeleteMerge(VertexId, VertexId),
}

impl ActionKind {
    pub fn name(&self) -> &'static str {
        match self {
            ActionKind::InsertAltitude(_) => "altitude-drop",
            ActionKind::InsertVoronoi(_) => "voronoi",
            ActionKind::InsertCellCenter(_) => "cell-center",
            ActionKind::Relocate(_) => "relocate",
            ActionKind::DeleteMerge(..) => "delete-merge",
        }
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionKind::InsertAltitude(t) | ActionKind::InsertVoronoi(t) => write!(f, "{}({t})", self.name()),
            ActionKind::InsertCellCenter(c) => write!(f, "{}({c})", self.name()),
            ActionKind::Relocate(v) => write!(f, "{}({v})", self.name()),
            ActionKind::DeleteMerge(v, w) => write!(f, "{}({v},{w})", self.name()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Action {
    pub kind: ActionKind,
    pub new_point: Point,
    pub removed: Vec<VertexId>,
    watched: Vec<VertexId>,
    fingerprint: u64,
}

impl Action {
    fn new(cdt: &Cdt, kind: ActionKind, new_point: Point, removed: Vec<VertexId>, watched: Vec<VertexId>) -> Self {
        let fingerprint = cdt.local_fingerprint(&watched);
        Action { kind, new_point, removed, watched, fingerprint }
    }

    pub fn is_insertion(&self) -> bool {
        self.removed.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct ActionConfig {
    /// Only merge Steiner pairs where one endpoint touches an obtuse
    /// triangle.
    pub gate_delete_merge: bool,
    pub arrangement: ArrangementConfig,
    pub center: CenterConfig,
}

impl Default for ActionConfig {
    fn default() -> Self {
        ActionConfig {
            gate_delete_merge: true,
            arrangement: ArrangementConfig::default(),
            center: CenterConfig::default(),
        }
    }
}

pub fn generate_actions(cdt: &Cdt) -> Vec<Action> {
    generate_actions_with(cdt, &ActionConfig::default())
}

pub fn generate_actions_with(cdt: &Cdt, cfg: &ActionConfig) -> Vec<Action> {
    let obtuse = cdt.obtuse_triangles();
    if obtuse.is_empty() && cfg.gate_delete_merge {
        return Vec::new();
    }
    let mut out = Vec::new();
    let vor = visibility_voronoi(cdt);
    for &t in &obtuse {
        let tri = cdt.triangle(t).expect("live").clone();
        let (a, b) = cdt.longest_side(t);
        let watched = tri.v.to_vec();
        if cdt.is_constrained(a, b) {
            let [p, q, r] = cdt.tri_points(t);
            if let Ok(foot) = altitude_drop([p, q, r]) {
                out.push(Action::new(cdt, ActionKind::InsertAltitude(t), foot, vec![], watched));
            }
        } else if let Ok(Some(v)) = voronoi_insertion_point_in(cdt, &vor, t) {
            // the point must actually destroy `t` when inserted
            if cdt.conflict_region(&v).is_ok_and(|c| c.contains(&t)) {
                out.push(Action::new(cdt, ActionKind::InsertVoronoi(t), v, vec![], watched));
            }
        }
    }

    for (i, cell) in circle_arrangement_cells(cdt, &cfg.arrangement).into_iter().enumerate() {
        let Some(c) = polygon_center_with(&cell.polygon, &cfg.center) else { continue };
        if conflict_set(cdt, &c) != cell.conflict_set {
            continue;
        }
        // the cavity is grown through unconstrained edges only; it has to be
        // the whole cell for the fan to replace exactly the cell's triangles
        if cdt.conflict_region(&c).ok().as_ref() != Some(&cell.conflict_set) {
            continue;
        }
        out.push(Action::new(cdt, ActionKind::InsertCellCenter(i), c, vec![], cell.boundary.clone()));
    }

    let touches_obtuse = |v: VertexId| cdt.star(v).iter().any(|&t| cdt.triangle(t).is_some_and(|x| x.is_obtuse()));
    for v in cdt.steiner_vertices() {
        if !touches_obtuse(v) {
            continue;
        }
        if let Some(c) = center_after_removal(cdt, &[v], &cfg.center) {
            out.push(Action::new(cdt, ActionKind::Relocate(v), c, vec![v], vec![v]));
        }
    }

    for (v, w) in cdt.edges() {
        if !cdt.is_steiner(v) || !cdt.is_steiner(w) {
            continue;
        }
        if cfg.gate_delete_merge && !touches_obtuse(v) && !touches_obtuse(w) {
            continue;
        }
        if let Some(c) = center_after_removal(cdt, &[v, w], &cfg.center) {
            out.push(Action::new(cdt, ActionKind::DeleteMerge(v, w), c, vec![v, w], vec![v, w]));
        }
    }
    out
}

/// Polygon left by removing `removed` together with their stars, with the
/// removed vertices dropped from its boundary. Vertices splitting an
/// interior constraint are not eligible since their re-merged constraint
/// would cut through the polygon.
pub fn removal_polygon(cdt: &Cdt, removed: &[VertexId]) -> Option<SimplePolygon> {
    let mut tris: BTreeSet<TriId> = BTreeSet::new();
    for &v in removed {
        if !cdt.is_steiner(v) {
            return None;
        }
        let cons: Vec<VertexId> = cdt.neighbors(v).into_iter().filter(|&n| cdt.is_constrained(v, n)).collect();
        match cons.as_slice() {
            [] => {}
            &[a, b]
                if cdt.region_location(cdt.point(v)) == PolygonLocation::Boundary
                    && geom::on_open_segment(cdt.point(a), cdt.point(b), cdt.point(v)) => {}
            _ => return None,
        }
        tris.extend(cdt.star(v));
    }
    let tris: Vec<TriId> = tris.into_iter().collect();
    let cycle = union_boundary_allowing(cdt, &tris, removed)?;
    let pts: Vec<Point> = cycle.into_iter().filter(|v| !removed.contains(v)).map(|v| cdt.point(v).clone()).collect();
    if pts.len() < 3 {
        return None;
    }
    SimplePolygon::new(pts).ok()
}

fn union_boundary_allowing(cdt: &Cdt, tris: &[TriId], interior_ok: &[VertexId]) -> Option<Vec<VertexId>> {
    let cycle = union_boundary(cdt, tris)?;
    for &t in tris {
        for v in cdt.triangle(t)?.v {
            if !cycle.contains(&v) && !interior_ok.contains(&v) {
                return None;
            }
        }
    }
    Some(cycle)
}

fn center_after_removal(cdt: &Cdt, removed: &[VertexId], cfg: &CenterConfig) -> Option<Point> {
    let poly = removal_polygon(cdt, removed)?;
    let c = polygon_center_with(&poly, cfg)?;
    if removed.iter().any(|&v| cdt.point(v) == &c) {
        return None;
    }
    Some(c)
}

/// Applies an action to a copy of `cdt`.
pub fn apply_action(cdt: &Cdt, a: &Action) -> Result<Cdt> {
    if a.watched.iter().any(|&v| !cdt.is_alive(v)) || cdt.local_fingerprint(&a.watched) != a.fingerprint {
        return Err(Error::StaleAction);
    }
    let mut next = cdt.clone();
    for &v in &a.removed {
        next.remove_point(v)?;
    }
    next.insert_point(a.new_point.clone())?;
    Ok(next)
}
