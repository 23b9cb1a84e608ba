//! Constrained Delaunay triangulation with Steiner-point bookkeeping.
//!
//! Triangles are stored counterclockwise in a slot vector; adjacency comes
//! from a map of directed edges to their owning triangle. Insertion is
//! cavity based (Bowyer-Watson restricted by constrained edges), removal
//! refills the star of the removed vertex with a polygon CDT.

mod instance;
mod polygon;

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::geom::{self, filter, CirclePosition, Orientation, PolygonLocation, TriangleClass};
use crate::{Error, Point, Rational, Result};

pub use instance::Instance;
pub(crate) use polygon::triangulate_polygon;

pub type VertexId = usize;
pub type TriId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Input,
    Steiner,
    /// Temporary enclosing vertex used during construction.
    Super,
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub pos: Point,
    pub approx: [f64; 2],
    pub origin: Origin,
    alive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    /// Counterclockwise vertex ids.
    pub v: [VertexId; 3],
    pub class: TriangleClass,
}

impl Triangle {
    pub fn is_obtuse(&self) -> bool {
        self.class.is_obtuse()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.v.contains(&v)
    }

    /// The edge opposite corner `i`, in counterclockwise direction.
    pub fn edge(&self, i: usize) -> (VertexId, VertexId) {
        (self.v[(i + 1) % 3], self.v[(i + 2) % 3])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Vertex(VertexId),
    /// On the open edge between the two vertices.
    Edge(VertexId, VertexId),
    Triangle(TriId),
}

/// Unordered edge key.
pub fn edge_key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Debug)]
pub struct Cdt {
    vertices: Vec<Vertex>,
    triangles: Vec<Option<Triangle>>,
    free: Vec<TriId>,
    owner: HashMap<(VertexId, VertexId), TriId>,
    constrained: HashSet<(VertexId, VertexId)>,
    hint: Vec<TriId>,
    region: Arc<Vec<Point>>,
    input_count: usize,
    steiner_count: usize,
    live_triangles: usize,
}

impl Cdt {
    /// Constrained Delaunay triangulation of the instance, without Steiner
    /// points. Vertex ids `0..n` are the instance's point indices.
    pub fn build(inst: &Instance) -> Result<Cdt> {
        inst.validate()?;
        let n = inst.points.len();
        let mut cdt = Cdt {
            vertices: Vec::with_capacity(n + 3),
            triangles: Vec::new(),
            free: Vec::new(),
            owner: HashMap::new(),
            constrained: HashSet::new(),
            hint: Vec::new(),
            region: Arc::new(inst.boundary_polygon()),
            input_count: n,
            steiner_count: 0,
            live_triangles: 0,
        };
        for p in &inst.points {
            cdt.push_vertex(p.clone(), Origin::Input);
        }

        // Enclosing triangle, far enough to contain every input point.
        let mut lo = inst.points[0].clone();
        let mut hi = inst.points[0].clone();
        for p in &inst.points {
            if p.x < lo.x {
                lo.x = p.x.clone();
            }
            if p.y < lo.y {
                lo.y = p.y.clone();
            }
            if p.x > hi.x {
                hi.x = p.x.clone();
            }
            if p.y > hi.y {
                hi.y = p.y.clone();
            }
        }
        let center = lo.midpoint(&hi);
        let w = &hi.x - &lo.x;
        let h = &hi.y - &lo.y;
        let m = (if w > h { w } else { h }) + Rational::one();
        let k = |v: i64| Rational::from_integer(v.into()) * &m;
        let s0 = cdt.push_vertex(Point::new(&center.x - k(30), &center.y - k(10)), Origin::Super);
        let s1 = cdt.push_vertex(Point::new(&center.x + k(30), &center.y - k(10)), Origin::Super);
        let s2 = cdt.push_vertex(Point::new(center.x.clone(), &center.y + k(30)), Origin::Super);
        cdt.add_triangle([s0, s1, s2])?;

        for v in 0..n {
            let p = cdt.vertices[v].pos.clone();
            let approx = cdt.vertices[v].approx;
            let loc = cdt.locate_with(&p, approx)?;
            let (cavity, split) = cdt.cavity(&p, approx, loc)?;
            cdt.fill_cavity(v, &cavity, split)?;
        }

        for (a, b) in inst.constraint_segments() {
            cdt.insert_constraint(a, b)?;
        }

        // Drop everything reachable from the enclosing vertices without
        // crossing a constraint: that is exactly the outside of the region.
        let mut outside: HashSet<TriId> = HashSet::new();
        let mut queue: VecDeque<TriId> = VecDeque::new();
        for t in cdt.triangle_ids().collect::<Vec<_>>() {
            if cdt.tri(t).v.iter().any(|&v| cdt.vertices[v].origin == Origin::Super) && outside.insert(t) {
                queue.push_back(t);
            }
        }
        while let Some(t) = queue.pop_front() {
            let tri = cdt.tri(t).clone();
            for i in 0..3 {
                let (a, b) = tri.edge(i);
                if cdt.is_constrained(a, b) {
                    continue;
                }
                if let Some(&nb) = cdt.owner.get(&(b, a)) {
                    if outside.insert(nb) {
                        queue.push_back(nb);
                    }
                }
            }
        }
        let mut doomed: Vec<TriId> = outside.into_iter().collect();
        doomed.sort_unstable();
        for t in doomed {
            cdt.remove_triangle(t);
        }
        for s in [s0, s1, s2] {
            cdt.vertices[s].alive = false;
        }
        Ok(cdt)
    }

    /// Builds the CDT and inserts the given Steiner points. Points that fall
    /// outside the region or on existing vertices are skipped and returned.
    pub fn with_steiner_points(inst: &Instance, points: &[Point]) -> Result<(Cdt, Vec<Point>)> {
        let mut cdt = Cdt::build(inst)?;
        let mut skipped = Vec::new();
        for p in points {
            match cdt.insert_point(p.clone()) {
                Ok(_) => {}
                Err(Error::OutsideRegion) | Err(Error::DuplicateVertex) => skipped.push(p.clone()),
                Err(e) => return Err(e),
            }
        }
        Ok((cdt, skipped))
    }

    // ----- accessors -------------------------------------------------------

    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn steiner_count(&self) -> usize {
        self.steiner_count
    }

    pub fn triangle_count(&self) -> usize {
        self.live_triangles
    }

    pub fn region(&self) -> &[Point] {
        &self.region
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v]
    }

    pub fn point(&self, v: VertexId) -> &Point {
        &self.vertices[v].pos
    }

    pub fn approx(&self, v: VertexId) -> [f64; 2] {
        self.vertices[v].approx
    }

    pub fn is_alive(&self, v: VertexId) -> bool {
        v < self.vertices.len() && self.vertices[v].alive
    }

    pub fn is_steiner(&self, v: VertexId) -> bool {
        self.is_alive(v) && self.vertices[v].origin == Origin::Steiner
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).filter(move |&v| self.vertices[v].alive)
    }

    /// Steiner vertices in id order.
    pub fn steiner_vertices(&self) -> Vec<VertexId> {
        self.vertex_ids().filter(|&v| self.vertices[v].origin == Origin::Steiner).collect()
    }

    pub fn steiner_points(&self) -> Vec<Point> {
        self.steiner_vertices().into_iter().map(|v| self.point(v).clone()).collect()
    }

    pub fn triangle_ids(&self) -> impl DoubleEndedIterator<Item = TriId> + '_ {
        self.triangles.iter().enumerate().filter_map(|(i, t)| t.as_ref().map(|_| i))
    }

    pub fn triangle(&self, t: TriId) -> Option<&Triangle> {
        self.triangles.get(t).and_then(|t| t.as_ref())
    }

    fn tri(&self, t: TriId) -> &Triangle {
        self.triangles[t].as_ref().expect("live triangle")
    }

    pub fn tri_points(&self, t: TriId) -> [&Point; 3] {
        let v = self.tri(t).v;
        [self.point(v[0]), self.point(v[1]), self.point(v[2])]
    }

    pub fn is_constrained(&self, a: VertexId, b: VertexId) -> bool {
        self.constrained.contains(&edge_key(a, b))
    }

    /// Constrained edges, sorted.
    pub fn constrained_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut v: Vec<_> = self.constrained.iter().copied().collect();
        v.sort_unstable();
        v
    }

    /// Constrained edges in arbitrary order.
    pub fn constrained_iter(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.constrained.iter().copied()
    }

    /// Triangle owning the directed edge `a -> b`.
    pub fn edge_owner(&self, a: VertexId, b: VertexId) -> Option<TriId> {
        self.owner.get(&(a, b)).copied()
    }

    /// Triangle across edge `i` (opposite corner `i`) of `t`.
    pub fn neighbor(&self, t: TriId, i: usize) -> Option<TriId> {
        let (a, b) = self.tri(t).edge(i);
        self.edge_owner(b, a)
    }

    /// Undirected triangulation edges, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut v: Vec<_> = self
            .owner
            .keys()
            .filter(|&&(a, b)| a < b || !self.owner.contains_key(&(b, a)))
            .map(|&(a, b)| edge_key(a, b))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Obtuse triangles in id order.
    pub fn obtuse_triangles(&self) -> Vec<TriId> {
        self.triangle_ids().filter(|&t| self.tri(t).is_obtuse()).collect()
    }

    pub fn obtuse_count(&self) -> usize {
        self.triangles.iter().flatten().filter(|t| t.is_obtuse()).count()
    }

    /// Longest side of a triangle as an unordered pair.
    pub fn longest_side(&self, t: TriId) -> (VertexId, VertexId) {
        let tri = self.tri(t);
        let mut best = 0;
        let mut best_len: Option<Rational> = None;
        for i in 0..3 {
            let (a, b) = tri.edge(i);
            let len = self.point(a).dist2(self.point(b));
            if best_len.as_ref().is_none_or(|l| &len > l) {
                best_len = Some(len);
                best = i;
            }
        }
        let (a, b) = tri.edge(best);
        edge_key(a, b)
    }

    /// Floating-point circumcircle `(center, radius^2)` of a triangle.
    pub fn circumcircle_f64(&self, t: TriId) -> ([f64; 2], f64) {
        let v = self.tri(t).v;
        circumcircle_f64(self.approx(v[0]), self.approx(v[1]), self.approx(v[2]))
    }

    /// Triangles around `v` in counterclockwise order. For a vertex on the
    /// region boundary the list starts at the boundary.
    pub fn star(&self, v: VertexId) -> Vec<TriId> {
        let Some(start) = self.incident_triangle(v) else {
            return Vec::new();
        };
        let mut out = vec![start];
        let mut cur = start;
        loop {
            let tri = self.tri(cur);
            let i = tri.v.iter().position(|&x| x == v).expect("incident");
            let y = tri.v[(i + 2) % 3];
            match self.edge_owner(v, y) {
                Some(next) if next == start => return out,
                Some(next) => {
                    out.push(next);
                    cur = next;
                }
                None => break,
            }
        }
        // open star: walk clockwise from the start to find the first triangle
        let mut front = Vec::new();
        cur = start;
        loop {
            let tri = self.tri(cur);
            let i = tri.v.iter().position(|&x| x == v).expect("incident");
            let x = tri.v[(i + 1) % 3];
            match self.edge_owner(x, v) {
                Some(prev) => {
                    front.push(prev);
                    cur = prev;
                }
                None => break,
            }
        }
        front.reverse();
        front.extend(out);
        front
    }

    /// Neighbouring vertices of `v`.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = Vec::new();
        for t in self.star(v) {
            for &x in &self.tri(t).v {
                if x != v && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    fn incident_triangle(&self, v: VertexId) -> Option<TriId> {
        if !self.is_alive(v) {
            return None;
        }
        let h = self.hint[v];
        if self.triangle(h).is_some_and(|t| t.contains(v)) {
            return Some(h);
        }
        self.triangle_ids().find(|&t| self.tri(t).contains(v))
    }

    /// Hash of the triangles around the given vertices, used to detect stale
    /// actions.
    pub fn local_fingerprint(&self, vs: &[VertexId]) -> u64 {
        let mut h = DefaultHasher::new();
        for &v in vs {
            v.hash(&mut h);
            self.is_alive(v).hash(&mut h);
            if !self.is_alive(v) {
                continue;
            }
            self.point(v).hash(&mut h);
            let mut tris: Vec<[VertexId; 3]> = self.star(v).into_iter().map(|t| self.tri(t).v).collect();
            tris.sort_unstable();
            tris.hash(&mut h);
        }
        h.finish()
    }

    // ----- predicates ------------------------------------------------------

    fn orient_pt(&self, a: VertexId, b: VertexId, p: &Point, pa: [f64; 2]) -> Orientation {
        filter::orientation(self.approx(a), self.approx(b), pa)
            .unwrap_or_else(|| geom::orientation(self.point(a), self.point(b), p))
    }

    /// Exact position of `p` relative to the circumcircle of `t`.
    pub fn in_circumcircle(&self, t: TriId, p: &Point, pa: [f64; 2]) -> CirclePosition {
        let v = self.tri(t).v;
        filter::in_circle_ccw(self.approx(v[0]), self.approx(v[1]), self.approx(v[2]), pa).unwrap_or_else(|| {
            geom::in_circle(self.point(v[0]), self.point(v[1]), self.point(v[2]), p)
                .expect("live triangles are never degenerate")
        })
    }

    /// Exact location of `p` in the region boundary polygon.
    pub fn region_location(&self, p: &Point) -> PolygonLocation {
        geom::locate_in_polygon(&self.region, p)
    }

    // ----- point location ---------------------------------------------------

    pub fn locate(&self, p: &Point) -> Result<Location> {
        self.locate_with(p, p.to_f64())
    }

    fn locate_with(&self, p: &Point, pa: [f64; 2]) -> Result<Location> {
        let start = self.triangle_ids().next_back().ok_or(Error::OutsideRegion)?;
        // straight walk toward p; falls back to a scan when it leaves the
        // triangulation (non-convex regions) or runs too long
        let mut cur = start;
        let limit = self.live_triangles + 8;
        for step in 0..limit {
            let tri = self.tri(cur);
            let mut next = None;
            for k in 0..3 {
                let i = (k + step) % 3;
                let (a, b) = tri.edge(i);
                if self.orient_pt(a, b, p, pa) == Orientation::Clockwise {
                    next = Some(self.edge_owner(b, a));
                    break;
                }
            }
            match next {
                None => return Ok(self.classify_in(cur, p, pa)),
                Some(Some(nb)) => cur = nb,
                Some(None) => break,
            }
        }
        for t in self.triangle_ids() {
            let tri = self.tri(t);
            if (0..3).all(|i| {
                let (a, b) = tri.edge(i);
                self.orient_pt(a, b, p, pa) != Orientation::Clockwise
            }) {
                return Ok(self.classify_in(t, p, pa));
            }
        }
        Err(Error::OutsideRegion)
    }

    fn classify_in(&self, t: TriId, p: &Point, pa: [f64; 2]) -> Location {
        let tri = self.tri(t);
        for &v in &tri.v {
            if self.point(v) == p {
                return Location::Vertex(v);
            }
        }
        for i in 0..3 {
            let (a, b) = tri.edge(i);
            if self.orient_pt(a, b, p, pa) == Orientation::Collinear {
                return Location::Edge(a, b);
            }
        }
        Location::Triangle(t)
    }

    // ----- mutation --------------------------------------------------------

    fn push_vertex(&mut self, pos: Point, origin: Origin) -> VertexId {
        let approx = pos.to_f64();
        self.vertices.push(Vertex { pos, approx, origin, alive: true });
        self.hint.push(0);
        if origin == Origin::Steiner {
            self.steiner_count += 1;
        }
        self.vertices.len() - 1
    }

    fn add_triangle(&mut self, v: [VertexId; 3]) -> Result<TriId> {
        let pts = [self.point(v[0]), self.point(v[1]), self.point(v[2])];
        if geom::orientation(pts[0], pts[1], pts[2]) != Orientation::CounterClockwise {
            return Err(Error::Cavity);
        }
        let class = geom::triangle_class(pts)?;
        let tri = Triangle { v, class };
        let id = match self.free.pop() {
            Some(id) => {
                self.triangles[id] = Some(tri);
                id
            }
            None => {
                self.triangles.push(Some(tri));
                self.triangles.len() - 1
            }
        };
        for i in 0..3 {
            self.owner.insert((v[i], v[(i + 1) % 3]), id);
            self.hint[v[i]] = id;
        }
        self.live_triangles += 1;
        Ok(id)
    }

    fn remove_triangle(&mut self, t: TriId) {
        if let Some(tri) = self.triangles[t].take() {
            for i in 0..3 {
                let key = (tri.v[i], tri.v[(i + 1) % 3]);
                if self.owner.get(&key) == Some(&t) {
                    self.owner.remove(&key);
                }
            }
            self.free.push(t);
            self.live_triangles -= 1;
        }
    }

    /// Triangles an insertion of `p` would replace: the conflict region
    /// grown from the containing triangle(s) across unconstrained edges.
    pub fn conflict_region(&self, p: &Point) -> Result<Vec<TriId>> {
        let pa = p.to_f64();
        let loc = self.locate_with(p, pa)?;
        let (mut cavity, _) = self.cavity(p, pa, loc)?;
        cavity.sort_unstable();
        Ok(cavity)
    }

    #[allow(clippy::type_complexity)]
    fn cavity(&self, p: &Point, pa: [f64; 2], loc: Location) -> Result<(Vec<TriId>, Option<(VertexId, VertexId)>)> {
        let mut split = None;
        let seeds: Vec<TriId> = match loc {
            Location::Vertex(_) => return Err(Error::DuplicateVertex),
            Location::Triangle(t) => vec![t],
            Location::Edge(a, b) => {
                if self.is_constrained(a, b) {
                    split = Some((a, b));
                }
                [self.edge_owner(a, b), self.edge_owner(b, a)].into_iter().flatten().collect()
            }
        };
        let mut in_cavity: HashSet<TriId> = seeds.iter().copied().collect();
        let mut order = seeds.clone();
        let mut queue: VecDeque<TriId> = seeds.into_iter().collect();
        while let Some(t) = queue.pop_front() {
            let tri = self.tri(t).clone();
            for i in 0..3 {
                let (a, b) = tri.edge(i);
                if self.is_constrained(a, b) {
                    continue;
                }
                let Some(nb) = self.edge_owner(b, a) else { continue };
                if in_cavity.contains(&nb) {
                    continue;
                }
                if self.in_circumcircle(nb, p, pa) == CirclePosition::Inside {
                    in_cavity.insert(nb);
                    order.push(nb);
                    queue.push_back(nb);
                }
            }
        }
        Ok((order, split))
    }

    fn fill_cavity(&mut self, v: VertexId, cavity: &[TriId], split: Option<(VertexId, VertexId)>) -> Result<()> {
        let set: HashSet<TriId> = cavity.iter().copied().collect();
        let p = self.point(v).clone();
        let pa = self.approx(v);
        let mut fan: Vec<(VertexId, VertexId)> = Vec::new();
        for &t in cavity {
            let tri = self.tri(t);
            for i in 0..3 {
                let (a, b) = tri.edge(i);
                if self.edge_owner(b, a).is_some_and(|nb| set.contains(&nb)) {
                    continue;
                }
                if split.is_some_and(|(x, y)| edge_key(x, y) == edge_key(a, b)) {
                    continue;
                }
                if self.orient_pt(a, b, &p, pa) != Orientation::CounterClockwise {
                    return Err(Error::Cavity);
                }
                fan.push((a, b));
            }
        }
        for &t in cavity {
            self.remove_triangle(t);
        }
        for (a, b) in fan {
            self.add_triangle([a, b, v])?;
        }
        if let Some((a, b)) = split {
            self.constrained.remove(&edge_key(a, b));
            self.constrained.insert(edge_key(a, v));
            self.constrained.insert(edge_key(v, b));
        }
        Ok(())
    }

    /// Inserts a Steiner point. A point on a constrained edge splits it.
    pub fn insert_point(&mut self, p: Point) -> Result<VertexId> {
        if self.region_location(&p) == PolygonLocation::Outside {
            return Err(Error::OutsideRegion);
        }
        let pa = p.to_f64();
        let loc = self.locate_with(&p, pa)?;
        let (cavity, split) = self.cavity(&p, pa, loc)?;
        let v = self.push_vertex(p, Origin::Steiner);
        // fill_cavity checks the fan before touching anything
        if let Err(e) = self.fill_cavity(v, &cavity, split) {
            self.vertices.pop();
            self.hint.pop();
            self.steiner_count -= 1;
            return Err(e);
        }
        Ok(v)
    }

    /// Removes a Steiner vertex and refills its star. A vertex splitting a
    /// constrained edge into two collinear pieces re-merges them.
    pub fn remove_point(&mut self, v: VertexId) -> Result<()> {
        if !self.is_alive(v) {
            return Err(Error::UnknownVertex(v));
        }
        if self.vertices[v].origin != Origin::Steiner {
            return Err(Error::InputVertex(v));
        }
        let star = self.star(v);
        let neighbors = self.neighbors(v);
        let cons: Vec<VertexId> = neighbors.iter().copied().filter(|&n| self.is_constrained(v, n)).collect();
        let merge = match cons.as_slice() {
            [] => None,
            &[a, b] if geom::on_open_segment(self.point(a), self.point(b), self.point(v)) => Some((a, b)),
            _ => return Err(Error::RemovalBlocked(v)),
        };

        let first = self.tri(star[0]);
        let i0 = first.v.iter().position(|&x| x == v).expect("incident");
        let closed = {
            let x0 = first.v[(i0 + 1) % 3];
            self.edge_owner(x0, v).is_some()
        };
        let mut link: Vec<VertexId> = Vec::with_capacity(star.len() + 1);
        for &t in &star {
            let tri = self.tri(t);
            let i = tri.v.iter().position(|&x| x == v).expect("incident");
            link.push(tri.v[(i + 1) % 3]);
        }
        if !closed {
            let last = self.tri(*star.last().expect("nonempty star"));
            let i = last.v.iter().position(|&x| x == v).expect("incident");
            link.push(last.v[(i + 2) % 3]);
        }

        let polygons: Vec<Vec<VertexId>> = match (closed, merge) {
            (true, None) => vec![link],
            (true, Some((a, b))) => {
                let ia = link.iter().position(|&x| x == a).ok_or(Error::RemovalBlocked(v))?;
                let ib = link.iter().position(|&x| x == b).ok_or(Error::RemovalBlocked(v))?;
                let n = link.len();
                let arc = |from: usize, to: usize| -> Vec<VertexId> {
                    let mut out = vec![link[from]];
                    let mut k = from;
                    while k != to {
                        k = (k + 1) % n;
                        out.push(link[k]);
                    }
                    out
                };
                vec![arc(ia, ib), arc(ib, ia)]
            }
            (false, Some((a, b))) => {
                let ends = edge_key(link[0], *link.last().expect("nonempty"));
                if ends != edge_key(a, b) {
                    return Err(Error::RemovalBlocked(v));
                }
                vec![link]
            }
            (false, None) => return Err(Error::RemovalBlocked(v)),
        };

        let mut fill = Vec::new();
        for poly in &polygons {
            let tris = triangulate_polygon(poly, |i| &self.vertices[i].pos)?;
            fill.extend(tris);
        }
        for &t in &star {
            self.remove_triangle(t);
        }
        self.vertices[v].alive = false;
        self.steiner_count -= 1;
        for n in cons {
            self.constrained.remove(&edge_key(v, n));
        }
        if let Some((a, b)) = merge {
            self.constrained.insert(edge_key(a, b));
        }
        for t in fill {
            self.add_triangle(t)?;
        }
        Ok(())
    }

    fn insert_constraint(&mut self, a: VertexId, b: VertexId) -> Result<()> {
        if a == b {
            return Ok(());
        }
        let (pa, pb) = (self.point(a).clone(), self.point(b).clone());
        // split at vertices lying on the segment
        let on: Option<VertexId> = self
            .vertex_ids()
            .filter(|&v| v != a && v != b && geom::on_open_segment(&pa, &pb, self.point(v)))
            .min_by(|&u, &w| {
                pa.dist2(self.point(u)).partial_cmp(&pa.dist2(self.point(w))).expect("rationals are totally ordered")
            });
        if let Some(v) = on {
            self.insert_constraint(a, v)?;
            return self.insert_constraint(v, b);
        }
        if self.edge_owner(a, b).is_some() || self.edge_owner(b, a).is_some() {
            self.constrained.insert(edge_key(a, b));
            return Ok(());
        }
        let pba = self.approx(b);
        let mut start = None;
        for t in self.star(a) {
            let tri = self.tri(t);
            let i = tri.v.iter().position(|&x| x == a).expect("incident");
            let (u, w) = (tri.v[(i + 1) % 3], tri.v[(i + 2) % 3]);
            if self.orient_pt(a, u, &pb, pba) == Orientation::CounterClockwise
                && self.orient_pt(a, w, &pb, pba) == Orientation::Clockwise
            {
                start = Some((t, u, w));
                break;
            }
        }
        let (t0, mut r, mut l) = start.ok_or(Error::CrossingConstraints)?;
        let mut crossed = vec![t0];
        let mut left = vec![l];
        let mut right = vec![r];
        loop {
            if self.is_constrained(r, l) {
                return Err(Error::CrossingConstraints);
            }
            let nt = self.edge_owner(l, r).ok_or(Error::CrossingConstraints)?;
            crossed.push(nt);
            let x = *self.tri(nt).v.iter().find(|&&x| x != l && x != r).expect("third vertex");
            if x == b {
                break;
            }
            let px = self.point(x).clone();
            match geom::orientation(&pa, &pb, &px) {
                Orientation::CounterClockwise => {
                    left.push(x);
                    l = x;
                }
                Orientation::Clockwise => {
                    right.push(x);
                    r = x;
                }
                Orientation::Collinear => return Err(Error::CrossingConstraints),
            }
        }
        let mut upper = vec![a, b];
        upper.extend(left.iter().rev());
        let mut lower = vec![b, a];
        lower.extend(right.iter());
        let mut fill = triangulate_polygon(&upper, |i| &self.vertices[i].pos)?;
        fill.extend(triangulate_polygon(&lower, |i| &self.vertices[i].pos)?);
        for t in crossed {
            self.remove_triangle(t);
        }
        for t in fill {
            self.add_triangle(t)?;
        }
        self.constrained.insert(edge_key(a, b));
        Ok(())
    }

    // ----- validation --------------------------------------------------------

    /// Checks the structural and Delaunay invariants. Intended for tests and
    /// debugging; cost is quadratic in places.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let mut area = Rational::zero();
        for t in self.triangle_ids() {
            let tri = self.tri(t);
            let [a, b, c] = self.tri_points(t);
            if geom::orientation(a, b, c) != Orientation::CounterClockwise {
                return Err(format!("triangle {t} is not counterclockwise"));
            }
            if geom::triangle_class([a, b, c]).map_err(|e| e.to_string())? != tri.class {
                return Err(format!("triangle {t} has a stale class"));
            }
            area += geom::cross(a, b, c);
            for i in 0..3 {
                let (x, y) = tri.edge(i);
                if self.edge_owner(x, y) != Some(t) {
                    return Err(format!("edge ({x}, {y}) of triangle {t} not owned"));
                }
                if !self.is_alive(x) {
                    return Err(format!("triangle {t} uses dead vertex {x}"));
                }
                match self.edge_owner(y, x) {
                    None if !self.is_constrained(x, y) => {
                        return Err(format!("unconstrained boundary edge ({x}, {y})"));
                    }
                    Some(nb) if !self.is_constrained(x, y) => {
                        let opp = *self.tri(nb).v.iter().find(|&&z| z != x && z != y).expect("third");
                        let p = self.point(opp);
                        if self.in_circumcircle(t, p, self.approx(opp)) == CirclePosition::Inside {
                            return Err(format!("edge ({x}, {y}) is not locally Delaunay"));
                        }
                    }
                    _ => {}
                }
            }
        }
        if area != geom::polygon_area2(&self.region) {
            return Err("triangles do not tile the region".into());
        }
        for &(a, b) in &self.constrained {
            if self.edge_owner(a, b).is_none() && self.edge_owner(b, a).is_none() {
                return Err(format!("constrained edge ({a}, {b}) missing"));
            }
        }
        let vcount = self.vertex_ids().count();
        let ecount = self.edges().len();
        if vcount + self.live_triangles != ecount + 1 {
            return Err(format!("Euler: V={vcount} E={ecount} F={}", self.live_triangles));
        }
        let steiner = self.vertex_ids().filter(|&v| self.vertices[v].origin == Origin::Steiner).count();
        if steiner != self.steiner_count {
            return Err("steiner count out of sync".into());
        }
        Ok(())
    }

    /// Triangle vertex triples as a sorted list, for structural comparisons.
    pub fn canonical_triangles(&self) -> Vec<[Point; 3]> {
        let mut out: Vec<[Point; 3]> = self
            .triangle_ids()
            .map(|t| {
                let v = self.tri(t).v;
                let mut pts = [self.point(v[0]).clone(), self.point(v[1]).clone(), self.point(v[2]).clone()];
                // rotate so the smallest point comes first, keeping orientation
                let m = (0..3).min_by(|&i, &j| pts[i].cmp(&pts[j])).expect("three");
                pts.rotate_left(m);
                pts
            })
            .collect();
        out.sort();
        out
    }
}

pub fn circumcircle_f64(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> ([f64; 2], f64) {
    let (bx, by) = (b[0] - a[0], b[1] - a[1]);
    let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    ([a[0] + ux, a[1] + uy], ux * ux + uy * uy)
}

#[cfg(test)]
mod tests;
