//! Translation surfaces as polygon nets.
//!
//! A [`PolygonNet`] is a list of counter-clockwise polygons together with a
//! matching on their edges. Two glued edges are identified by the translation
//! taking one onto the other with reversed orientation. Nets produced by
//! cutting may leave some edges unglued; those are boundary edges.
//!
//! Every polygon corner belongs to exactly one corner orbit. Orbits are
//! classified by total angle, and orbits listed in `marks` are tracked as
//! marked points even when their angle is `2π`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::QuadExt;
use crate::geometry::{cross, in_sector, same_direction, segments_touch, signed_area2, Vec2};
use crate::unionfind::DisjointSets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeRef {
    pub polygon: usize,
    pub edge: usize,
}

impl EdgeRef {
    pub fn new(polygon: usize, edge: usize) -> Self {
        EdgeRef { polygon, edge }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CornerRef {
    pub polygon: usize,
    pub vertex: usize,
}

impl CornerRef {
    pub fn new(polygon: usize, vertex: usize) -> Self {
        CornerRef { polygon, vertex }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("polygon {0} has fewer than three vertices")]
    TooFewVertices(usize),
    #[error("edge {0:?} does not exist")]
    NoSuchEdge(EdgeRef),
    #[error("corner {0:?} does not exist")]
    NoSuchCorner(CornerRef),
    #[error("edge {0:?} is glued more than once")]
    GluedTwice(EdgeRef),
    #[error("coordinates mix quadratic fields")]
    FieldMismatch,
    #[error("gluing {0:?} <-> {1:?} is not a translation after the map")]
    Gluing(EdgeRef, EdgeRef),
    #[error("shear matrix must have determinant 1")]
    NotUnimodular,
    #[error("cannot split polygon {0} between vertices {1} and {2}")]
    BadSplit(usize, usize, usize),
    #[error("point is not on edge {0:?}")]
    NotOnEdge(EdgeRef),
    #[error("surface is invalid: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<Vec2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2>) -> Self {
        Polygon { vertices }
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Vec2 {
        &self.vertices[i % self.vertices.len()]
    }

    /// Start and end of edge `i` (from vertex `i` to vertex `i + 1`).
    pub fn edge(&self, i: usize) -> (&Vec2, &Vec2) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn edge_vector(&self, i: usize) -> Vec2 {
        self.vertex(i + 1) - self.vertex(i)
    }

    pub fn area(&self) -> QuadExt {
        let a2 = signed_area2(&self.vertices);
        &a2 / &a2.int(2)
    }

    /// Interior sector at vertex `i` as `[start, end)` directions.
    pub fn sector(&self, i: usize) -> (Vec2, Vec2) {
        let n = self.vertices.len();
        let out = self.edge_vector(i);
        let incoming = self.edge_vector((i + n - 1) % n);
        (out, -&incoming)
    }

    pub fn index_of_vertex(&self, p: &Vec2) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    pub fn centroid_hint(&self) -> Vec2 {
        // Mean of the vertices; used only when it is strictly inside.
        let d = self.vertices[0].d();
        let n = QuadExt::from_int(self.vertices.len() as i64, d);
        let mut sx = QuadExt::zero(d);
        let mut sy = QuadExt::zero(d);
        for v in &self.vertices {
            sx = sx + &v.x;
            sy = sy + &v.y;
        }
        Vec2::new(&sx / &n, &sy / &n)
    }
}

/// A corner orbit. Closed orbits are interior points; open chains touch the
/// boundary of a net with unglued edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub corners: Vec<CornerRef>,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConePoint {
    pub orbit: Vec<CornerRef>,
    /// Total angle in units of `π`.
    pub angle: u32,
    pub is_true_cone: bool,
    pub marked: bool,
    pub closed: bool,
}

impl ConePoint {
    /// Singular for the flow: a true cone or a marked point, or any boundary point.
    pub fn is_singular(&self) -> bool {
        self.is_true_cone || self.marked || !self.closed
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonNet {
    d: u32,
    polygons: Vec<Polygon>,
    partner: Vec<Vec<Option<EdgeRef>>>,
    marks: BTreeSet<CornerRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    TooFewVertices { polygon: usize },
    NotCounterClockwise { polygon: usize },
    NotSimple { polygon: usize },
    Degenerate { polygon: usize, vertex: usize },
    Unglued { edge: EdgeRef },
    SelfGlued { edge: EdgeRef },
    NotParallel { a: EdgeRef, b: EdgeRef },
    OrientationViolation { a: EdgeRef, b: EdgeRef },
    LengthMismatch { a: EdgeRef, b: EdgeRef },
    Disconnected { components: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Which orbits count towards [`total_cone_angle`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConeCount {
    /// Every corner orbit.
    #[default]
    All,
    /// True cones and marked points.
    Augmented,
    /// Only orbits of angle greater than `2π`.
    TrueCones,
}

impl PolygonNet {
    pub fn new(
        polygons: Vec<Vec<Vec2>>,
        gluings: &[(EdgeRef, EdgeRef)],
        marks: impl IntoIterator<Item = CornerRef>,
    ) -> Result<Self, SurfaceError> {
        let d = polygons
            .first()
            .and_then(|p| p.first())
            .map(|v| v.d())
            .unwrap_or(crate::field::DEFAULT_D);
        for (i, p) in polygons.iter().enumerate() {
            if p.len() < 3 {
                return Err(SurfaceError::TooFewVertices(i));
            }
            if p.iter().any(|v| v.x.d() != d || v.y.d() != d) {
                return Err(SurfaceError::FieldMismatch);
            }
        }
        let polygons: Vec<Polygon> = polygons.into_iter().map(Polygon::new).collect();
        let mut partner: Vec<Vec<Option<EdgeRef>>> = polygons.iter().map(|p| vec![None; p.len()]).collect();
        for &(a, b) in gluings {
            for e in [a, b] {
                if e.polygon >= polygons.len() || e.edge >= polygons[e.polygon].len() {
                    return Err(SurfaceError::NoSuchEdge(e));
                }
            }
            if partner[a.polygon][a.edge].is_some() {
                return Err(SurfaceError::GluedTwice(a));
            }
            partner[a.polygon][a.edge] = Some(b);
            if partner[b.polygon][b.edge].is_some() {
                return Err(SurfaceError::GluedTwice(b));
            }
            partner[b.polygon][b.edge] = Some(a);
        }
        let mut set = BTreeSet::new();
        for c in marks {
            if c.polygon >= polygons.len() || c.vertex >= polygons[c.polygon].len() {
                return Err(SurfaceError::NoSuchCorner(c));
            }
            set.insert(c);
        }
        Ok(PolygonNet {
            d,
            polygons,
            partner,
            marks: set,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn polygon(&self, i: usize) -> &Polygon {
        &self.polygons[i]
    }

    pub fn num_polygons(&self) -> usize {
        self.polygons.len()
    }

    pub fn marks(&self) -> &BTreeSet<CornerRef> {
        &self.marks
    }

    pub fn partner(&self, e: EdgeRef) -> Option<EdgeRef> {
        self.partner[e.polygon][e.edge]
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.polygons
            .iter()
            .enumerate()
            .flat_map(|(p, poly)| (0..poly.len()).map(move |e| EdgeRef::new(p, e)))
    }

    pub fn corners(&self) -> impl Iterator<Item = CornerRef> + '_ {
        self.polygons
            .iter()
            .enumerate()
            .flat_map(|(p, poly)| (0..poly.len()).map(move |v| CornerRef::new(p, v)))
    }

    /// Glued pairs, each listed once with the smaller edge first.
    pub fn gluings(&self) -> Vec<(EdgeRef, EdgeRef)> {
        self.edges()
            .filter_map(|e| self.partner(e).filter(|&f| e < f).map(|f| (e, f)))
            .collect()
    }

    pub fn boundary_edges(&self) -> Vec<EdgeRef> {
        self.edges().filter(|&e| self.partner(e).is_none()).collect()
    }

    pub fn edge_points(&self, e: EdgeRef) -> (&Vec2, &Vec2) {
        self.polygons[e.polygon].edge(e.edge)
    }

    pub fn edge_vector(&self, e: EdgeRef) -> Vec2 {
        self.polygons[e.polygon].edge_vector(e.edge)
    }

    pub fn corner_point(&self, c: CornerRef) -> &Vec2 {
        self.polygons[c.polygon].vertex(c.vertex)
    }

    /// Translation carrying points of `e` to the identified points of its
    /// partner. Only meaningful for valid translation gluings.
    pub fn gluing_translation(&self, e: EdgeRef) -> Option<Vec2> {
        let f = self.partner(e)?;
        let (_, e_end) = self.edge_points(e);
        let (f_start, _) = self.edge_points(f);
        Some(f_start - e_end)
    }

    fn next_ccw(&self, c: CornerRef) -> Option<CornerRef> {
        let n = self.polygons[c.polygon].len();
        let incoming = EdgeRef::new(c.polygon, (c.vertex + n - 1) % n);
        self.partner(incoming).map(|f| CornerRef::new(f.polygon, f.edge))
    }

    fn next_cw(&self, c: CornerRef) -> Option<CornerRef> {
        let outgoing = EdgeRef::new(c.polygon, c.vertex);
        self.partner(outgoing).map(|f| {
            let n = self.polygons[f.polygon].len();
            CornerRef::new(f.polygon, (f.edge + 1) % n)
        })
    }

    /// Corner orbits ordered by their smallest corner. Closed orbits list
    /// corners counter-clockwise from the smallest; chains run counter-clockwise
    /// from their clockwise end.
    pub fn orbits(&self) -> Vec<Orbit> {
        let mut seen: BTreeSet<CornerRef> = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.corners() {
            if seen.contains(&start) {
                continue;
            }
            let mut chain = vec![start];
            let mut closed = false;
            let mut cur = start;
            while let Some(next) = self.next_ccw(cur) {
                if next == start {
                    closed = true;
                    break;
                }
                chain.push(next);
                cur = next;
            }
            if !closed {
                let mut back = Vec::new();
                let mut cur = start;
                while let Some(prev) = self.next_cw(cur) {
                    back.push(prev);
                    cur = prev;
                }
                back.reverse();
                back.extend(chain);
                chain = back;
            }
            seen.extend(chain.iter().copied());
            out.push(Orbit { corners: chain, closed });
        }
        out
    }

    /// Map from corner to the index of its orbit in [`PolygonNet::orbits`].
    pub fn orbit_index(&self) -> BTreeMap<CornerRef, usize> {
        let mut m = BTreeMap::new();
        for (i, o) in self.orbits().iter().enumerate() {
            for &c in &o.corners {
                m.insert(c, i);
            }
        }
        m
    }

    /// Number of half-open corner sectors at `c` containing up and down.
    pub fn corner_half_turns(&self, c: CornerRef) -> u32 {
        let (start, end) = self.polygons[c.polygon].sector(c.vertex);
        let up = Vec2::up(self.d);
        let down = Vec2::down(self.d);
        in_sector(&start, &end, &up) as u32 + in_sector(&start, &end, &down) as u32
    }

    pub fn set_marks(&mut self, marks: impl IntoIterator<Item = CornerRef>) {
        self.marks = marks.into_iter().collect();
    }

    /// Applies `v ↦ v + shift` to one polygon.
    pub fn translate_polygon(&self, polygon: usize, shift: &Vec2) -> PolygonNet {
        let mut out = self.clone();
        for v in &mut out.polygons[polygon].vertices {
            *v = &*v + shift;
        }
        out
    }

    /// Finds the edge of `polygon` running from `start` to `end`.
    pub fn find_edge(&self, polygon: usize, start: &Vec2, end: &Vec2) -> Option<EdgeRef> {
        let p = &self.polygons[polygon];
        (0..p.len())
            .find(|&i| p.vertex(i) == start && p.vertex(i + 1) == end)
            .map(|i| EdgeRef::new(polygon, i))
    }

    /// Cuts polygon `polygon` along the diagonal between vertices `i` and `j`.
    /// The part running `i..=j` keeps the index; the other part is appended.
    /// The two new edges are glued to each other.
    pub fn split_polygon(&self, polygon: usize, i: usize, j: usize) -> Result<PolygonNet, SurfaceError> {
        let p = &self.polygons[polygon];
        let n = p.len();
        let (i, j) = (i % n, j % n);
        let gap = (j + n - i) % n;
        if i == j || gap < 2 || gap > n - 2 {
            return Err(SurfaceError::BadSplit(polygon, i, j));
        }
        let first: Vec<Vec2> = (0..=gap).map(|k| p.vertex(i + k).clone()).collect();
        let second: Vec<Vec2> = (0..=(n - gap)).map(|k| p.vertex(j + k).clone()).collect();
        let mut polys: Vec<Vec<Vec2>> = self.polygons.iter().map(|q| q.vertices.clone()).collect();
        polys[polygon] = first.clone();
        polys.push(second.clone());
        let new_index = polys.len() - 1;
        let children = |old: usize| -> Vec<usize> {
            if old == polygon {
                vec![polygon, new_index]
            } else {
                vec![old]
            }
        };
        let chord_a = EdgeRef::new(polygon, first.len() - 1);
        let chord_b = EdgeRef::new(new_index, second.len() - 1);
        let mut extra = vec![(chord_a, chord_b)];
        let net = self.rebuild(polys, &children, &mut extra)?;
        Ok(net)
    }

    /// Inserts the given points as new vertices on edges. Each point is also
    /// inserted at its image on the glued partner edge.
    pub fn subdivide(&self, points: &[(EdgeRef, Vec2)]) -> Result<PolygonNet, SurfaceError> {
        let mut per_edge: BTreeMap<EdgeRef, Vec<Vec2>> = BTreeMap::new();
        for (e, q) in points {
            let (a, b) = self.edge_points(*e);
            if !crate::geometry::on_segment(a, b, q) {
                return Err(SurfaceError::NotOnEdge(*e));
            }
            if q == a || q == b {
                continue;
            }
            per_edge.entry(*e).or_default().push(q.clone());
            if let (Some(f), Some(t)) = (self.partner(*e), self.gluing_translation(*e)) {
                per_edge.entry(f).or_default().push(q + &t);
            }
        }
        let mut polys: Vec<Vec<Vec2>> = Vec::with_capacity(self.polygons.len());
        for (pi, p) in self.polygons.iter().enumerate() {
            let mut verts = Vec::new();
            for k in 0..p.len() {
                let a = p.vertex(k).clone();
                verts.push(a.clone());
                if let Some(pts) = per_edge.get(&EdgeRef::new(pi, k)) {
                    let mut pts: Vec<Vec2> = pts.clone();
                    pts.sort_by(|u, v| {
                        let du = crate::geometry::dot(&(u - &a), &p.edge_vector(k));
                        let dv = crate::geometry::dot(&(v - &a), &p.edge_vector(k));
                        du.cmp(&dv)
                    });
                    pts.dedup();
                    verts.extend(pts);
                }
            }
            polys.push(verts);
        }
        // Glue sub-edges pairwise by position along the original edge pair.
        let mut gl = Vec::new();
        let mut new_marks = Vec::new();
        for (e, f) in self.gluings() {
            let (ea, eb) = self.edge_points(e);
            let t = self.gluing_translation(e).expect("glued");
            let e_sub = sub_edges(&polys[e.polygon], ea, eb);
            for (s, s_end) in e_sub {
                let fs = &polys[f.polygon];
                let image_start = &s_end + &t;
                let image_end = &s + &t;
                let fi = (0..fs.len())
                    .find(|&k| fs[k] == image_start && fs[(k + 1) % fs.len()] == image_end)
                    .ok_or(SurfaceError::Gluing(e, f))?;
                let si = index_of(&polys[e.polygon], &s).expect("vertex present");
                gl.push((EdgeRef::new(e.polygon, si), EdgeRef::new(f.polygon, fi)));
            }
        }
        for c in &self.marks {
            let q = self.corner_point(*c);
            let vi = index_of(&polys[c.polygon], q).expect("vertex present");
            new_marks.push(CornerRef::new(c.polygon, vi));
        }
        PolygonNet::new(polys, &gl, new_marks)
    }

    // Re-creates the gluing table and marks for a new polygon list, matching
    // old edges by coordinates inside the children of each old polygon.
    fn rebuild(
        &self,
        polys: Vec<Vec<Vec2>>,
        children: &dyn Fn(usize) -> Vec<usize>,
        extra: &mut Vec<(EdgeRef, EdgeRef)>,
    ) -> Result<PolygonNet, SurfaceError> {
        let locate = |old: EdgeRef| -> Result<EdgeRef, SurfaceError> {
            let (a, b) = self.edge_points(old);
            for c in children(old.polygon) {
                let p = &polys[c];
                for k in 0..p.len() {
                    if &p[k] == a && &p[(k + 1) % p.len()] == b {
                        return Ok(EdgeRef::new(c, k));
                    }
                }
            }
            Err(SurfaceError::NoSuchEdge(old))
        };
        let mut gl = Vec::new();
        for (e, f) in self.gluings() {
            gl.push((locate(e)?, locate(f)?));
        }
        gl.append(extra);
        let mut marks = Vec::new();
        for c in &self.marks {
            let q = self.corner_point(*c);
            for child in children(c.polygon) {
                if let Some(vi) = index_of(&polys[child], q) {
                    marks.push(CornerRef::new(child, vi));
                }
            }
        }
        PolygonNet::new(polys, &gl, marks)
    }
}

fn index_of(vertices: &[Vec2], q: &Vec2) -> Option<usize> {
    vertices.iter().position(|v| v == q)
}

// Consecutive vertex pairs of `vertices` that lie along the segment a→b.
fn sub_edges(vertices: &[Vec2], a: &Vec2, b: &Vec2) -> Vec<(Vec2, Vec2)> {
    let n = vertices.len();
    let start = index_of(vertices, a).expect("edge start present");
    let mut out = Vec::new();
    let mut k = start;
    loop {
        let s = vertices[k].clone();
        let e = vertices[(k + 1) % n].clone();
        let done = &e == b;
        out.push((s, e));
        if done {
            return out;
        }
        k = (k + 1) % n;
        if k == start {
            return out;
        }
    }
}

/// Checks every structural and geometric invariant of a closed translation
/// surface and lists the violations found.
pub fn validate_surface(s: &PolygonNet) -> ValidationReport {
    let mut violations = Vec::new();
    for (pi, p) in s.polygons.iter().enumerate() {
        let n = p.len();
        if n < 3 {
            violations.push(Violation::TooFewVertices { polygon: pi });
            continue;
        }
        if signed_area2(&p.vertices).sign() <= 0 {
            violations.push(Violation::NotCounterClockwise { polygon: pi });
        }
        for i in 0..n {
            let out = p.edge_vector(i);
            let incoming = p.edge_vector((i + n - 1) % n);
            // Zero-length edges and zero-angle spikes are degenerate; straight
            // (angle π) corners are allowed.
            if out.is_zero() || (cross(&out, &incoming).is_zero() && !same_direction(&out, &incoming)) {
                violations.push(Violation::Degenerate { polygon: pi, vertex: i });
            }
        }
        if !is_simple(p) {
            violations.push(Violation::NotSimple { polygon: pi });
        }
    }
    for e in s.edges() {
        match s.partner(e) {
            None => violations.push(Violation::Unglued { edge: e }),
            Some(f) if f == e => violations.push(Violation::SelfGlued { edge: e }),
            Some(f) if e < f => {
                let u = s.edge_vector(e);
                let v = s.edge_vector(f);
                if !cross(&u, &v).is_zero() {
                    violations.push(Violation::NotParallel { a: e, b: f });
                } else if same_direction(&u, &v) {
                    violations.push(Violation::OrientationViolation { a: e, b: f });
                } else if &u + &v != Vec2::ints(0, 0, s.d) {
                    violations.push(Violation::LengthMismatch { a: e, b: f });
                }
            }
            Some(_) => {}
        }
    }
    let comps = polygon_components(s);
    if comps > 1 {
        violations.push(Violation::Disconnected { components: comps });
    }
    ValidationReport { violations }
}

fn is_simple(p: &Polygon) -> bool {
    let n = p.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            let (a, b) = p.edge(i);
            let (c, d) = p.edge(j);
            if segments_touch(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

pub(crate) fn polygon_components(s: &PolygonNet) -> usize {
    let mut ds = DisjointSets::new(s.num_polygons());
    for (e, f) in s.gluings() {
        ds.union(e.polygon, f.polygon);
    }
    ds.groups().len()
}

/// All corner orbits with their total angles. Regular unmarked orbits are
/// included and flagged as neither true cones nor marked.
pub fn cone_points(s: &PolygonNet) -> Vec<ConePoint> {
    s.orbits()
        .into_iter()
        .map(|o| {
            let angle: u32 = o.corners.iter().map(|&c| s.corner_half_turns(c)).sum();
            let marked = o.corners.iter().any(|c| s.marks.contains(c));
            ConePoint {
                is_true_cone: o.closed && angle > 2,
                marked,
                closed: o.closed,
                angle,
                orbit: o.corners,
            }
        })
        .collect()
}

/// Total cone angle in units of `2π`.
pub fn total_cone_angle(s: &PolygonNet, count: ConeCount) -> u32 {
    cone_points(s)
        .iter()
        .filter(|c| match count {
            ConeCount::All => true,
            ConeCount::Augmented => c.is_true_cone || c.marked,
            ConeCount::TrueCones => c.is_true_cone,
        })
        .map(|c| c.angle / 2)
        .sum()
}

/// Euler characteristic `V − E + F` of the cell complex, boundary edges
/// counted once.
pub fn euler_characteristic(s: &PolygonNet) -> i64 {
    let v = s.orbits().len() as i64;
    let e = (s.gluings().len() + s.boundary_edges().len()) as i64;
    let f = s.num_polygons() as i64;
    v - e + f
}

/// Genus of a closed surface from its Euler characteristic.
pub fn genus(s: &PolygonNet) -> u32 {
    let chi = euler_characteristic(s);
    ((2 - chi) / 2) as u32
}

/// Orders `k_i` of the true cone points, largest first.
pub fn stratum_signature(s: &PolygonNet) -> Vec<u32> {
    let mut ks: Vec<u32> = cone_points(s)
        .iter()
        .filter(|c| c.is_true_cone)
        .map(|c| c.angle / 2 - 1)
        .collect();
    ks.sort_unstable_by(|a, b| b.cmp(a));
    ks
}

pub fn area(s: &PolygonNet) -> QuadExt {
    s.polygons.iter().fold(QuadExt::zero(s.d), |acc, p| acc + p.area())
}

/// Sum of `|dx| + |dy|` over all edges; an upper bound on the perimeter.
pub fn l1_perimeter(s: &PolygonNet) -> QuadExt {
    s.edges().fold(QuadExt::zero(s.d), |acc, e| {
        let v = s.edge_vector(e);
        acc + v.x.abs() + v.y.abs()
    })
}

/// A 2×2 matrix `[[a, b], [c, d]]` acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix2 {
    pub a: QuadExt,
    pub b: QuadExt,
    pub c: QuadExt,
    pub d: QuadExt,
}

impl Matrix2 {
    pub fn identity(d: u32) -> Self {
        Matrix2 {
            a: QuadExt::one(d),
            b: QuadExt::zero(d),
            c: QuadExt::zero(d),
            d: QuadExt::one(d),
        }
    }

    /// `[[1, 0], [t, 1]]`.
    pub fn vertical_shear(t: QuadExt) -> Self {
        let d = t.d();
        Matrix2 {
            a: QuadExt::one(d),
            b: QuadExt::zero(d),
            c: t,
            d: QuadExt::one(d),
        }
    }

    /// `[[1, t], [0, 1]]`.
    pub fn horizontal_shear(t: QuadExt) -> Self {
        let d = t.d();
        Matrix2 {
            a: QuadExt::one(d),
            b: t,
            c: QuadExt::zero(d),
            d: QuadExt::one(d),
        }
    }

    pub fn det(&self) -> QuadExt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(&self.a * &v.x + &self.b * &v.y, &self.c * &v.x + &self.d * &v.y)
    }
}

/// Applies a unimodular linear map to the polygons in `region`. Gluings are
/// kept; every gluing must still be a translation afterwards.
pub fn apply_shear(s: &PolygonNet, matrix: &Matrix2, region: &[usize]) -> Result<PolygonNet, SurfaceError> {
    if matrix.det() != QuadExt::one(s.d) {
        return Err(SurfaceError::NotUnimodular);
    }
    let mut out = s.clone();
    for &p in region {
        if p >= out.polygons.len() {
            return Err(SurfaceError::Invalid(format!("no polygon {p}")));
        }
        let verts = out.polygons[p].vertices.iter().map(|v| matrix.apply(v)).collect();
        out.polygons[p] = Polygon::new(verts);
    }
    for (e, f) in out.gluings() {
        let u = out.edge_vector(e);
        let v = out.edge_vector(f);
        if &u + &v != Vec2::ints(0, 0, s.d) {
            return Err(SurfaceError::Gluing(e, f));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SurfaceDoc {
    pub d: u32,
    pub polygons: Vec<Vec<Vec2>>,
    pub gluings: Vec<[usize; 4]>,
    pub marks: Vec<[usize; 2]>,
}

impl From<&PolygonNet> for SurfaceDoc {
    fn from(s: &PolygonNet) -> Self {
        SurfaceDoc {
            d: s.d,
            polygons: s.polygons.iter().map(|p| p.vertices.clone()).collect(),
            gluings: s
                .gluings()
                .into_iter()
                .map(|(e, f)| [e.polygon, e.edge, f.polygon, f.edge])
                .collect(),
            marks: s.marks.iter().map(|c| [c.polygon, c.vertex]).collect(),
        }
    }
}

impl TryFrom<SurfaceDoc> for PolygonNet {
    type Error = SurfaceError;

    fn try_from(doc: SurfaceDoc) -> Result<Self, SurfaceError> {
        let gl: Vec<(EdgeRef, EdgeRef)> = doc
            .gluings
            .iter()
            .map(|g| (EdgeRef::new(g[0], g[1]), EdgeRef::new(g[2], g[3])))
            .collect();
        let marks = doc.marks.iter().map(|m| CornerRef::new(m[0], m[1]));
        let net = PolygonNet::new(doc.polygons, &gl, marks)?;
        if net.d != doc.d {
            return Err(SurfaceError::FieldMismatch);
        }
        Ok(net)
    }
}

impl PolygonNet {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SurfaceDoc::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, SurfaceError> {
        let doc: SurfaceDoc = serde_json::from_str(text).map_err(|e| SurfaceError::Invalid(e.to_string()))?;
        PolygonNet::try_from(doc)
    }
}

/// Unit square with opposite sides glued and its corner marked.
pub fn unit_square_torus(d: u32) -> PolygonNet {
    let sq = vec![
        Vec2::ints(0, 0, d),
        Vec2::ints(1, 0, d),
        Vec2::ints(1, 1, d),
        Vec2::ints(0, 1, d),
    ];
    PolygonNet::new(
        vec![sq],
        &[
            (EdgeRef::new(0, 0), EdgeRef::new(0, 2)),
            (EdgeRef::new(0, 1), EdgeRef::new(0, 3)),
        ],
        [CornerRef::new(0, 0)],
    )
    .expect("square torus")
}
