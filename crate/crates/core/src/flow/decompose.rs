use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::field::{rem_euclid, QuadExt};
use crate::geometry::{strictly_inside, Vec2};
use crate::surface::{area, euler_characteristic, CornerRef, EdgeRef, PolygonNet};
use crate::unionfind::DisjointSets;

use super::{
    cut_along, CutResult, Direction, Endpoints, Flow, FlowError, Piece, SaddleConnection, Stop, TraceOutcome, Watch,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ComponentKind {
    Periodic,
    MinimalCertified,
    MinimalHeuristic,
}

impl ComponentKind {
    pub fn is_periodic(self) -> bool {
        self == ComponentKind::Periodic
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    /// A flat cylinder: every leaf closes with this circumference.
    Cylinder { circumference: QuadExt, width: QuadExt },
    /// First return to a horizontal circle is rotation by an irrational
    /// fraction of its length.
    Rotation { circle_length: QuadExt, rotation: QuadExt },
    /// No proof found within the length bound.
    Bound { bound: QuadExt },
}

/// A horizontal closed transversal supplied with a block: the edge of
/// polygon `polygon` running from `start` to `end` in the uncut surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceHint {
    pub polygon: usize,
    pub start: Vec2,
    pub end: Vec2,
}

#[derive(Clone, Debug)]
pub struct Component {
    pub piece: Piece,
    pub kind: ComponentKind,
    pub certificate: Certificate,
    pub area: QuadExt,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub bound: QuadExt,
    pub connections: Vec<SaddleConnection>,
    /// Upward separatrices that did not close within the bound.
    pub broken: Vec<CornerRef>,
    pub cut: CutResult,
    pub components: Vec<Component>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub kind: ComponentKind,
    pub area: QuadExt,
    pub certificate: Certificate,
    pub polygons: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub periodic: usize,
    pub minimal: usize,
    pub certified: bool,
    pub bound: QuadExt,
    pub saddle_connections: usize,
    pub broken_separatrices: usize,
    pub components: Vec<ComponentReport>,
    /// For each saddle connection, the components on its two sides.
    pub boundary: Vec<(usize, usize, usize)>,
}

impl Decomposition {
    /// Numbers of periodic and minimal components.
    pub fn counts(&self) -> (usize, usize) {
        let p = self.components.iter().filter(|c| c.kind.is_periodic()).count();
        (p, self.components.len() - p)
    }

    pub fn is_certified(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.kind != ComponentKind::MinimalHeuristic)
    }

    /// Pairs of components on the two sides of each saddle connection.
    pub fn boundary_graph(&self) -> Vec<(usize, usize, usize)> {
        let mut sides: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (pi, c) in self.components.iter().enumerate() {
            for &k in c.piece.boundary.values() {
                sides.entry(k).or_default().insert(pi);
            }
        }
        sides
            .into_iter()
            .map(|(k, set)| {
                let v: Vec<usize> = set.into_iter().collect();
                (k, v[0], *v.last().expect("nonempty"))
            })
            .collect()
    }

    pub fn report(&self) -> DecompositionReport {
        let (periodic, minimal) = self.counts();
        DecompositionReport {
            periodic,
            minimal,
            certified: self.is_certified(),
            bound: self.bound.clone(),
            saddle_connections: self.connections.len(),
            broken_separatrices: self.broken.len(),
            components: self
                .components
                .iter()
                .map(|c| ComponentReport {
                    kind: c.kind,
                    area: c.area.clone(),
                    certificate: c.certificate.clone(),
                    polygons: c.piece.origin.clone(),
                })
                .collect(),
            boundary: self.boundary_graph(),
        }
    }
}

/// Splits `s` into invariant components of the vertical flow.
pub fn decompose_vertical(s: &PolygonNet, bound: &QuadExt, hints: &[PieceHint]) -> Result<Decomposition, FlowError> {
    let flow = Flow::new(s, Endpoints::Augmented);
    let outcomes = flow.trace_all(Direction::Up, bound)?;
    let mut connections = Vec::new();
    let mut broken = Vec::new();
    for (c, o) in outcomes {
        match o {
            TraceOutcome::Hit(sc) => connections.push(sc),
            TraceOutcome::ExceededBound { .. } => broken.push(c),
        }
    }
    connections.sort_by(|a, b| (&a.length, a.start_orbit, a.start).cmp(&(&b.length, b.start_orbit, b.start)));
    let cut = cut_along(s, &connections)?;
    let mut components = Vec::with_capacity(cut.pieces.len());
    for piece in &cut.pieces {
        let hint = hints.iter().find_map(|h| {
            piece.origin.iter().enumerate().find_map(|(local, &o)| {
                if o != h.polygon {
                    return None;
                }
                piece.net.find_edge(local, &h.start, &h.end)
            })
        });
        let (kind, certificate) = classify_piece(&piece.net, hint, bound)?;
        components.push(Component {
            area: area(&piece.net),
            piece: piece.clone(),
            kind,
            certificate,
        });
    }
    Ok(Decomposition {
        bound: bound.clone(),
        connections,
        broken,
        cut,
        components,
    })
}

/// Classifies one piece of a cut surface. `hint` is a horizontal edge of the
/// piece forming a closed transversal.
pub fn classify_piece(
    piece: &PolygonNet,
    hint: Option<EdgeRef>,
    bound: &QuadExt,
) -> Result<(ComponentKind, Certificate), FlowError> {
    let flow = Flow::new(piece, Endpoints::Augmented);
    if let Some(cert) = cylinder(&flow, bound)? {
        return Ok((ComponentKind::Periodic, cert));
    }
    if let Some(c) = hint {
        if let Some(cert) = rotation(&flow, c, bound)? {
            return Ok((ComponentKind::MinimalCertified, cert));
        }
    }
    Ok((
        ComponentKind::MinimalHeuristic,
        Certificate::Bound { bound: bound.clone() },
    ))
}

fn boundary_cycles(net: &PolygonNet) -> Vec<Vec<EdgeRef>> {
    let boundary = net.boundary_edges();
    let index: BTreeMap<EdgeRef, usize> = boundary.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut ds = DisjointSets::new(boundary.len());
    for orbit in net.orbits().iter().filter(|o| !o.closed) {
        let first = orbit.corners[0];
        let last = *orbit.corners.last().expect("nonempty");
        let out = EdgeRef::new(first.polygon, first.vertex);
        let n = net.polygon(last.polygon).len();
        let incoming = EdgeRef::new(last.polygon, (last.vertex + n - 1) % n);
        if let (Some(&a), Some(&b)) = (index.get(&out), index.get(&incoming)) {
            ds.union(a, b);
        }
    }
    ds.groups()
        .into_iter()
        .map(|g| g.into_iter().map(|i| boundary[i]).collect())
        .collect()
}

fn interior_point(net: &PolygonNet, polygon: usize) -> Option<Vec2> {
    let p = net.polygon(polygon);
    let c = p.centroid_hint();
    if strictly_inside(p.vertices(), &c) {
        return Some(c);
    }
    let half = QuadExt::from_ratio(1, 2, net.d());
    for i in 0..p.len() {
        for j in (i + 2)..p.len() {
            let m = (p.vertex(i) + p.vertex(j)).scale(&half);
            if strictly_inside(p.vertices(), &m) {
                return Some(m);
            }
        }
    }
    None
}

fn cylinder(flow: &Flow, bound: &QuadExt) -> Result<Option<Certificate>, FlowError> {
    let net = flow.net();
    if euler_characteristic(net) != 0 {
        return Ok(None);
    }
    if flow.cones().iter().any(|c| c.closed && (c.is_true_cone || c.marked)) {
        return Ok(None);
    }
    let cycles = boundary_cycles(net);
    if cycles.len() != 2 {
        return Ok(None);
    }
    let mut lengths = Vec::new();
    for cycle in &cycles {
        let mut total = QuadExt::zero(net.d());
        for &e in cycle {
            let v = net.edge_vector(e);
            if !v.x.is_zero() {
                return Ok(None);
            }
            total = total + v.y.abs();
        }
        lengths.push(total);
    }
    let Some(x0) = interior_point(net, 0) else {
        return Ok(None);
    };
    let leaf = flow.run(
        0,
        x0.clone(),
        None,
        Direction::Up,
        bound,
        &Watch::ReturnTo(0, x0),
        false,
    )?;
    let Stop::Returned { length } = leaf.stop else {
        return Ok(None);
    };
    if lengths.iter().any(|l| *l != length) {
        return Ok(None);
    }
    let width = &area(net) / &length;
    Ok(Some(Certificate::Cylinder {
        circumference: length,
        width,
    }))
}

fn rotation(flow: &Flow, hint: EdgeRef, bound: &QuadExt) -> Result<Option<Certificate>, FlowError> {
    let net = flow.net();
    let Some(partner) = net.partner(hint) else {
        return Ok(None);
    };
    let v = net.edge_vector(hint);
    if !v.y.is_zero() {
        return Ok(None);
    }
    // Work on the side of the circle that has the polygon above it.
    let c = if v.x.sign() > 0 { hint } else { partner };
    let (c_start, c_end) = net.edge_points(c);
    let len = &c_end.x - &c_start.x;
    let watch = Watch::Cross(c);

    let mut cuts = vec![QuadExt::zero(net.d())];
    for start in flow.separatrix_starts(Direction::Down) {
        let leaf = flow.run(
            start.polygon,
            net.corner_point(start).clone(),
            Some(start.vertex),
            Direction::Down,
            bound,
            &watch,
            false,
        )?;
        match leaf.stop {
            Stop::Crossed { t } => cuts.push(t),
            Stop::Singular(_) => {}
            _ => return Ok(None),
        }
    }
    cuts.sort();
    cuts.dedup();
    let half = QuadExt::from_ratio(1, 2, net.d());
    let mut shift: Option<QuadExt> = None;
    for (i, a) in cuts.iter().enumerate() {
        let b = cuts.get(i + 1).unwrap_or(&len);
        let mid = &(a + b) * &half;
        let point = Vec2::new(&c_start.x + &mid, c_start.y.clone());
        let leaf = flow.run(c.polygon, point, None, Direction::Up, bound, &watch, false)?;
        let Stop::Crossed { t } = leaf.stop else {
            return Ok(None);
        };
        let sh = rem_euclid(&(&t - &mid), &len);
        match &shift {
            None => shift = Some(sh),
            Some(prev) if *prev == sh => {}
            Some(_) => return Ok(None),
        }
    }
    let rotation = shift.expect("at least one interval");
    if (&rotation / &len).is_rational() {
        return Ok(None);
    }
    Ok(Some(Certificate::Rotation {
        circle_length: len,
        rotation,
    }))
}
