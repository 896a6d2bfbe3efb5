//! The vertical straight-line flow: exact leaf tracing, saddle connections,
//! cutting and classification of invariant components.

mod cut;
mod decompose;

pub use cut::{cut_along, CutResult, Piece};
pub use decompose::{
    classify_piece, decompose_vertical, Certificate, Component, ComponentKind, Decomposition, PieceHint,
};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::QuadExt;
use crate::geometry::{in_sector, same_direction, Vec2};
use crate::surface::{cone_points, l1_perimeter, ConePoint, CornerRef, EdgeRef, PolygonNet};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("corner {0:?} has no ray in the requested direction")]
    NoRay(CornerRef),
    #[error("corner {0:?} is not a singular point")]
    NotSingular(CornerRef),
    #[error("leaf left the surface through boundary edge {0:?}")]
    LeftSurface(EdgeRef),
    #[error("leaf from polygon {0} found no exit")]
    Stuck(usize),
    #[error("cut is not a vertical path of the surface: {0}")]
    BadCut(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn vector(self, d: u32) -> Vec2 {
        match self {
            Direction::Up => Vec2::up(d),
            Direction::Down => Vec2::down(d),
        }
    }

    fn sign(self) -> i8 {
        match self {
            Direction::Up => 1,
            Direction::Down => -1,
        }
    }
}

/// Which orbits stop a leaf.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Endpoints {
    /// True cones, marked points and boundary points.
    #[default]
    Augmented,
    /// True cones and boundary points; marked points are passed straight through.
    TrueCones,
}

/// A maximal straight piece of a leaf inside one polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub polygon: usize,
    pub start: Vec2,
    pub end: Vec2,
    /// Set when the segment runs along an edge of the polygon.
    pub along_edge: Option<EdgeRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaddleConnection {
    pub start: CornerRef,
    pub end: CornerRef,
    pub start_orbit: usize,
    pub end_orbit: usize,
    pub length: QuadExt,
    pub path: Vec<Segment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TraceOutcome {
    Hit(SaddleConnection),
    ExceededBound { length: QuadExt },
}

/// Default length bound: 100 times the summed L1 perimeter of all polygons.
pub fn default_bound(s: &PolygonNet) -> QuadExt {
    l1_perimeter(s) * QuadExt::from_int(100, s.d())
}

#[derive(Clone, Debug)]
pub(crate) enum Stop {
    Singular(CornerRef),
    Returned { length: QuadExt },
    Crossed { t: QuadExt },
    Exceeded,
}

#[derive(Clone, Debug)]
pub(crate) enum Watch {
    Nothing,
    /// Stop when the leaf comes back to this point of this polygon.
    ReturnTo(usize, Vec2),
    /// Stop at the first crossing of this horizontal edge (or its partner);
    /// `t` is the offset from the edge start.
    Cross(EdgeRef),
}

pub(crate) struct Leaf {
    pub segments: Vec<Segment>,
    pub length: QuadExt,
    pub stop: Stop,
}

enum Next {
    Vertex(CornerRef),
    Edge(EdgeRef, Vec2),
}

/// Precomputed orbit data for tracing leaves on one surface.
pub struct Flow<'a> {
    net: &'a PolygonNet,
    orbit_of: Vec<Vec<usize>>,
    cones: Vec<ConePoint>,
    singular: Vec<bool>,
}

impl<'a> Flow<'a> {
    pub fn new(net: &'a PolygonNet, endpoints: Endpoints) -> Self {
        let cones = cone_points(net);
        let mut orbit_of: Vec<Vec<usize>> = net.polygons().iter().map(|p| vec![0; p.len()]).collect();
        for (i, cp) in cones.iter().enumerate() {
            for c in &cp.orbit {
                orbit_of[c.polygon][c.vertex] = i;
            }
        }
        let singular = cones
            .iter()
            .map(|c| match endpoints {
                Endpoints::Augmented => c.is_singular(),
                Endpoints::TrueCones => c.is_true_cone || !c.closed,
            })
            .collect();
        Flow {
            net,
            orbit_of,
            cones,
            singular,
        }
    }

    pub fn net(&self) -> &PolygonNet {
        self.net
    }

    pub fn cones(&self) -> &[ConePoint] {
        &self.cones
    }

    pub fn orbit(&self, c: CornerRef) -> usize {
        self.orbit_of[c.polygon][c.vertex]
    }

    pub fn is_singular_orbit(&self, orbit: usize) -> bool {
        self.singular[orbit]
    }

    /// Corners of singular orbits whose sector contains `dir`, one per ray.
    pub fn separatrix_starts(&self, dir: Direction) -> Vec<CornerRef> {
        let u = dir.vector(self.net.d());
        let mut out = Vec::new();
        for (i, cp) in self.cones.iter().enumerate() {
            if !self.singular[i] {
                continue;
            }
            for &c in &cp.orbit {
                if self.has_ray(c, &u) {
                    out.push(c);
                }
            }
        }
        out.sort();
        out
    }

    fn has_ray(&self, c: CornerRef, u: &Vec2) -> bool {
        let (start, end) = self.net.polygon(c.polygon).sector(c.vertex);
        in_sector(&start, &end, u)
    }

    // Exit of the ray from `x` in direction `dir` through polygon `p`.
    fn exit(&self, p: usize, x: &Vec2, dir: Direction) -> Result<(Vec2, Next), FlowError> {
        let poly = self.net.polygon(p);
        let s = dir.sign();
        let mut best: Option<(QuadExt, Vec2, Next)> = None;
        let mut consider = |dist: QuadExt, point: Vec2, next: Next| {
            if best.as_ref().is_none_or(|(b, _, _)| dist < *b) {
                best = Some((dist, point, next));
            }
        };
        for (j, w) in poly.vertices().iter().enumerate() {
            if w.x == x.x {
                let dy = &w.y - &x.y;
                if dy.sign() == s {
                    consider(dy.abs(), w.clone(), Next::Vertex(CornerRef::new(p, j)));
                }
            }
        }
        for k in 0..poly.len() {
            let (a, b) = poly.edge(k);
            let (lo, hi) = if a.x < b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
            if !(lo < &x.x && &x.x < hi) {
                continue;
            }
            let y = &a.y + &(&(&x.x - &a.x) * &(&b.y - &a.y)) / &(&b.x - &a.x);
            let dy = &y - &x.y;
            if dy.sign() == s {
                let q = Vec2::new(x.x.clone(), y);
                consider(dy.abs(), q.clone(), Next::Edge(EdgeRef::new(p, k), q));
            }
        }
        best.map(|(_, point, next)| (point, next)).ok_or(FlowError::Stuck(p))
    }

    /// Follows a leaf from `start` (a point of `polygon`, optionally the vertex
    /// `vertex` of it) in direction `dir` until it stops.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn run(
        &self,
        mut polygon: usize,
        mut point: Vec2,
        mut vertex: Option<usize>,
        dir: Direction,
        bound: &QuadExt,
        watch: &Watch,
        keep_segments: bool,
    ) -> Result<Leaf, FlowError> {
        let net = self.net;
        let u = dir.vector(net.d());
        let s = dir.sign();
        let mut length = QuadExt::zero(net.d());
        let mut segments = Vec::new();
        loop {
            let (end, along, next) = match vertex {
                Some(i) if same_direction(&net.polygon(polygon).edge_vector(i), &u) => {
                    let n = net.polygon(polygon).len();
                    let e = EdgeRef::new(polygon, i);
                    let end = net.polygon(polygon).vertex(i + 1).clone();
                    (end, Some(e), Next::Vertex(CornerRef::new(polygon, (i + 1) % n)))
                }
                _ => {
                    let (end, next) = self.exit(polygon, &point, dir)?;
                    (end, None, next)
                }
            };
            let step = (&end.y - &point.y).abs();
            if let Watch::ReturnTo(p0, x0) = watch {
                if *p0 == polygon && x0.x == point.x {
                    let a = (&x0.y - &point.y).sign() == s;
                    let b = (&end.y - &x0.y).sign() != -s;
                    if a && b {
                        let length = &length + &(&x0.y - &point.y).abs();
                        return Ok(Leaf {
                            segments,
                            length: length.clone(),
                            stop: Stop::Returned { length },
                        });
                    }
                }
            }
            length = length + step;
            if keep_segments {
                segments.push(Segment {
                    polygon,
                    start: point.clone(),
                    end: end.clone(),
                    along_edge: along,
                });
            }
            if &length > bound {
                return Ok(Leaf {
                    segments,
                    length,
                    stop: Stop::Exceeded,
                });
            }
            match next {
                Next::Vertex(c) => {
                    let o = self.orbit(c);
                    if self.singular[o] {
                        return Ok(Leaf {
                            segments,
                            length,
                            stop: Stop::Singular(c),
                        });
                    }
                    let cont = self.cones[o]
                        .orbit
                        .iter()
                        .copied()
                        .find(|&k| self.has_ray(k, &u))
                        .ok_or(FlowError::Stuck(c.polygon))?;
                    polygon = cont.polygon;
                    point = net.corner_point(cont).clone();
                    vertex = Some(cont.vertex);
                }
                Next::Edge(e, q) => {
                    if let Watch::Cross(c) = watch {
                        let on_c = if e == *c {
                            Some(q.clone())
                        } else if Some(e) == net.partner(*c) {
                            Some(&q + &net.gluing_translation(e).expect("glued"))
                        } else {
                            None
                        };
                        if let Some(qc) = on_c {
                            let (c_start, _) = net.edge_points(*c);
                            let t = (&qc.x - &c_start.x).abs();
                            return Ok(Leaf {
                                segments,
                                length,
                                stop: Stop::Crossed { t },
                            });
                        }
                    }
                    let f = net.partner(e).ok_or(FlowError::LeftSurface(e))?;
                    let t = net.gluing_translation(e).expect("glued");
                    polygon = f.polygon;
                    point = &q + &t;
                    vertex = None;
                }
            }
        }
    }

    /// Traces the separatrix leaving corner `start` in direction `dir`.
    pub fn trace_separatrix(
        &self,
        start: CornerRef,
        dir: Direction,
        bound: &QuadExt,
    ) -> Result<TraceOutcome, FlowError> {
        if start.polygon >= self.net.num_polygons() || start.vertex >= self.net.polygon(start.polygon).len() {
            return Err(FlowError::NotSingular(start));
        }
        let u = dir.vector(self.net.d());
        if !self.has_ray(start, &u) {
            return Err(FlowError::NoRay(start));
        }
        let leaf = self.run(
            start.polygon,
            self.net.corner_point(start).clone(),
            Some(start.vertex),
            dir,
            bound,
            &Watch::Nothing,
            true,
        )?;
        Ok(match leaf.stop {
            Stop::Singular(end) => TraceOutcome::Hit(SaddleConnection {
                start,
                end,
                start_orbit: self.orbit(start),
                end_orbit: self.orbit(end),
                length: leaf.length,
                path: leaf.segments,
            }),
            _ => TraceOutcome::ExceededBound { length: bound.clone() },
        })
    }

    /// Outcomes of all separatrices in direction `dir`, keyed by start corner.
    pub fn trace_all(&self, dir: Direction, bound: &QuadExt) -> Result<BTreeMap<CornerRef, TraceOutcome>, FlowError> {
        let starts = self.separatrix_starts(dir);
        let results: Result<Vec<_>, FlowError> = starts
            .par_iter()
            .map(|&c| self.trace_separatrix(c, dir, bound).map(|o| (c, o)))
            .collect();
        Ok(results?.into_iter().collect())
    }
}

/// Traces the separatrix leaving `start` in direction `dir`; marked points
/// count as endpoints.
pub fn trace_separatrix(
    s: &PolygonNet,
    start: CornerRef,
    dir: Direction,
    bound: &QuadExt,
) -> Result<TraceOutcome, FlowError> {
    Flow::new(s, Endpoints::Augmented).trace_separatrix(start, dir, bound)
}

/// All vertical saddle connections of length at most `bound`, each found once
/// from its lower end, sorted by length then start orbit then start corner.
pub fn find_vertical_saddle_connections(
    s: &PolygonNet,
    bound: &QuadExt,
    endpoints: Endpoints,
) -> Result<Vec<SaddleConnection>, FlowError> {
    let flow = Flow::new(s, endpoints);
    let mut out: Vec<SaddleConnection> = flow
        .trace_all(Direction::Up, bound)?
        .into_values()
        .filter_map(|o| match o {
            TraceOutcome::Hit(sc) => Some(sc),
            TraceOutcome::ExceededBound { .. } => None,
        })
        .collect();
    out.sort_by(|a, b| (&a.length, a.start_orbit, a.start).cmp(&(&b.length, b.start_orbit, b.start)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::unit_square_torus;

    #[test]
    fn torus_closes_after_one() {
        let t = unit_square_torus(2);
        let bound = QuadExt::from_int(2, 2);
        let flow = Flow::new(&t, Endpoints::Augmented);
        let starts = flow.separatrix_starts(Direction::Up);
        assert_eq!(starts, vec![CornerRef::new(0, 1)]);
        match flow.trace_separatrix(starts[0], Direction::Up, &bound).unwrap() {
            TraceOutcome::Hit(sc) => assert_eq!(sc.length, QuadExt::one(2)),
            other => panic!("{other:?}"),
        }
        let scs = find_vertical_saddle_connections(&t, &bound, Endpoints::Augmented).unwrap();
        assert_eq!(scs.len(), 1);
        assert!(find_vertical_saddle_connections(&t, &bound, Endpoints::TrueCones)
            .unwrap()
            .is_empty());
        assert_eq!(
            flow.trace_separatrix(CornerRef::new(0, 0), Direction::Up, &bound),
            Err(FlowError::NoRay(CornerRef::new(0, 0)))
        );
    }

    #[test]
    fn irrational_torus_never_closes() {
        // Square torus with the top glued to the bottom shifted by √2 − 1.
        let d = 2;
        let a = QuadExt::sqrt_d(d) - QuadExt::one(d);
        let z = QuadExt::zero(d);
        let one = QuadExt::one(d);
        let poly = vec![
            Vec2::new(z.clone(), z.clone()),
            Vec2::new(a.clone(), z.clone()),
            Vec2::new(one.clone(), z.clone()),
            Vec2::new(one.clone(), one.clone()),
            Vec2::new(&one - &a, one.clone()),
            Vec2::new(z.clone(), one.clone()),
        ];
        // Bottom [0,a] ↔ top [1−a,1]; bottom [a,1] ↔ top [0,1−a].
        let e = EdgeRef::new;
        let t = PolygonNet::new(
            vec![poly],
            &[(e(0, 0), e(0, 3)), (e(0, 1), e(0, 4)), (e(0, 2), e(0, 5))],
            [CornerRef::new(0, 0)],
        )
        .unwrap();
        assert!(crate::surface::validate_surface(&t).is_valid());
        let bound = QuadExt::from_int(100, d);
        let scs = find_vertical_saddle_connections(&t, &bound, Endpoints::Augmented).unwrap();
        assert!(scs.is_empty());
        let flow = Flow::new(&t, Endpoints::Augmented);
        let starts = flow.separatrix_starts(Direction::Up);
        assert!(!starts.is_empty());
        for c in starts {
            assert!(matches!(
                flow.trace_separatrix(c, Direction::Up, &bound).unwrap(),
                TraceOutcome::ExceededBound { .. }
            ));
        }
    }
}
