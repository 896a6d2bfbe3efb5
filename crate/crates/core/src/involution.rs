//! Half-turn involutions of polygon nets and their fixed points.
//!
//! An [`Involution`] sends each polygon `P` onto a polygon `Q` by
//! `v ↦ c_P − v`. Half-turns preserve orientation, so the image of a
//! counter-clockwise polygon is again counter-clockwise.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::QuadExt;
use crate::geometry::{strictly_inside, Vec2};
use crate::surface::{cone_points, genus, CornerRef, EdgeRef, PolygonNet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Involution {
    pub polygon_map: Vec<usize>,
    pub centers: Vec<Vec2>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InvolutionError {
    #[error("involution covers {0} polygons, surface has {1}")]
    WrongSize(usize, usize),
    #[error("polygon map is not an involution at polygon {0}")]
    NotInvolutive(usize),
    #[error("polygons {0} and {1} use different half-turn centers")]
    CenterMismatch(usize, usize),
    #[error("half-turn of polygon {0} is not polygon {1}")]
    NotIsometric(usize, usize),
    #[error("involution does not respect the gluing at {0:?}")]
    GluingIncompatible(EdgeRef),
    #[error("fixed-point count {fixed} is not 2g+2 = {expected}")]
    NotHyperelliptic { fixed: usize, expected: usize },
    #[error("quotient genus (2 + 2·{genus} − {fixed})/4 is not a nonnegative integer")]
    Inconsistent { genus: u32, fixed: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FixedPoint {
    /// Center of a polygon mapped to itself.
    Interior { polygon: usize, point: Vec2 },
    /// Midpoint of a glued edge pair mapped to itself.
    EdgeMidpoint { edge: EdgeRef, point: Vec2 },
    /// A corner orbit mapped to itself.
    Vertex {
        corner: CornerRef,
        point: Vec2,
        is_true_cone: bool,
    },
}

impl FixedPoint {
    pub fn is_true_cone(&self) -> bool {
        matches!(self, FixedPoint::Vertex { is_true_cone: true, .. })
    }

    pub fn point(&self) -> &Vec2 {
        match self {
            FixedPoint::Interior { point, .. }
            | FixedPoint::EdgeMidpoint { point, .. }
            | FixedPoint::Vertex { point, .. } => point,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionReport {
    pub fixed_points: Vec<FixedPoint>,
    pub is_hyperelliptic: bool,
}

/// An involution checked against a particular surface, with the induced maps
/// on edges and corners.
#[derive(Clone, Debug)]
pub struct CheckedInvolution<'a> {
    net: &'a PolygonNet,
    inv: &'a Involution,
    // Offset r with vertex i of P ↦ vertex i + r of image(P).
    offsets: Vec<usize>,
}

impl Involution {
    pub fn new(polygon_map: Vec<usize>, centers: Vec<Vec2>) -> Self {
        Involution { polygon_map, centers }
    }

    /// Checks the involution on `net` and returns the induced maps.
    pub fn check<'a>(&'a self, net: &'a PolygonNet) -> Result<CheckedInvolution<'a>, InvolutionError> {
        let n = net.num_polygons();
        if self.polygon_map.len() != n || self.centers.len() != n {
            return Err(InvolutionError::WrongSize(self.polygon_map.len(), n));
        }
        let mut offsets = Vec::with_capacity(n);
        for p in 0..n {
            let q = self.polygon_map[p];
            if q >= n || self.polygon_map[q] != p {
                return Err(InvolutionError::NotInvolutive(p));
            }
            if self.centers[p] != self.centers[q] {
                return Err(InvolutionError::CenterMismatch(p, q));
            }
            let c = &self.centers[p];
            let src = net.polygon(p).vertices();
            let dst = net.polygon(q).vertices();
            if src.len() != dst.len() {
                return Err(InvolutionError::NotIsometric(p, q));
            }
            let first = c - &src[0];
            let r = dst
                .iter()
                .position(|v| *v == first)
                .ok_or(InvolutionError::NotIsometric(p, q))?;
            let m = src.len();
            if (0..m).any(|i| dst[(i + r) % m] != c - &src[i]) {
                return Err(InvolutionError::NotIsometric(p, q));
            }
            offsets.push(r);
        }
        let checked = CheckedInvolution {
            net,
            inv: self,
            offsets,
        };
        for e in net.edges() {
            let ie = checked.edge_image(e);
            match (net.partner(e), net.partner(ie)) {
                (None, None) => {}
                (Some(f), Some(g)) if g == checked.edge_image(f) => {
                    let t = net.gluing_translation(e).expect("glued");
                    let expected = &(&self.centers[f.polygon] - &self.centers[e.polygon]) - &t;
                    if net.gluing_translation(ie).expect("glued") != expected {
                        return Err(InvolutionError::GluingIncompatible(e));
                    }
                }
                _ => return Err(InvolutionError::GluingIncompatible(e)),
            }
        }
        Ok(checked)
    }
}

impl<'a> CheckedInvolution<'a> {
    pub fn polygon_image(&self, p: usize) -> usize {
        self.inv.polygon_map[p]
    }

    pub fn edge_image(&self, e: EdgeRef) -> EdgeRef {
        let q = self.inv.polygon_map[e.polygon];
        let m = self.net.polygon(q).len();
        EdgeRef::new(q, (e.edge + self.offsets[e.polygon]) % m)
    }

    pub fn corner_image(&self, c: CornerRef) -> CornerRef {
        let q = self.inv.polygon_map[c.polygon];
        let m = self.net.polygon(q).len();
        CornerRef::new(q, (c.vertex + self.offsets[c.polygon]) % m)
    }

    pub fn point_image(&self, polygon: usize, v: &Vec2) -> (usize, Vec2) {
        (self.inv.polygon_map[polygon], &self.inv.centers[polygon] - v)
    }

    pub fn fixed_points(&self) -> Vec<FixedPoint> {
        let net = self.net;
        let d = net.d();
        let half = QuadExt::from_ratio(1, 2, d);
        let mut out = Vec::new();
        for p in 0..net.num_polygons() {
            if self.inv.polygon_map[p] == p {
                let mid = self.inv.centers[p].scale(&half);
                if strictly_inside(net.polygon(p).vertices(), &mid) {
                    out.push(FixedPoint::Interior { polygon: p, point: mid });
                }
            }
        }
        let mut seen_edges = std::collections::BTreeSet::new();
        for e in net.edges() {
            let class_rep = match net.partner(e) {
                Some(f) => e.min(f),
                None => e,
            };
            if !seen_edges.insert(class_rep) {
                continue;
            }
            let ie = self.edge_image(e);
            if ie == e || Some(ie) == net.partner(e) {
                let (a, b) = net.edge_points(class_rep);
                out.push(FixedPoint::EdgeMidpoint {
                    edge: class_rep,
                    point: (a + b).scale(&half),
                });
            }
        }
        let index = net.orbit_index();
        for cp in cone_points(net) {
            let c = cp.orbit[0];
            if index[&self.corner_image(c)] == index[&c] {
                out.push(FixedPoint::Vertex {
                    corner: c,
                    point: net.corner_point(c).clone(),
                    is_true_cone: cp.is_true_cone,
                });
            }
        }
        out
    }

    /// Maps corner-orbit indices to the index of their image orbit.
    pub fn orbit_map(&self) -> BTreeMap<usize, usize> {
        let index = self.net.orbit_index();
        index.iter().map(|(c, &i)| (i, index[&self.corner_image(*c)])).collect()
    }
}

pub fn verify_involution(s: &PolygonNet, inv: &Involution) -> Result<InvolutionReport, InvolutionError> {
    let checked = inv.check(s)?;
    let fixed_points = checked.fixed_points();
    let is_hyperelliptic = fixed_points.len() == 2 * genus(s) as usize + 2;
    Ok(InvolutionReport {
        fixed_points,
        is_hyperelliptic,
    })
}

/// Fixed points of a hyperelliptic involution that are not true cone points.
pub fn weierstrass_points(s: &PolygonNet, inv: &Involution) -> Result<Vec<FixedPoint>, InvolutionError> {
    let rep = verify_involution(s, inv)?;
    if !rep.is_hyperelliptic {
        return Err(InvolutionError::NotHyperelliptic {
            fixed: rep.fixed_points.len(),
            expected: 2 * genus(s) as usize + 2,
        });
    }
    Ok(rep.fixed_points.into_iter().filter(|f| !f.is_true_cone()).collect())
}

/// Genus of the quotient by the involution, from `2 − 2h = 2(2 − 2h*) − F`.
pub fn quotient_genus(s: &PolygonNet, inv: &Involution) -> Result<u32, InvolutionError> {
    let rep = verify_involution(s, inv)?;
    let h = genus(s);
    let fixed = rep.fixed_points.len();
    let num = 2 + 2 * h as i64 - fixed as i64;
    if num < 0 || num % 4 != 0 {
        return Err(InvolutionError::Inconsistent { genus: h, fixed });
    }
    Ok((num / 4) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::unit_square_torus;

    fn v(x: i64, y: i64) -> Vec2 {
        Vec2::ints(x, y, 2)
    }

    #[test]
    fn torus_half_turn() {
        let t = unit_square_torus(2);
        let inv = Involution::new(vec![0], vec![v(1, 1)]);
        let rep = verify_involution(&t, &inv).unwrap();
        assert_eq!(rep.fixed_points.len(), 4);
        assert!(rep.is_hyperelliptic);
        assert_eq!(weierstrass_points(&t, &inv).unwrap().len(), 4);
        assert_eq!(quotient_genus(&t, &inv).unwrap(), 0);
    }

    #[test]
    fn wrong_center_is_structural() {
        let t = unit_square_torus(2);
        let inv = Involution::new(vec![0], vec![v(1, 0)]);
        assert_eq!(verify_involution(&t, &inv), Err(InvolutionError::NotIsometric(0, 0)));
        let inv = Involution::new(vec![0, 0], vec![v(1, 1), v(1, 1)]);
        assert!(matches!(
            verify_involution(&t, &inv),
            Err(InvolutionError::WrongSize(..))
        ));
    }

    // Two tori of area 4 joined along two slits, with the involution swapping
    // them. Only two points are fixed, so the quotient has genus one.
    fn swapped_tori() -> (PolygonNet, Involution) {
        let rect = |x0: i64| vec![v(x0, 0), v(x0 + 1, 0), v(x0 + 1, 1), v(x0 + 1, 2), v(x0, 2), v(x0, 1)];
        // Edges: 0 bottom, 1 right-low, 2 right-up, 3 top, 4 left-up, 5 left-low.
        let polys = vec![rect(0), rect(1), rect(3), rect(4)];
        let e = EdgeRef::new;
        let gl = [
            (e(0, 0), e(0, 3)),
            (e(1, 0), e(1, 3)),
            (e(2, 0), e(2, 3)),
            (e(3, 0), e(3, 3)),
            // Torus A: A1 right ↔ A2 left at the upper halves, A2 right ↔ A1 left.
            (e(0, 2), e(1, 4)),
            (e(1, 1), e(0, 5)),
            (e(1, 2), e(0, 4)),
            // Torus B: B1 right ↔ B2 left at the lower halves, B2 right ↔ B1 left.
            (e(2, 1), e(3, 5)),
            (e(3, 1), e(2, 5)),
            (e(3, 2), e(2, 4)),
            // Slits cross-glued between the tori.
            (e(0, 1), e(3, 4)),
            (e(2, 2), e(1, 5)),
        ];
        let s = PolygonNet::new(polys, &gl, []).unwrap();
        let c = v(5, 2);
        let inv = Involution::new(vec![3, 2, 1, 0], vec![c.clone(), c.clone(), c.clone(), c]);
        (s, inv)
    }

    #[test]
    fn genus_two_with_two_fixed_points() {
        let (s, inv) = swapped_tori();
        assert!(crate::surface::validate_surface(&s).is_valid());
        assert_eq!(genus(&s), 2);
        let rep = verify_involution(&s, &inv).unwrap();
        assert_eq!(rep.fixed_points.len(), 2);
        assert!(!rep.is_hyperelliptic);
        assert_eq!(quotient_genus(&s, &inv).unwrap(), 1);
        assert!(matches!(
            weierstrass_points(&s, &inv),
            Err(InvolutionError::NotHyperelliptic { fixed: 2, expected: 6 })
        ));
    }
}
