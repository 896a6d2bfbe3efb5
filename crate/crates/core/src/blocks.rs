//! The building blocks `P_n` (one cylinder) and `M_n` (one minimal
//! component), with their half-turn involutions and the catalog of vertical
//! Weierstrass edges `s_i`.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::QuadExt;
use crate::flow::{Direction, Endpoints, Flow, FlowError, PieceHint, SaddleConnection, TraceOutcome};
use crate::geometry::Vec2;
use crate::involution::{verify_involution, FixedPoint, Involution, InvolutionError};
use crate::surface::{cone_points, CornerRef, EdgeRef, PolygonNet, SurfaceError};
use crate::unionfind::DisjointSets;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("block size must be at least {min}, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("shear parameter {0} is rational")]
    RationalShear(QuadExt),
    #[error("shear parameter must be positive")]
    NonPositiveShear,
    #[error("catalog edge s_{0} is not a Weierstrass edge")]
    NotWeierstrass(usize),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Involution(#[from] InvolutionError),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    P,
    M,
}

/// One vertical Weierstrass edge `s_label`: the upward edge `right` on the
/// right-hand side glued to the downward edge `left`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEdge {
    pub label: usize,
    pub right: EdgeRef,
    pub left: EdgeRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub kind: BlockKind,
    pub n: usize,
    pub alpha: Option<QuadExt>,
    pub catalog: Vec<CatalogEdge>,
    /// Closed horizontal transversal carrying the rotation (M blocks only).
    pub transversal: Option<(usize, Vec2, Vec2)>,
}

impl BlockSpec {
    pub fn hint(&self) -> Option<PieceHint> {
        self.transversal.as_ref().map(|(p, a, b)| PieceHint {
            polygon: *p,
            start: a.clone(),
            end: b.clone(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Block {
    pub surface: PolygonNet,
    pub involution: Involution,
    pub spec: BlockSpec,
}

fn marks_for_regular_orbits(s: &PolygonNet) -> Vec<CornerRef> {
    cone_points(s)
        .into_iter()
        .filter(|c| c.closed && !c.is_true_cone)
        .map(|c| c.orbit[0])
        .collect()
}

/// `P_n`: the `1 × n` rectangle with its sides cut into unit segments
/// `s_1..s_n` (left side top to bottom, right side bottom to top) and
/// segments of equal label glued.
pub fn construct_p(n: usize, d: u32) -> Result<Block, BlockError> {
    if n < 1 {
        return Err(BlockError::TooSmall { n, min: 1 });
    }
    let ni = n as i64;
    let mut verts = vec![Vec2::ints(0, 0, d)];
    for j in 0..=ni {
        verts.push(Vec2::ints(1, j, d));
    }
    for j in (1..=ni).rev() {
        verts.push(Vec2::ints(0, j, d));
    }
    let e = |i: usize| EdgeRef::new(0, i);
    let mut gluings = vec![(e(0), e(n + 1))];
    let mut catalog = Vec::with_capacity(n);
    for j in 1..=n {
        gluings.push((e(j), e(n + 1 + j)));
        catalog.push(CatalogEdge {
            label: j,
            right: e(j),
            left: e(n + 1 + j),
        });
    }
    let unmarked = PolygonNet::new(vec![verts.clone()], &gluings, [])?;
    let marks = marks_for_regular_orbits(&unmarked);
    let surface = PolygonNet::new(vec![verts], &gluings, marks)?;
    let involution = Involution::new(vec![0], vec![Vec2::ints(1, ni, d)]);
    Ok(Block {
        surface,
        involution,
        spec: BlockSpec {
            kind: BlockKind::P,
            n,
            alpha: None,
            catalog,
            transversal: None,
        },
    })
}

/// `M_n`: `P_n` sheared vertically so both `s_1` segments sit at height
/// `[n−1, n]`, with the cylinder between them sheared horizontally by `alpha`.
pub fn construct_m(n: usize, alpha: &QuadExt) -> Result<Block, BlockError> {
    if alpha.is_rational() {
        return Err(BlockError::RationalShear(alpha.clone()));
    }
    construct_m_unchecked(n, alpha)
}

/// As [`construct_m`] but accepting any positive shear, including rational
/// ones. Used to study how the flow degenerates.
pub fn construct_m_unchecked(n: usize, alpha: &QuadExt) -> Result<Block, BlockError> {
    if n < 2 {
        return Err(BlockError::TooSmall { n, min: 2 });
    }
    if alpha.sign() <= 0 {
        return Err(BlockError::NonPositiveShear);
    }
    let d = alpha.d();
    let ni = n as i64;
    let p = |x: i64, y: i64| Vec2::ints(x, y, d);
    let one = QuadExt::one(d);

    // Lower triangle: (0,0), (1,n−1), (0,n−1), then down the left side.
    let mut lower = vec![p(0, 0), p(1, ni - 1), p(0, ni - 1)];
    for y in (1..ni - 1).rev() {
        lower.push(p(0, y));
    }
    let strip = vec![
        p(0, ni - 1),
        p(1, ni - 1),
        Vec2::new(alpha + &one, QuadExt::from_int(ni, d)),
        Vec2::new(alpha.clone(), QuadExt::from_int(ni, d)),
    ];
    // Upper triangle: (0,n), (1,n), up the right side to (1,2n−1).
    let mut upper = vec![p(0, ni)];
    for y in ni..=(2 * ni - 1) {
        upper.push(p(1, y));
    }

    let e = EdgeRef::new;
    let (lo, st, up) = (0, 1, 2);
    let mut gluings = vec![
        (e(lo, 0), e(up, n)),
        (e(lo, 1), e(st, 0)),
        (e(st, 1), e(st, 3)),
        (e(st, 2), e(up, 0)),
    ];
    let mut catalog = Vec::with_capacity(n - 1);
    for m in 2..=n {
        gluings.push((e(up, m - 1), e(lo, m)));
        catalog.push(CatalogEdge {
            label: m,
            right: e(up, m - 1),
            left: e(lo, m),
        });
    }
    let polys = vec![lower, strip, upper];
    let unmarked = PolygonNet::new(polys.clone(), &gluings, [])?;
    let marks = marks_for_regular_orbits(&unmarked);
    let surface = PolygonNet::new(polys, &gluings, marks)?;
    let tri_center = p(1, 2 * ni - 1);
    let strip_center = Vec2::new(alpha + &one, QuadExt::from_int(2 * ni - 1, d));
    let involution = Involution::new(vec![up, st, lo], vec![tri_center.clone(), strip_center, tri_center]);
    Ok(Block {
        surface,
        involution,
        spec: BlockSpec {
            kind: BlockKind::M,
            n,
            alpha: Some(alpha.clone()),
            catalog,
            transversal: Some((st, p(0, ni - 1), p(1, ni - 1))),
        },
    })
}

/// The catalog edges as saddle connections, each checked to be vertical,
/// of length one, and with midpoint fixed by the involution.
pub fn block_weierstrass_edges(block: &Block) -> Result<Vec<SaddleConnection>, BlockError> {
    let s = &block.surface;
    let report = verify_involution(s, &block.involution)?;
    let flow = Flow::new(s, Endpoints::Augmented);
    let one = QuadExt::one(s.d());
    let mut out = Vec::with_capacity(block.spec.catalog.len());
    for entry in &block.spec.catalog {
        let start = CornerRef::new(entry.right.polygon, entry.right.edge);
        let sc = match flow.trace_separatrix(start, Direction::Up, &one)? {
            TraceOutcome::Hit(sc) => sc,
            TraceOutcome::ExceededBound { .. } => return Err(BlockError::NotWeierstrass(entry.label)),
        };
        let key = entry.right.min(entry.left);
        let fixed = report
            .fixed_points
            .iter()
            .any(|f| matches!(f, FixedPoint::EdgeMidpoint { edge, .. } if *edge == key));
        let along = sc.path.len() == 1 && sc.path[0].along_edge == Some(entry.right);
        if sc.length != one || !fixed || !along {
            return Err(BlockError::NotWeierstrass(entry.label));
        }
        out.push(sc);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("need at least one point")]
    Empty,
    #[error("points must lie in [0, 1)")]
    OutOfRange,
    #[error("points must be strictly increasing")]
    NotIncreasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CirclePoint {
    X(usize),
    Y(usize),
}

/// Classes of `{x_i} ∪ {y_i}` (with `y_i = −x_i`) under the identifications
/// made by the maps `x ↦ x + y_{i+1} − x_i` from `[x_i, x_{i+1}]` onto
/// `[y_{i+1}, y_i]`. Only the interval endpoints are marked points, so the
/// classes are generated by `x_i ~ y_{i+1}` and `x_{i+1} ~ y_i`.
pub fn lemma_technical_classes(points: &[BigRational]) -> Result<Vec<Vec<CirclePoint>>, LemmaError> {
    let n = points.len();
    if n == 0 {
        return Err(LemmaError::Empty);
    }
    let one = BigRational::one();
    if points.iter().any(|x| x < &BigRational::zero() || x >= &one) {
        return Err(LemmaError::OutOfRange);
    }
    if points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LemmaError::NotIncreasing);
    }
    // Index i for x_i, n + i for y_i.
    let mut ds = DisjointSets::new(2 * n);
    for i in 0..n {
        let j = (i + 1) % n;
        ds.union(i, n + j);
        ds.union(j, n + i);
    }
    Ok(ds
        .groups()
        .into_iter()
        .map(|g| {
            g.into_iter()
                .map(|k| {
                    if k < n {
                        CirclePoint::X(k)
                    } else {
                        CirclePoint::Y(k - n)
                    }
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{area, genus, stratum_signature, total_cone_angle, validate_surface, ConeCount};

    fn sqrt2() -> QuadExt {
        QuadExt::sqrt_d(2)
    }

    #[test]
    fn p3_table() {
        let b = construct_p(3, 2).unwrap();
        assert!(validate_surface(&b.surface).is_valid());
        assert_eq!(genus(&b.surface), 2);
        assert_eq!(stratum_signature(&b.surface), vec![2]);
        assert_eq!(total_cone_angle(&b.surface, ConeCount::All), 3);
        let rep = verify_involution(&b.surface, &b.involution).unwrap();
        assert_eq!(rep.fixed_points.len(), 6);
        assert!(rep.is_hyperelliptic);
        assert_eq!(block_weierstrass_edges(&b).unwrap().len(), 3);
    }

    #[test]
    fn small_blocks_are_marked_tori() {
        for n in 1..=2 {
            let b = construct_p(n, 2).unwrap();
            assert_eq!(genus(&b.surface), 1);
            assert!(stratum_signature(&b.surface).is_empty());
            assert_eq!(block_weierstrass_edges(&b).unwrap().len(), n);
        }
        let m2 = construct_m(2, &sqrt2()).unwrap();
        assert!(validate_surface(&m2.surface).is_valid());
        assert_eq!(genus(&m2.surface), 1);
        assert_eq!(block_weierstrass_edges(&m2).unwrap().len(), 1);
    }

    #[test]
    fn m_blocks() {
        for n in 2..=6 {
            let b = construct_m(n, &sqrt2()).unwrap();
            assert!(validate_surface(&b.surface).is_valid(), "M_{n}");
            assert_eq!(area(&b.surface), QuadExt::from_int(n as i64, 2));
            assert_eq!(genus(&b.surface), genus(&construct_p(n, 2).unwrap().surface));
            let rep = verify_involution(&b.surface, &b.involution).unwrap();
            assert!(rep.is_hyperelliptic, "M_{n}");
            assert_eq!(block_weierstrass_edges(&b).unwrap().len(), n - 1);
        }
        assert!(matches!(
            construct_m(3, &QuadExt::from_ratio(1, 2, 2)),
            Err(BlockError::RationalShear(_))
        ));
        assert!(matches!(construct_m(1, &sqrt2()), Err(BlockError::TooSmall { .. })));
    }

    #[test]
    fn classes_small() {
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        assert_eq!(
            lemma_technical_classes(&[r(0, 1)]).unwrap(),
            vec![vec![CirclePoint::X(0), CirclePoint::Y(0)]]
        );
        let four: Vec<_> = (0..4).map(|i| r(i, 4)).collect();
        let classes = lemma_technical_classes(&four).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|c| c.len() == 4));
        assert_eq!(
            lemma_technical_classes(&[r(1, 2), r(1, 2)]),
            Err(LemmaError::NotIncreasing)
        );
        assert_eq!(lemma_technical_classes(&[r(3, 2)]), Err(LemmaError::OutOfRange));
    }
}
