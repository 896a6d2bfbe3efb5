//! Realizes a diagram as a surface: one block per vertex, a slit per full
//! edge, slit sides cross-glued by translation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{construct_m, construct_p, Block, BlockError, BlockKind, CatalogEdge};
use crate::diagram::{validate_diagram, Diagram, DiagramViolation, Style, VertexKind};
use crate::field::QuadExt;
use crate::flow::PieceHint;
use crate::geometry::Vec2;
use crate::involution::{verify_involution, Involution};
use crate::surface::{validate_surface, CornerRef, EdgeRef, PolygonNet, SurfaceError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error("diagram is invalid: {0:?}")]
    InvalidDiagram(Vec<DiagramViolation>),
    #[error("vertex {0} has more than one dotted half-edge or a dotted half-edge on a periodic vertex")]
    Unsupported(usize),
    #[error("vertex {0} would need the block M_1")]
    NeedsM1(usize),
    #[error("vertex {0} has no half-edges")]
    EmptyVertex(usize),
    #[error("shear {0} is rational")]
    RationalAlpha(QuadExt),
    #[error("vertex {0} has no Weierstrass edge left to slit")]
    Exhausted(usize),
    #[error("assembled surface is inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slit {
    pub full_edge: usize,
    pub vertices: [usize; 2],
    pub labels: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlacedBlock {
    pub vertex: usize,
    pub kind: BlockKind,
    pub n: usize,
    pub first_polygon: usize,
    /// Catalog edges in assembled-surface numbering.
    pub catalog: Vec<CatalogEdge>,
}

#[derive(Clone, Debug)]
pub struct Assembly {
    pub surface: PolygonNet,
    pub involution: Involution,
    /// Diagram vertex id of each polygon.
    pub provenance: Vec<usize>,
    pub blocks: Vec<PlacedBlock>,
    pub slits: Vec<Slit>,
    pub hints: Vec<PieceHint>,
}

/// Block choice for a vertex: `P_n` when every half-edge is solid and `M_n`
/// when exactly one is dotted.
fn block_for(
    kind: VertexKind,
    id: usize,
    degree: usize,
    dotted: usize,
    alpha: &QuadExt,
) -> Result<Block, AssemblyError> {
    if degree == 0 {
        return Err(AssemblyError::EmptyVertex(id));
    }
    match (kind, dotted) {
        (VertexKind::Periodic, 0) => Ok(construct_p(degree, alpha.d())?),
        (VertexKind::Minimal, 1) if degree == 1 => Err(AssemblyError::NeedsM1(id)),
        (VertexKind::Minimal, 1) => Ok(construct_m(degree, alpha)?),
        _ => Err(AssemblyError::Unsupported(id)),
    }
}

pub fn realize_diagram(dg: &Diagram, alpha: &QuadExt) -> Result<Assembly, AssemblyError> {
    let report = validate_diagram(dg);
    if !report.is_valid() {
        return Err(AssemblyError::InvalidDiagram(report.violations));
    }
    if alpha.is_rational() {
        return Err(AssemblyError::RationalAlpha(alpha.clone()));
    }
    let d = alpha.d();
    let mut dotted = vec![0usize; dg.vertices.len()];
    let index = dg.vertex_index();
    for he in &dg.half_edges {
        if he.style == Style::Dotted {
            dotted[index[&he.vertex]] += 1;
        }
    }
    // Blocks are laid out left to right with a gap wider than any block.
    let step = QuadExt::from_rational(alpha.floor().into(), d) + QuadExt::from_int(3, d);
    let mut polygons: Vec<Vec<Vec2>> = Vec::new();
    let mut gluings: BTreeMap<EdgeRef, EdgeRef> = BTreeMap::new();
    let mut marks: Vec<CornerRef> = Vec::new();
    let mut polygon_map = Vec::new();
    let mut centers = Vec::new();
    let mut provenance = Vec::new();
    let mut blocks = Vec::new();
    let mut hints = Vec::new();
    for (vi, v) in dg.vertices.iter().enumerate() {
        let degree = report.degrees[&v.id];
        let block = block_for(v.kind, v.id, degree, dotted[vi], alpha)?;
        let base = polygons.len();
        let shift = Vec2::new(&step * &QuadExt::from_int(vi as i64, d), QuadExt::zero(d));
        let shift2 = Vec2::new(&shift.x + &shift.x, QuadExt::zero(d));
        for p in block.surface.polygons() {
            polygons.push(p.vertices().iter().map(|x| x + &shift).collect());
            provenance.push(v.id);
        }
        for (e, f) in block.surface.gluings() {
            let (e, f) = (
                EdgeRef::new(e.polygon + base, e.edge),
                EdgeRef::new(f.polygon + base, f.edge),
            );
            gluings.insert(e, f);
            gluings.insert(f, e);
        }
        marks.extend(
            block
                .surface
                .marks()
                .iter()
                .map(|c| CornerRef::new(c.polygon + base, c.vertex)),
        );
        for (p, c) in block.involution.polygon_map.iter().zip(&block.involution.centers) {
            polygon_map.push(p + base);
            centers.push(c + &shift2);
        }
        if let Some(h) = block.spec.hint() {
            hints.push(PieceHint {
                polygon: h.polygon + base,
                start: &h.start + &shift,
                end: &h.end + &shift,
            });
        }
        let shift_edge = |e: EdgeRef| EdgeRef::new(e.polygon + base, e.edge);
        blocks.push(PlacedBlock {
            vertex: v.id,
            kind: block.spec.kind,
            n: block.spec.n,
            first_polygon: base,
            catalog: block
                .spec
                .catalog
                .iter()
                .map(|c| CatalogEdge {
                    label: c.label,
                    right: shift_edge(c.right),
                    left: shift_edge(c.left),
                })
                .collect(),
        });
    }

    let mut next_label = vec![0usize; dg.vertices.len()];
    let mut slits = Vec::with_capacity(dg.full_edges.len());
    for (fi, [ha, hb]) in dg.full_edges.iter().enumerate() {
        let u = index[&dg.half_edges[*ha].vertex];
        let v = index[&dg.half_edges[*hb].vertex];
        let mut take = |w: usize| -> Result<CatalogEdge, AssemblyError> {
            let entry = blocks[w]
                .catalog
                .get(next_label[w])
                .cloned()
                .ok_or(AssemblyError::Exhausted(dg.vertices[w].id))?;
            next_label[w] += 1;
            Ok(entry)
        };
        let eu = take(u)?;
        let ev = take(v)?;
        gluings.insert(eu.left, ev.right);
        gluings.insert(ev.right, eu.left);
        gluings.insert(ev.left, eu.right);
        gluings.insert(eu.right, ev.left);
        slits.push(Slit {
            full_edge: fi,
            vertices: [dg.vertices[u].id, dg.vertices[v].id],
            labels: [eu.label, ev.label],
        });
    }

    let pairs: Vec<(EdgeRef, EdgeRef)> = gluings.iter().filter(|(e, f)| e < f).map(|(e, f)| (*e, *f)).collect();
    let surface = PolygonNet::new(polygons, &pairs, marks)?;
    let rep = validate_surface(&surface);
    if !rep.is_valid() {
        return Err(AssemblyError::Inconsistent(format!("{:?}", rep.violations)));
    }
    let involution = Involution::new(polygon_map, centers);
    verify_involution(&surface, &involution).map_err(|e| AssemblyError::Inconsistent(e.to_string()))?;
    Ok(Assembly {
        surface,
        involution,
        provenance,
        blocks,
        slits,
        hints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{build_m_central, build_p_central, Diagram, HalfEdge, Vertex};
    use crate::surface::{genus, stratum_signature};

    fn sqrt2() -> QuadExt {
        QuadExt::sqrt_d(2)
    }

    #[test]
    fn two_blocks() {
        let dg = build_p_central(4, 2, 0).unwrap();
        let a = realize_diagram(&dg, &sqrt2()).unwrap();
        assert_eq!(genus(&a.surface), 2);
        assert_eq!(stratum_signature(&a.surface), vec![1, 1]);
        let rep = verify_involution(&a.surface, &a.involution).unwrap();
        assert!(rep.is_hyperelliptic);
        assert_eq!(a.slits.len(), 1);
    }

    #[test]
    fn single_blocks() {
        let dg = build_m_central(3, 0, 1).unwrap();
        let a = realize_diagram(&dg, &sqrt2()).unwrap();
        assert_eq!(stratum_signature(&a.surface), vec![2]);
        assert_eq!(a.hints.len(), 1);

        let p1 = build_p_central(1, 1, 0).unwrap();
        let a = realize_diagram(&p1, &sqrt2()).unwrap();
        assert_eq!(genus(&a.surface), 1);
    }

    #[test]
    fn unsupported_vertices() {
        let dg = Diagram {
            vertices: vec![Vertex {
                id: 0,
                kind: VertexKind::Minimal,
            }],
            half_edges: vec![
                HalfEdge {
                    vertex: 0,
                    style: Style::Dotted,
                },
                HalfEdge {
                    vertex: 0,
                    style: Style::Dotted,
                },
            ],
            full_edges: vec![],
        };
        assert_eq!(
            realize_diagram(&dg, &sqrt2()).unwrap_err(),
            AssemblyError::Unsupported(0)
        );
        let dg = Diagram {
            vertices: vec![Vertex {
                id: 0,
                kind: VertexKind::Minimal,
            }],
            half_edges: vec![HalfEdge {
                vertex: 0,
                style: Style::Dotted,
            }],
            full_edges: vec![],
        };
        assert_eq!(realize_diagram(&dg, &sqrt2()).unwrap_err(), AssemblyError::NeedsM1(0));
        let half = QuadExt::from_ratio(1, 2, 2);
        let p1 = build_p_central(1, 1, 0).unwrap();
        assert!(matches!(
            realize_diagram(&p1, &half),
            Err(AssemblyError::RationalAlpha(_))
        ));
    }
}
