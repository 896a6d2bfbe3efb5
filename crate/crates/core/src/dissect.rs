//! Dissection of a decomposed hyperelliptic surface: cut along the component
//! boundaries, heal each slit side to its involution partner, and read off the
//! invariant component diagram.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Diagram, HalfEdge, Style, Vertex, VertexKind};
use crate::field::QuadExt;
use crate::flow::{find_vertical_saddle_connections, Decomposition, Endpoints, FlowError};
use crate::geometry::{in_sector, Vec2};
use crate::involution::{quotient_genus, Involution, InvolutionError};
use crate::surface::{cone_points, validate_surface, CornerRef, EdgeRef, PolygonNet, SurfaceError};
use crate::unionfind::DisjointSets;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DissectError {
    #[error("involution does not carry the cut surface onto itself at polygon {0}")]
    NotInvariant(usize),
    #[error("boundary edge {0:?} has no distinct involution partner in its component")]
    UnpairedBoundary(EdgeRef),
    #[error("component {0} is not mapped onto itself by the involution")]
    ComponentMoved(usize),
    #[error("healed piece {piece} is not a translation surface: {reason}")]
    InvalidPiece { piece: usize, reason: String },
    #[error("{slits} slit pairs for {pieces} pieces do not form a tree")]
    NotATree { slits: usize, pieces: usize },
    #[error("saddle connection {0} between two components has no partner across them")]
    UnpairedSlit(usize),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Involution(#[from] InvolutionError),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

#[derive(Clone, Debug)]
pub struct HealedPiece {
    pub net: PolygonNet,
    pub involution: Involution,
    pub kind: VertexKind,
    /// Healed edge pairs, each with the saddle connection it came from.
    pub healed: Vec<(EdgeRef, EdgeRef, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlitPair {
    pub a: usize,
    pub b: usize,
    /// The two saddle connections forming the slit, swapped by the involution.
    pub connections: [usize; 2],
}

#[derive(Clone, Debug)]
pub struct Dissection {
    pub pieces: Vec<HealedPiece>,
    pub slit_pairs: Vec<SlitPair>,
    /// Involution image of each saddle connection of the decomposition.
    pub connection_image: Vec<usize>,
}

/// Transfers a half-turn involution of `s` to a refinement whose polygons
/// came from `origin[q]`.
pub fn lift_involution(refined: &PolygonNet, origin: &[usize], inv: &Involution) -> Result<Involution, DissectError> {
    let n = refined.num_polygons();
    let mut map = vec![usize::MAX; n];
    let mut centers = Vec::with_capacity(n);
    for q in 0..n {
        let p = origin[q];
        let c = &inv.centers[p];
        let target = inv.polygon_map[p];
        let first = c - &refined.polygon(q).vertices()[0];
        let image = (0..n)
            .filter(|&r| origin[r] == target && refined.polygon(r).len() == refined.polygon(q).len())
            .find(|&r| {
                let verts = refined.polygon(r).vertices();
                verts.contains(&first) && refined.polygon(q).vertices().iter().all(|v| verts.contains(&(c - v)))
            })
            .ok_or(DissectError::NotInvariant(q))?;
        map[q] = image;
        centers.push(c.clone());
    }
    let lifted = Involution::new(map, centers);
    lifted.check(refined)?;
    Ok(lifted)
}

fn restrict(inv: &Involution, polygons: &[usize]) -> Result<Involution, usize> {
    let local: BTreeMap<usize, usize> = polygons.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let mut map = Vec::with_capacity(polygons.len());
    let mut centers = Vec::with_capacity(polygons.len());
    for &q in polygons {
        let img = inv.polygon_map[q];
        map.push(*local.get(&img).ok_or(q)?);
        centers.push(inv.centers[q].clone());
    }
    Ok(Involution::new(map, centers))
}

/// Cuts along every component boundary and heals each slit side to its
/// partner under the involution.
pub fn dissect(s: &PolygonNet, inv: &Involution, dec: &Decomposition) -> Result<Dissection, DissectError> {
    let cut = &dec.cut;
    let lifted = lift_involution(&cut.net, &cut.origin, inv)?;
    let checked = lifted.check(&cut.net)?;
    if let Some(q) = cut.origin.iter().position(|&o| o >= s.num_polygons()) {
        return Err(DissectError::NotInvariant(q));
    }

    // Points that were singular in the uncut surface stay marked.
    let mut singular_corner = BTreeSet::new();
    for cp in cone_points(&cut.net) {
        if cp.is_singular() {
            singular_corner.extend(cp.orbit.iter().copied());
        }
    }

    let mut connection_image = vec![usize::MAX; dec.connections.len()];
    for (&e, &k) in &cut.cut_edges {
        connection_image[k] = cut.cut_edges[&checked.edge_image(e)];
    }

    let mut pieces = Vec::with_capacity(cut.pieces.len());
    for (pi, piece) in cut.pieces.iter().enumerate() {
        let inv_local = restrict(&lifted, &piece.cut_polygons).map_err(|_| DissectError::ComponentMoved(pi))?;
        let mut gluings = piece.net.gluings();
        let mut healed = Vec::new();
        for (&e, &k) in &piece.boundary {
            let global = EdgeRef::new(piece.cut_polygons[e.polygon], e.edge);
            let image = checked.edge_image(global);
            let (ip, il) = cut.location[image.polygon];
            let local_image = EdgeRef::new(il, image.edge);
            if ip != pi || local_image == e || !piece.boundary.contains_key(&local_image) {
                return Err(DissectError::UnpairedBoundary(e));
            }
            if e < local_image {
                gluings.push((e, local_image));
                healed.push((e, local_image, k));
            }
        }
        let polys: Vec<Vec<Vec2>> = piece.net.polygons().iter().map(|p| p.vertices().to_vec()).collect();
        let marks: Vec<CornerRef> = piece
            .net
            .corners()
            .filter(|c| singular_corner.contains(&CornerRef::new(piece.cut_polygons[c.polygon], c.vertex)))
            .collect();
        let net = PolygonNet::new(polys, &gluings, marks)?;
        let report = validate_surface(&net);
        if !report.is_valid() {
            return Err(DissectError::InvalidPiece {
                piece: pi,
                reason: format!("{:?}", report.violations),
            });
        }
        let kind = if dec.components[pi].kind.is_periodic() {
            VertexKind::Periodic
        } else {
            VertexKind::Minimal
        };
        pieces.push(HealedPiece {
            net,
            involution: inv_local,
            kind,
            healed,
        });
    }

    // Saddle connections separating two components come in swapped pairs.
    let mut sides: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (pi, piece) in cut.pieces.iter().enumerate() {
        for &k in piece.boundary.values() {
            sides.entry(k).or_default().insert(pi);
        }
    }
    let mut slit_pairs = Vec::new();
    for (&k, set) in &sides {
        if set.len() != 2 {
            continue;
        }
        let k2 = connection_image[k];
        if k2 == k || sides.get(&k2) != Some(set) {
            return Err(DissectError::UnpairedSlit(k));
        }
        if k < k2 {
            let v: Vec<usize> = set.iter().copied().collect();
            slit_pairs.push(SlitPair {
                a: v[0],
                b: v[1],
                connections: [k, k2],
            });
        }
    }
    let mut ds = DisjointSets::new(pieces.len());
    let acyclic = slit_pairs.iter().all(|sp| ds.union(sp.a, sp.b));
    if !acyclic || slit_pairs.len() + 1 != pieces.len() {
        return Err(DissectError::NotATree {
            slits: slit_pairs.len(),
            pieces: pieces.len(),
        });
    }
    Ok(Dissection {
        pieces,
        slit_pairs,
        connection_image,
    })
}

/// Component of the cut surface containing the upward ray from `c`.
fn piece_of_ray(dec: &Decomposition, s: &PolygonNet, c: CornerRef) -> Option<usize> {
    let cut = &dec.cut;
    let point = s.corner_point(c);
    let up = Vec2::up(s.d());
    (0..cut.net.num_polygons())
        .filter(|&q| cut.origin[q] == c.polygon)
        .find_map(|q| {
            let poly = cut.net.polygon(q);
            let v = poly.index_of_vertex(point)?;
            let (a, b) = poly.sector(v);
            in_sector(&a, &b, &up).then_some(cut.location[q].0)
        })
}

/// Reads the invariant component diagram off a decomposed surface.
pub fn extract_diagram(s: &PolygonNet, inv: &Involution, dec: &Decomposition) -> Result<Diagram, DissectError> {
    let dis = dissect(s, inv, dec)?;
    let bound = dec
        .connections
        .iter()
        .map(|c| c.length.clone())
        .max()
        .unwrap_or_else(|| QuadExt::zero(s.d()));
    let mut dotted = vec![0usize; dis.pieces.len()];
    for &c in &dec.broken {
        if let Some(p) = piece_of_ray(dec, s, c) {
            dotted[p] += 1;
        }
    }
    let mut dg = Diagram::default();
    // Half-edge index for each (piece, decomposition saddle connection).
    let mut half_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (pi, piece) in dis.pieces.iter().enumerate() {
        dg.vertices.push(Vertex {
            id: pi,
            kind: piece.kind,
        });
        let healed_sc: BTreeMap<EdgeRef, usize> = piece.healed.iter().flat_map(|&(a, b, k)| [(a, k), (b, k)]).collect();
        for sc in find_vertical_saddle_connections(&piece.net, &bound, Endpoints::Augmented)? {
            let h = dg.half_edges.len();
            dg.half_edges.push(HalfEdge {
                vertex: pi,
                style: Style::Solid,
            });
            for seg in &sc.path {
                if let Some(k) = seg.along_edge.and_then(|e| healed_sc.get(&e)) {
                    half_of.insert((pi, *k), h);
                    half_of.insert((pi, dis.connection_image[*k]), h);
                }
            }
        }
        for _ in 0..dotted[pi] {
            dg.half_edges.push(HalfEdge {
                vertex: pi,
                style: Style::Dotted,
            });
        }
    }
    for sp in &dis.slit_pairs {
        let k = sp.connections[0];
        if let (Some(&ha), Some(&hb)) = (half_of.get(&(sp.a, k)), half_of.get(&(sp.b, k))) {
            dg.full_edges.push([ha, hb]);
        }
    }
    Ok(dg)
}

/// Results of the structural checks on a dissection.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    /// Every component is mapped onto itself by the involution.
    pub components_invariant: bool,
    /// Between any two components the boundary saddle connections come in an
    /// even number, swapped in pairs by the involution.
    pub boundary_pairs_even: bool,
    /// Every healed piece is a valid translation surface.
    pub pieces_valid: bool,
    /// Slit pairs form a spanning tree on the pieces.
    pub tree: bool,
    /// Every healed piece has quotient genus zero under its involution.
    pub quotients_spherical: bool,
}

impl InvariantReport {
    pub fn all(&self) -> bool {
        self.components_invariant
            && self.boundary_pairs_even
            && self.pieces_valid
            && self.tree
            && self.quotients_spherical
    }
}

pub fn check_invariants(s: &PolygonNet, inv: &Involution, dec: &Decomposition) -> InvariantReport {
    let mut rep = InvariantReport::default();
    let Ok(lifted) = lift_involution(&dec.cut.net, &dec.cut.origin, inv) else {
        return rep;
    };
    rep.components_invariant = dec
        .cut
        .pieces
        .iter()
        .all(|p| restrict(&lifted, &p.cut_polygons).is_ok());
    let Ok(dis) = dissect(s, inv, dec) else {
        return rep;
    };
    let mut between: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for sp in &dis.slit_pairs {
        between.entry((sp.a, sp.b)).or_default().extend(sp.connections);
    }
    rep.boundary_pairs_even = between.values().all(|ks| {
        ks.len() % 2 == 0
            && ks
                .iter()
                .all(|&k| dis.connection_image[k] != k && ks.contains(&dis.connection_image[k]))
    });
    rep.pieces_valid = dis.pieces.iter().all(|p| validate_surface(&p.net).is_valid());
    rep.tree = true;
    rep.quotients_spherical = dis
        .pieces
        .iter()
        .all(|p| quotient_genus(&p.net, &p.involution) == Ok(0));
    rep
}
