use std::collections::BTreeMap;

use crate::geometry::{on_segment, strictly_inside, Vec2};
use crate::surface::{CornerRef, EdgeRef, PolygonNet};
use crate::unionfind::DisjointSets;

use super::{FlowError, SaddleConnection};

/// A connected piece left after cutting, with its own polygon numbering.
#[derive(Clone, Debug)]
pub struct Piece {
    pub net: PolygonNet,
    /// Polygon of the cut net for each local polygon.
    pub cut_polygons: Vec<usize>,
    /// Polygon of the uncut surface each local polygon came from.
    pub origin: Vec<usize>,
    /// Local boundary edges created by the cut, with the index of the saddle
    /// connection they lie on.
    pub boundary: BTreeMap<EdgeRef, usize>,
    /// For each boundary edge, the piece and local edge it was glued to.
    pub former_partner: BTreeMap<EdgeRef, (usize, EdgeRef)>,
}

#[derive(Clone, Debug)]
pub struct CutResult {
    /// The surface refined so every cut runs along edges; still fully glued.
    pub net: PolygonNet,
    pub origin: Vec<usize>,
    /// Edges of `net` lying on a cut, with the saddle connection index.
    pub cut_edges: BTreeMap<EdgeRef, usize>,
    pub pieces: Vec<Piece>,
    /// Piece and local polygon index for each polygon of `net`.
    pub location: Vec<(usize, usize)>,
}

/// Slits `s` along the given vertical saddle connections and splits it into
/// connected pieces.
pub fn cut_along(s: &PolygonNet, cuts: &[SaddleConnection]) -> Result<CutResult, FlowError> {
    // Make every crossing point a vertex.
    let mut points = Vec::new();
    for sc in cuts {
        for seg in &sc.path {
            let poly = s.polygon(seg.polygon);
            for q in [&seg.start, &seg.end] {
                for k in 0..poly.len() {
                    let (a, b) = poly.edge(k);
                    if q != a && q != b && on_segment(a, b, q) {
                        points.push((EdgeRef::new(seg.polygon, k), q.clone()));
                    }
                }
            }
        }
    }
    let mut net = s.subdivide(&points).map_err(|e| FlowError::BadCut(e.to_string()))?;
    let mut origin: Vec<usize> = (0..net.num_polygons()).collect();

    // Split polygons along interior chords.
    for sc in cuts {
        for seg in sc.path.iter().filter(|g| g.along_edge.is_none()) {
            let (q, i, j) = find_chord(&net, &origin, seg.polygon, &seg.start, &seg.end)
                .ok_or_else(|| FlowError::BadCut(format!("chord in polygon {}", seg.polygon)))?;
            net = net
                .split_polygon(q, i, j)
                .map_err(|e| FlowError::BadCut(e.to_string()))?;
            origin.push(origin[q]);
        }
    }

    let mut cut_edges = BTreeMap::new();
    for (k, sc) in cuts.iter().enumerate() {
        for seg in &sc.path {
            for q in (0..net.num_polygons()).filter(|&q| origin[q] == seg.polygon) {
                for e in 0..net.polygon(q).len() {
                    let (a, b) = net.polygon(q).edge(e);
                    if on_segment(&seg.start, &seg.end, a) && on_segment(&seg.start, &seg.end, b) {
                        let edge = EdgeRef::new(q, e);
                        cut_edges.insert(edge, k);
                        if let Some(f) = net.partner(edge) {
                            cut_edges.insert(f, k);
                        }
                    }
                }
            }
        }
    }

    let mut ds = DisjointSets::new(net.num_polygons());
    for (e, f) in net.gluings() {
        if !cut_edges.contains_key(&e) {
            ds.union(e.polygon, f.polygon);
        }
    }
    let groups = ds.groups();
    let mut location = vec![(0, 0); net.num_polygons()];
    for (pi, g) in groups.iter().enumerate() {
        for (li, &q) in g.iter().enumerate() {
            location[q] = (pi, li);
        }
    }
    let local = |e: EdgeRef| EdgeRef::new(location[e.polygon].1, e.edge);
    let mut pieces = Vec::with_capacity(groups.len());
    for (pi, g) in groups.iter().enumerate() {
        let polys: Vec<Vec<Vec2>> = g.iter().map(|&q| net.polygon(q).vertices().to_vec()).collect();
        let mut gl = Vec::new();
        let mut boundary = BTreeMap::new();
        let mut former_partner = BTreeMap::new();
        for &q in g {
            for e in 0..net.polygon(q).len() {
                let edge = EdgeRef::new(q, e);
                let Some(f) = net.partner(edge) else { continue };
                if let Some(&k) = cut_edges.get(&edge) {
                    boundary.insert(local(edge), k);
                    former_partner.insert(local(edge), (location[f.polygon].0, local(f)));
                } else if edge < f {
                    gl.push((local(edge), local(f)));
                }
            }
        }
        let marks: Vec<CornerRef> = net
            .marks()
            .iter()
            .filter(|c| location[c.polygon].0 == pi)
            .map(|c| CornerRef::new(location[c.polygon].1, c.vertex))
            .collect();
        let piece_net = PolygonNet::new(polys, &gl, marks).map_err(|e| FlowError::BadCut(e.to_string()))?;
        pieces.push(Piece {
            net: piece_net,
            cut_polygons: g.clone(),
            origin: g.iter().map(|&q| origin[q]).collect(),
            boundary,
            former_partner,
        });
    }
    Ok(CutResult {
        net,
        origin,
        cut_edges,
        pieces,
        location,
    })
}

fn find_chord(net: &PolygonNet, origin: &[usize], parent: usize, a: &Vec2, b: &Vec2) -> Option<(usize, usize, usize)> {
    let mid = Vec2::new(
        (&a.x + &b.x) * crate::field::QuadExt::from_ratio(1, 2, net.d()),
        (&a.y + &b.y) * crate::field::QuadExt::from_ratio(1, 2, net.d()),
    );
    (0..net.num_polygons()).filter(|&q| origin[q] == parent).find_map(|q| {
        let p = net.polygon(q);
        let i = p.index_of_vertex(a)?;
        let j = p.index_of_vertex(b)?;
        strictly_inside(p.vertices(), &mid).then_some((q, i, j))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QuadExt;
    use crate::flow::{find_vertical_saddle_connections, Endpoints};
    use crate::surface::{area, unit_square_torus};

    #[test]
    fn torus_cut_gives_cylinder() {
        let t = unit_square_torus(2);
        let scs = find_vertical_saddle_connections(&t, &QuadExt::from_int(2, 2), Endpoints::Augmented).unwrap();
        let cut = cut_along(&t, &scs).unwrap();
        assert_eq!(cut.pieces.len(), 1);
        let piece = &cut.pieces[0];
        assert_eq!(piece.boundary.len(), 2);
        assert_eq!(area(&piece.net), QuadExt::one(2));
        assert_eq!(crate::surface::euler_characteristic(&piece.net), 0);
    }

    #[test]
    fn interior_chord_splits_polygon() {
        // 2×1 torus with a marked midpoint on the bottom edge: the vertical
        // through it is a closed saddle connection crossing the interior.
        let d = 2;
        let v = |x: i64, y: i64| Vec2::ints(x, y, d);
        let e = EdgeRef::new;
        let poly = vec![v(0, 0), v(1, 0), v(2, 0), v(2, 1), v(1, 1), v(0, 1)];
        let s = PolygonNet::new(
            vec![poly],
            &[(e(0, 0), e(0, 4)), (e(0, 1), e(0, 3)), (e(0, 2), e(0, 5))],
            [CornerRef::new(0, 0), CornerRef::new(0, 1)],
        )
        .unwrap();
        let scs = find_vertical_saddle_connections(&s, &QuadExt::from_int(5, d), Endpoints::Augmented).unwrap();
        assert_eq!(scs.len(), 2);
        let cut = cut_along(&s, &scs).unwrap();
        assert_eq!(cut.pieces.len(), 2);
        for p in &cut.pieces {
            assert_eq!(area(&p.net), QuadExt::one(d));
            assert_eq!(p.boundary.len(), 2);
        }
    }
}
