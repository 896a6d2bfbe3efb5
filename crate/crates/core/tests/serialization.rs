mod common;

use proptest::prelude::*;

use common::*;
use hypsurf::assembler::realize_diagram;
use hypsurf::blocks::{construct_m, construct_p};
use hypsurf::diagram::{build_m_central, build_p_central, canonical_form, isomorphic, validate_diagram, Diagram};
use hypsurf::field::QuadExt;
use hypsurf::involution::Involution;
use hypsurf::surface::PolygonNet;
use hypsurf::svg::{render_diagram, render_surface};

fn corpus() -> Vec<(PolygonNet, Involution)> {
    let mut out = Vec::new();
    for n in 1..=8 {
        let b = construct_p(n, 2).unwrap();
        out.push((b.surface, b.involution));
        if n >= 2 {
            let b = construct_m(n, &sqrt2()).unwrap();
            out.push((b.surface, b.involution));
        }
    }
    for dg in [build_p_central(6, 2, 1).unwrap(), build_m_central(7, 1, 2).unwrap()] {
        let a = realize_diagram(&dg, &sqrt2()).unwrap();
        out.push((a.surface, a.involution));
    }
    out
}

#[test]
fn surfaces_round_trip() {
    for (s, inv) in corpus() {
        let text = s.to_json();
        let back = PolygonNet::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
        let inv_text = serde_json::to_string(&inv).unwrap();
        assert_eq!(serde_json::from_str::<Involution>(&inv_text).unwrap(), inv);
    }
}

#[test]
fn svg_is_deterministic() {
    for (s, inv) in corpus() {
        let a = render_surface(&s, Some(&inv));
        let b = render_surface(&PolygonNet::from_json(&s.to_json()).unwrap(), Some(&inv));
        assert_eq!(a, b);
    }
    let dg = build_m_central(6, 1, 2).unwrap();
    assert_eq!(
        render_diagram(&dg),
        render_diagram(&Diagram::from_json(&dg.to_json()).unwrap())
    );
    assert!(render_diagram(&dg).contains("stroke-dasharray"));
}

#[test]
fn diagram_wire_format() {
    let dg = build_p_central(4, 1, 1).unwrap();
    let v: serde_json::Value = serde_json::from_str(&dg.to_json()).unwrap();
    assert_eq!(v["vertices"][1]["kind"], "minimal");
    let styles: Vec<&str> = v["half_edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| h["style"].as_str().unwrap())
        .collect();
    assert_eq!(styles, ["solid", "solid", "dotted", "solid"]);
}

fn quad() -> impl Strategy<Value = QuadExt> {
    (
        -50i64..50,
        1i64..20,
        -50i64..50,
        1i64..20,
        prop::sample::select(vec![2u32, 3, 5, 7]),
    )
        .prop_map(|(a, qa, b, qb, d)| QuadExt::new(rat(a, qa), rat(b, qb), d).unwrap())
}

fn builder_diagram() -> impl Strategy<Value = Diagram> {
    (0u32..4, 0u32..4, 0u32..4, any::<bool>()).prop_filter_map("no builder applies", |(p, m, extra, central)| {
        if p + m == 0 {
            return None;
        }
        let k = hypsurf::diagram::min_half_edges(p, m) + extra;
        if central {
            build_p_central(k, p, m).ok()
        } else {
            build_m_central(k, p, m).ok()
        }
    })
}

/// The same diagram with vertex ids and half-edge order permuted.
fn relabel(dg: &Diagram, shift: usize, rotate: usize) -> Diagram {
    let n = dg.vertices.len();
    let id = |v: usize| (v + shift) % n + 100;
    let m = dg.half_edges.len();
    let pos = |h: usize| (h + rotate) % m;
    let mut half_edges = dg.half_edges.clone();
    for (h, he) in dg.half_edges.iter().enumerate() {
        half_edges[pos(h)] = hypsurf::diagram::HalfEdge {
            vertex: id(he.vertex),
            style: he.style,
        };
    }
    let mut vertices: Vec<_> = dg
        .vertices
        .iter()
        .map(|v| hypsurf::diagram::Vertex {
            id: id(v.id),
            kind: v.kind,
        })
        .collect();
    vertices.reverse();
    Diagram {
        vertices,
        half_edges,
        full_edges: dg.full_edges.iter().map(|&[a, b]| [pos(b), pos(a)]).collect(),
    }
}

proptest! {
    #[test]
    fn quad_round_trip(x in quad()) {
        let text = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<QuadExt>(&text).unwrap(), x.clone());
        // The text form names `d` only through the surd.
        let parsed = x.to_string().parse::<QuadExt>().unwrap();
        if x.is_rational() {
            prop_assert_eq!(parsed.rational_part(), x.rational_part());
        } else {
            prop_assert_eq!(parsed, x);
        }
    }

    #[test]
    fn diagram_round_trip(dg in builder_diagram()) {
        prop_assert_eq!(Diagram::from_json(&dg.to_json()).unwrap(), dg);
    }

    #[test]
    fn canonical_form_ignores_labels(dg in builder_diagram(), shift in 0usize..7, rotate in 0usize..13) {
        let other = relabel(&dg, shift, rotate);
        prop_assert!(validate_diagram(&other).is_valid());
        prop_assert_eq!(canonical_form(&other), canonical_form(&dg));
        prop_assert!(isomorphic(&other, &dg));
    }
}
