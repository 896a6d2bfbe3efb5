//! Deterministic SVG pictures of surfaces and diagrams. Coordinates are
//! decimal approximations and are never read back.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt::Write;

use crate::diagram::{Diagram, Style, VertexKind};
use crate::involution::{verify_involution, FixedPoint, Involution};
use crate::surface::PolygonNet;

const SCALE: f64 = 80.0;
const MARGIN: f64 = 20.0;

fn num(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.trim_start_matches('-')
        .trim_matches(|c| c == '0' || c == '.')
        .is_empty()
    {
        "0.000000000000".to_string()
    } else {
        s
    }
}

struct Frame {
    min_x: f64,
    max_y: f64,
}

impl Frame {
    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (MARGIN + (x - self.min_x) * SCALE, MARGIN + (self.max_y - y) * SCALE)
    }
}

fn header(out: &mut String, width: f64, height: f64) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(width),
        num(height),
        num(width),
        num(height)
    )
    .unwrap();
}

/// Polygons with one label per glued edge pair; fixed points of `inv` are
/// drawn as dots when given.
pub fn render_surface(s: &PolygonNet, inv: Option<&Involution>) -> String {
    let pts: Vec<Vec<(f64, f64)>> = s
        .polygons()
        .iter()
        .map(|p| p.vertices().iter().map(|v| v.to_f64()).collect())
        .collect();
    let all = pts.iter().flatten();
    let min_x = all.clone().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max_x = all.clone().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = all.clone().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max_y = all.map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let frame = Frame { min_x, max_y };
    let width = (max_x - min_x) * SCALE + 2.0 * MARGIN;
    let height = (max_y - min_y) * SCALE + 2.0 * MARGIN;

    let mut out = String::new();
    header(&mut out, width, height);
    for (pi, poly) in pts.iter().enumerate() {
        let points: Vec<String> = poly
            .iter()
            .map(|&p| {
                let (x, y) = frame.map(p);
                format!("{},{}", num(x), num(y))
            })
            .collect();
        writeln!(
            out,
            r##"<polygon id="p{pi}" points="{}" fill="#eef3fb" stroke="black" stroke-width="1"/>"##,
            points.join(" ")
        )
        .unwrap();
    }
    for (label, (e, f)) in s.gluings().iter().enumerate() {
        for edge in [e, f] {
            let poly = &pts[edge.polygon];
            let n = poly.len();
            let a = poly[edge.edge];
            let b = poly[(edge.edge + 1) % n];
            // Labels sit just inside the polygon, to the left of the edge.
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len = (dx * dx + dy * dy).sqrt();
            let inset = 0.12;
            let mid = (
                (a.0 + b.0) / 2.0 - dy / len * inset,
                (a.1 + b.1) / 2.0 + dx / len * inset,
            );
            let (x, y) = frame.map(mid);
            writeln!(
                out,
                r#"<text x="{}" y="{}" font-size="10" text-anchor="middle" dominant-baseline="middle">{label}</text>"#,
                num(x),
                num(y)
            )
            .unwrap();
        }
    }
    if let Some(rep) = inv.and_then(|i| verify_involution(s, i).ok()) {
        for fp in &rep.fixed_points {
            let point = match fp {
                FixedPoint::Interior { point, .. } => point,
                FixedPoint::EdgeMidpoint { point, .. } => point,
                FixedPoint::Vertex { point, .. } => point,
            };
            let (x, y) = frame.map(point.to_f64());
            writeln!(out, r#"<circle cx="{}" cy="{}" r="3" fill="crimson"/>"#, num(x), num(y)).unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Tree drawn in columns by distance from the first vertex; free half-edges
/// are short stubs, dotted ones dashed.
pub fn render_diagram(dg: &Diagram) -> String {
    let n = dg.vertices.len();
    let index = dg.vertex_index();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &dg.tree_edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut depth = vec![usize::MAX; n];
    let mut columns: Vec<Vec<usize>> = Vec::new();
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            if columns.len() <= depth[v] {
                columns.push(Vec::new());
            }
            columns[depth[v]].push(v);
            for &w in &adj[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    let spacing = 90.0;
    let rows = columns.iter().map(Vec::len).max().unwrap_or(1) as f64;
    let mut pos = vec![(0.0, 0.0); n];
    for (c, col) in columns.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            pos[v] = (MARGIN * 3.0 + c as f64 * spacing, MARGIN * 3.0 + r as f64 * spacing);
        }
    }
    let width = columns.len() as f64 * spacing + MARGIN * 4.0;
    let height = rows * spacing + MARGIN * 4.0;

    let mut in_full = vec![false; dg.half_edges.len()];
    for &[a, b] in &dg.full_edges {
        in_full[a] = true;
        in_full[b] = true;
    }
    let mut out = String::new();
    header(&mut out, width, height);
    for (i, &[a, b]) in dg.full_edges.iter().enumerate() {
        let (x1, y1) = pos[index[&dg.half_edges[a].vertex]];
        let (x2, y2) = pos[index[&dg.half_edges[b].vertex]];
        writeln!(
            out,
            r#"<line id="e{i}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="2"/>"#,
            num(x1),
            num(y1),
            num(x2),
            num(y2)
        )
        .unwrap();
    }
    let mut free: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (h, he) in dg.half_edges.iter().enumerate() {
        if !in_full[h] {
            free[index[&he.vertex]].push(h);
        }
    }
    for (v, hs) in free.iter().enumerate() {
        let (cx, cy) = pos[v];
        for (j, &h) in hs.iter().enumerate() {
            let angle = -PI / 2.0 + PI * (j as f64 + 0.5) / hs.len() as f64;
            let (x, y) = (cx + 30.0 * angle.cos(), cy + 30.0 * angle.sin());
            let dash = match dg.half_edges[h].style {
                Style::Solid => "",
                Style::Dotted => r#" stroke-dasharray="3,3""#,
            };
            writeln!(
                out,
                r#"<line id="h{h}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="2"{dash}/>"#,
                num(cx),
                num(cy),
                num(x),
                num(y)
            )
            .unwrap();
        }
    }
    for (v, vertex) in dg.vertices.iter().enumerate() {
        let (cx, cy) = pos[v];
        let fill = match vertex.kind {
            VertexKind::Periodic => "black",
            VertexKind::Minimal => "white",
        };
        writeln!(
            out,
            r#"<circle id="v{}" cx="{}" cy="{}" r="8" fill="{fill}" stroke="black" stroke-width="2"/>"#,
            vertex.id,
            num(cx),
            num(cy)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::construct_p;
    use crate::diagram::build_p_central;

    #[test]
    fn block_picture() {
        let b = construct_p(3, 2).unwrap();
        let svg = render_surface(&b.surface, Some(&b.involution));
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg.matches("<text").count(), 2 * b.surface.gluings().len());
        assert_eq!(svg.matches("<circle").count(), 6);
        assert_eq!(svg, render_surface(&b.surface, Some(&b.involution)));
    }

    #[test]
    fn diagram_picture() {
        let dg = build_p_central(4, 2, 0).unwrap();
        let svg = render_diagram(&dg);
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches(r#"<line id="e"#).count(), 1);
        assert_eq!(svg.matches(r#"<line id="h"#).count(), 2);
        assert!(!svg.contains("dasharray"));
    }

    #[test]
    fn numbers() {
        assert_eq!(num(-0.0), "0.000000000000");
        assert_eq!(num(1.5), "1.500000000000");
    }
}
