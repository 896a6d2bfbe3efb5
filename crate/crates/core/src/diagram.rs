//! Invariant component diagrams: vertices for components, solid half-edges
//! for intact vertical saddle connections, dotted ones for broken pairs, and
//! full edges for slit gluings.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::unionfind::DisjointSets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Periodic,
    Minimal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    Solid,
    Dotted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub kind: VertexKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfEdge {
    pub vertex: usize,
    pub style: Style,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub vertices: Vec<Vertex>,
    pub half_edges: Vec<HalfEdge>,
    /// Pairs of indices into `half_edges`.
    pub full_edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DiagramViolation {
    Empty,
    DuplicateVertex { id: usize },
    UnknownVertex { half_edge: usize },
    UnknownHalfEdge { index: usize },
    DottedInFullEdge { half_edge: usize },
    Loop { half_edge: usize },
    HalfEdgeReused { half_edge: usize },
    MinimalWithoutDotted { vertex: usize },
    NotATree,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DiagramReport {
    pub violations: Vec<DiagramViolation>,
    /// Incident half-edges per vertex id.
    pub degrees: BTreeMap<usize, usize>,
}

impl DiagramReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StratumKind {
    /// `H(2g − 2)`.
    #[serde(rename = "single")]
    SingleZero,
    /// `H(g − 1, g − 1)`.
    #[serde(rename = "double")]
    DoubleZero,
}

impl StratumKind {
    /// Half-edges available to a diagram of a genus-`g` surface.
    pub fn budget(self, g: u32) -> u32 {
        match self {
            StratumKind::SingleZero => 2 * g - 1,
            StratumKind::DoubleZero => 2 * g,
        }
    }
}

impl fmt::Display for StratumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StratumKind::SingleZero => "single",
            StratumKind::DoubleZero => "double",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PredictedStratum {
    /// Genus one: no true cone points.
    Torus,
    Signature(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("need at least one component")]
    NoComponents,
    #[error("a p-central diagram needs a periodic component")]
    NoPeriodic,
    #[error("an m-central diagram needs a minimal component")]
    NoMinimal,
    #[error("{k} half-edges is fewer than the {needed} required")]
    TooFewHalfEdges { k: u32, needed: u32 },
    #[error("diagram is invalid: {0:?}")]
    Invalid(Vec<DiagramViolation>),
}

impl Diagram {
    pub fn total_half_edges(&self) -> usize {
        self.half_edges.len()
    }

    pub fn vertex_index(&self) -> BTreeMap<usize, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (v.id, i)).collect()
    }

    /// Numbers of periodic and minimal vertices.
    pub fn counts(&self) -> (usize, usize) {
        let p = self.vertices.iter().filter(|v| v.kind == VertexKind::Periodic).count();
        (p, self.vertices.len() - p)
    }

    /// For each vertex (by position): free solid and dotted half-edge counts.
    pub fn free_counts(&self) -> Vec<(usize, usize)> {
        let index = self.vertex_index();
        let mut in_full = vec![false; self.half_edges.len()];
        for fe in &self.full_edges {
            for &h in fe {
                if h < in_full.len() {
                    in_full[h] = true;
                }
            }
        }
        let mut out = vec![(0, 0); self.vertices.len()];
        for (h, he) in self.half_edges.iter().enumerate() {
            let Some(&v) = index.get(&he.vertex) else { continue };
            match (he.style, in_full[h]) {
                (Style::Solid, false) => out[v].0 += 1,
                (Style::Dotted, _) => out[v].1 += 1,
                _ => {}
            }
        }
        out
    }

    /// Vertex positions joined by each full edge.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        let index = self.vertex_index();
        self.full_edges
            .iter()
            .filter_map(|[a, b]| {
                let u = index.get(&self.half_edges.get(*a)?.vertex)?;
                let v = index.get(&self.half_edges.get(*b)?.vertex)?;
                Some((*u, *v))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub fn validate_diagram(dg: &Diagram) -> DiagramReport {
    let mut violations = Vec::new();
    if dg.vertices.is_empty() {
        violations.push(DiagramViolation::Empty);
    }
    let mut index = BTreeMap::new();
    for (i, v) in dg.vertices.iter().enumerate() {
        if index.insert(v.id, i).is_some() {
            violations.push(DiagramViolation::DuplicateVertex { id: v.id });
        }
    }
    let mut degrees: BTreeMap<usize, usize> = dg.vertices.iter().map(|v| (v.id, 0)).collect();
    for (h, he) in dg.half_edges.iter().enumerate() {
        match degrees.get_mut(&he.vertex) {
            Some(d) => *d += 1,
            None => violations.push(DiagramViolation::UnknownVertex { half_edge: h }),
        }
    }
    let mut used = vec![false; dg.half_edges.len()];
    let mut ds = DisjointSets::new(dg.vertices.len());
    let mut tree_ok = true;
    for fe in &dg.full_edges {
        let mut ends = Vec::new();
        for &h in fe {
            let Some(he) = dg.half_edges.get(h) else {
                violations.push(DiagramViolation::UnknownHalfEdge { index: h });
                continue;
            };
            if used[h] {
                violations.push(DiagramViolation::HalfEdgeReused { half_edge: h });
            }
            used[h] = true;
            if he.style == Style::Dotted {
                violations.push(DiagramViolation::DottedInFullEdge { half_edge: h });
            }
            if let Some(&v) = index.get(&he.vertex) {
                ends.push(v);
            }
        }
        if ends.len() == 2 {
            if ends[0] == ends[1] {
                violations.push(DiagramViolation::Loop { half_edge: fe[0] });
            } else if !ds.union(ends[0], ends[1]) {
                tree_ok = false;
            }
        }
    }
    let comps = ds.groups().len();
    if !dg.vertices.is_empty() && (comps != 1 || !tree_ok || dg.full_edges.len() + 1 != dg.vertices.len()) {
        violations.push(DiagramViolation::NotATree);
    }
    let free = dg.free_counts();
    for (i, v) in dg.vertices.iter().enumerate() {
        if v.kind == VertexKind::Minimal && free[i].1 == 0 {
            violations.push(DiagramViolation::MinimalWithoutDotted { vertex: v.id });
        }
    }
    DiagramReport { violations, degrees }
}

/// Smallest number of half-edges a diagram with `p` periodic and `m` minimal
/// vertices can have: one dotted per minimal vertex and two per tree edge.
pub fn min_half_edges(p: u32, m: u32) -> u32 {
    assert!(p + m >= 1, "need at least one component");
    3 * m + 2 * p - 2
}

/// Whether a hyperelliptic surface of genus `g` in the given stratum can have
/// exactly `p` periodic and `m` minimal components.
pub fn feasible_pair(g: u32, kind: StratumKind, p: u32, m: u32) -> bool {
    if p + m == 0 || g == 0 {
        return false;
    }
    match kind {
        StratumKind::SingleZero => 3 * m + 2 * p <= 2 * g + 1,
        StratumKind::DoubleZero if g == 1 => (p, m) == (1, 0) || (p, m) == (0, 1),
        StratumKind::DoubleZero => 3 * m + 2 * p <= 2 * g + 2,
    }
}

fn check_budget(k: u32, p: u32, m: u32) -> Result<u32, DiagramError> {
    if p + m == 0 {
        return Err(DiagramError::NoComponents);
    }
    let needed = min_half_edges(p, m);
    if k < needed {
        return Err(DiagramError::TooFewHalfEdges { k, needed });
    }
    Ok(k - needed)
}

struct Builder {
    dg: Diagram,
}

impl Builder {
    fn vertex(&mut self, kind: VertexKind) -> usize {
        let id = self.dg.vertices.len();
        self.dg.vertices.push(Vertex { id, kind });
        id
    }

    fn half(&mut self, vertex: usize, style: Style) -> usize {
        self.dg.half_edges.push(HalfEdge { vertex, style });
        self.dg.half_edges.len() - 1
    }

    fn join(&mut self, a: usize, b: usize) {
        let ha = self.half(a, Style::Solid);
        let hb = self.half(b, Style::Solid);
        self.dg.full_edges.push([ha, hb]);
    }
}

/// Periodic central vertex joined to `p − 1` periodic and `m` minimal
/// vertices; the spare half-edges go on the centre.
pub fn build_p_central(k: u32, p: u32, m: u32) -> Result<Diagram, DiagramError> {
    let spare = check_budget(k, p, m)?;
    if p == 0 {
        return Err(DiagramError::NoPeriodic);
    }
    let mut b = Builder { dg: Diagram::default() };
    let c = b.vertex(VertexKind::Periodic);
    for _ in 1..p {
        let v = b.vertex(VertexKind::Periodic);
        b.join(c, v);
    }
    for _ in 0..m {
        let v = b.vertex(VertexKind::Minimal);
        b.join(c, v);
        b.half(v, Style::Dotted);
    }
    for _ in 0..spare {
        b.half(c, Style::Solid);
    }
    Ok(b.dg)
}

/// Minimal central vertex with one dotted half-edge, joined to `p` periodic
/// and `m − 1` minimal vertices; the spare half-edges go on the centre.
pub fn build_m_central(k: u32, p: u32, m: u32) -> Result<Diagram, DiagramError> {
    let spare = check_budget(k, p, m)?;
    if m == 0 {
        return Err(DiagramError::NoMinimal);
    }
    let mut b = Builder { dg: Diagram::default() };
    let c = b.vertex(VertexKind::Minimal);
    b.half(c, Style::Dotted);
    for _ in 0..p {
        let v = b.vertex(VertexKind::Periodic);
        b.join(c, v);
    }
    for _ in 1..m {
        let v = b.vertex(VertexKind::Minimal);
        b.join(c, v);
        b.half(v, Style::Dotted);
    }
    for _ in 0..spare {
        b.half(c, Style::Solid);
    }
    Ok(b.dg)
}

/// Stratum of a surface realizing `dg`, from its total half-edge count `k`.
pub fn predicted_stratum(dg: &Diagram) -> PredictedStratum {
    let k = dg.total_half_edges() as u32;
    if k <= 2 {
        PredictedStratum::Torus
    } else if k % 2 == 1 {
        PredictedStratum::Signature(vec![k - 1])
    } else {
        PredictedStratum::Signature(vec![k / 2 - 1, k / 2 - 1])
    }
}

/// Genus of a surface realizing `dg`.
pub fn predicted_genus(dg: &Diagram) -> u32 {
    let k = dg.total_half_edges() as u32;
    k.div_ceil(2)
}

/// A string that is equal for two valid diagrams exactly when they are
/// isomorphic as trees with labelled vertices.
pub fn canonical_form(dg: &Diagram) -> String {
    let n = dg.vertices.len();
    let free = dg.free_counts();
    let labels: Vec<String> = dg
        .vertices
        .iter()
        .zip(&free)
        .map(|(v, (s, d))| {
            let k = match v.kind {
                VertexKind::Periodic => 'P',
                VertexKind::Minimal => 'M',
            };
            format!("{k}{s}.{d}")
        })
        .collect();
    let mut adj = vec![Vec::new(); n];
    for (u, v) in dg.tree_edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    fn encode(v: usize, parent: Option<usize>, adj: &[Vec<usize>], labels: &[String]) -> String {
        let mut kids: Vec<String> = adj[v]
            .iter()
            .filter(|&&w| Some(w) != parent)
            .map(|&w| encode(w, Some(v), adj, labels))
            .collect();
        kids.sort();
        format!("({}{})", labels[v], kids.concat())
    }
    (0..n).map(|r| encode(r, None, &adj, &labels)).min().unwrap_or_default()
}

pub fn isomorphic(a: &Diagram, b: &Diagram) -> bool {
    canonical_form(a) == canonical_form(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders() {
        let d = build_p_central(4, 2, 0).unwrap();
        assert_eq!(d.vertices.len(), 2);
        assert_eq!(d.full_edges.len(), 1);
        assert_eq!(d.free_counts()[0], (2, 0));
        assert!(validate_diagram(&d).is_valid());

        let d = build_p_central(5, 1, 1).unwrap();
        assert_eq!(d.counts(), (1, 1));
        assert_eq!(d.free_counts(), vec![(2, 0), (0, 1)]);

        assert_eq!(
            build_p_central(2, 1, 1),
            Err(DiagramError::TooFewHalfEdges { k: 2, needed: 3 })
        );

        let d = build_m_central(3, 0, 1).unwrap();
        assert_eq!(d.vertices.len(), 1);
        assert_eq!(d.free_counts(), vec![(2, 1)]);

        let d = build_m_central(6, 1, 2).unwrap();
        assert_eq!(d.vertices.len(), 3);
        assert_eq!(d.free_counts(), vec![(0, 1), (0, 0), (0, 1)]);
        assert!(validate_diagram(&d).is_valid());
        assert_eq!(build_m_central(4, 2, 0), Err(DiagramError::NoMinimal));
    }

    #[test]
    fn validation() {
        let d = Diagram {
            vertices: vec![Vertex {
                id: 0,
                kind: VertexKind::Minimal,
            }],
            half_edges: vec![HalfEdge {
                vertex: 0,
                style: Style::Solid,
            }],
            full_edges: vec![],
        };
        let rep = validate_diagram(&d);
        assert_eq!(
            rep.violations,
            vec![DiagramViolation::MinimalWithoutDotted { vertex: 0 }]
        );

        let two = Diagram {
            vertices: vec![
                Vertex {
                    id: 0,
                    kind: VertexKind::Periodic,
                },
                Vertex {
                    id: 1,
                    kind: VertexKind::Periodic,
                },
            ],
            half_edges: vec![
                HalfEdge {
                    vertex: 0,
                    style: Style::Solid,
                },
                HalfEdge {
                    vertex: 1,
                    style: Style::Solid,
                },
            ],
            full_edges: vec![[0, 1]],
        };
        let rep = validate_diagram(&two);
        assert!(rep.is_valid());
        assert_eq!(rep.degrees.values().copied().collect::<Vec<_>>(), vec![1, 1]);

        let mut split = two.clone();
        split.full_edges.clear();
        assert_eq!(validate_diagram(&split).violations, vec![DiagramViolation::NotATree]);
    }

    #[test]
    fn bounds_and_strata() {
        assert_eq!(min_half_edges(1, 0), 0);
        assert_eq!(min_half_edges(1, 1), 3);
        assert_eq!(min_half_edges(2, 2), 8);
        assert!(feasible_pair(2, StratumKind::SingleZero, 1, 1));
        assert!(!feasible_pair(2, StratumKind::SingleZero, 2, 1));
        assert!(!feasible_pair(1, StratumKind::DoubleZero, 2, 0));
        let k = |k: u32| build_p_central(k, 1, 0).unwrap();
        assert_eq!(predicted_stratum(&k(3)), PredictedStratum::Signature(vec![2]));
        assert_eq!(predicted_stratum(&k(4)), PredictedStratum::Signature(vec![1, 1]));
        assert_eq!(predicted_stratum(&k(2)), PredictedStratum::Torus);
    }

    #[test]
    fn canonical_form_ignores_order() {
        let a = build_p_central(7, 2, 1).unwrap();
        let mut b = a.clone();
        b.vertices.reverse();
        for v in &mut b.vertices {
            v.id += 10;
        }
        for h in &mut b.half_edges {
            h.vertex += 10;
        }
        b.half_edges.reverse();
        let n = b.half_edges.len();
        for fe in &mut b.full_edges {
            *fe = [n - 1 - fe[1], n - 1 - fe[0]];
        }
        assert!(isomorphic(&a, &b));
        assert!(!isomorphic(&a, &build_m_central(7, 2, 1).unwrap()));
    }

    #[test]
    fn json_round_trip() {
        let d = build_m_central(8, 1, 2).unwrap();
        assert_eq!(Diagram::from_json(&d.to_json()).unwrap(), d);
        assert!(d.to_json().contains("\"dotted\""));
    }
}
