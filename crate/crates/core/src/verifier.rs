//! Theorem-level driver: enumerates component counts for a genus and stratum,
//! realizes witnesses through both diagram families and checks them.

use serde::Serialize;

use crate::assembler::{realize_diagram, Assembly, AssemblyError};
use crate::diagram::{
    build_m_central, build_p_central, canonical_form, feasible_pair, isomorphic, min_half_edges, predicted_genus,
    predicted_stratum, Diagram, PredictedStratum, StratumKind,
};
use crate::dissect::{check_invariants, extract_diagram, InvariantReport};
use crate::field::QuadExt;
use crate::flow::{decompose_vertical, default_bound, PieceHint};
use crate::involution::{verify_involution, Involution};
use crate::surface::{genus, stratum_signature, total_cone_angle, ConeCount, PolygonNet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DiagramBuilder {
    #[serde(rename = "p-central")]
    PCentral,
    #[serde(rename = "m-central")]
    MCentral,
}

impl DiagramBuilder {
    pub fn build(self, k: u32, p: u32, m: u32) -> Option<Diagram> {
        match self {
            DiagramBuilder::PCentral => build_p_central(k, p, m).ok(),
            DiagramBuilder::MCentral => build_m_central(k, p, m).ok(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DiagramBuilder::PCentral => "p-central",
            DiagramBuilder::MCentral => "m-central",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub expected: (usize, usize),
    pub counts: Option<(usize, usize)>,
    pub certified: bool,
    pub predicted_stratum: PredictedStratum,
    pub stratum: Vec<u32>,
    pub predicted_genus: u32,
    pub genus: u32,
    pub fixed_points: Option<usize>,
    pub half_edges: usize,
    pub cone_angle: u32,
    pub isomorphic: bool,
    pub invariants: Option<InvariantReport>,
    /// When no separatrix was left unclosed, every component is a cylinder.
    pub closed_flow_is_periodic: bool,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recomputes every invariant of an assembled surface and compares it with
/// what the diagram predicts.
pub fn verify_realization(
    dg: &Diagram,
    s: &PolygonNet,
    inv: &Involution,
    hints: &[PieceHint],
    expected: (usize, usize),
) -> VerificationReport {
    let mut failures = Vec::new();
    let predicted = predicted_stratum(dg);
    let stratum = stratum_signature(s);
    let stratum_ok = match &predicted {
        PredictedStratum::Torus => stratum.is_empty(),
        PredictedStratum::Signature(sig) => *sig == stratum,
    };
    if !stratum_ok {
        failures.push(format!("stratum {stratum:?} but predicted {predicted:?}"));
    }
    let g = genus(s);
    let pg = predicted_genus(dg);
    if g != pg {
        failures.push(format!("genus {g} but predicted {pg}"));
    }
    let half_edges = dg.total_half_edges();
    let cone_angle = total_cone_angle(s, ConeCount::All);
    if cone_angle as usize != half_edges {
        failures.push(format!("total cone angle {cone_angle} but {half_edges} half-edges"));
    }
    let fixed_points = match verify_involution(s, inv) {
        Ok(rep) => {
            let f = rep.fixed_points.len();
            if f != 2 * g as usize + 2 {
                failures.push(format!("{f} fixed points but genus {g}"));
            }
            Some(f)
        }
        Err(e) => {
            failures.push(format!("involution: {e}"));
            None
        }
    };

    let mut report = VerificationReport {
        expected,
        counts: None,
        certified: false,
        predicted_stratum: predicted,
        stratum,
        predicted_genus: pg,
        genus: g,
        fixed_points,
        half_edges,
        cone_angle,
        isomorphic: false,
        invariants: None,
        closed_flow_is_periodic: false,
        failures: Vec::new(),
    };
    let dec = match decompose_vertical(s, &default_bound(s), hints) {
        Ok(dec) => dec,
        Err(e) => {
            failures.push(format!("decomposition: {e}"));
            report.failures = failures;
            return report;
        }
    };
    let counts = dec.counts();
    report.counts = Some(counts);
    if counts != expected {
        failures.push(format!("counts {counts:?} but expected {expected:?}"));
    }
    report.certified = dec.is_certified();
    if !report.certified {
        failures.push("a minimal component is only heuristic".into());
    }
    report.closed_flow_is_periodic = !dec.broken.is_empty() || counts.1 == 0;
    if !report.closed_flow_is_periodic {
        failures.push("every separatrix closed yet a component is not periodic".into());
    }
    match extract_diagram(s, inv, &dec) {
        Ok(ex) => {
            report.isomorphic = isomorphic(&ex, dg);
            if !report.isomorphic {
                failures.push(format!(
                    "extracted {} but built {}",
                    canonical_form(&ex),
                    canonical_form(dg)
                ));
            }
        }
        Err(e) => failures.push(format!("extraction: {e}")),
    }
    let invariants = check_invariants(s, inv, &dec);
    if !invariants.all() {
        failures.push(format!("invariants: {invariants:?}"));
    }
    report.invariants = Some(invariants);
    report.failures = failures;
    report
}

/// All `(p, m)` with `p + m ≥ 1` allowed in genus `g`, sorted by `(m, p)`.
pub fn enumerate_pairs(g: u32, kind: StratumKind) -> Vec<(u32, u32)> {
    assert!(g >= 1, "genus must be positive");
    let budget = 2 * g + 2;
    let mut out = Vec::new();
    for m in 0..=budget / 3 {
        for p in 0..=budget / 2 {
            if feasible_pair(g, kind, p, m) {
                out.push((p, m));
            }
        }
    }
    out
}

/// The largest number of minimal components in the whole stratum.
pub fn stratum_minimal_bound(g: u32, kind: StratumKind) -> u32 {
    match kind {
        StratumKind::SingleZero => g - 1,
        StratumKind::DoubleZero => g,
    }
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub pair: (u32, u32),
    pub builder: DiagramBuilder,
    pub diagram: Diagram,
    pub assembly: Option<Assembly>,
    pub report: WitnessReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub builder: DiagramBuilder,
    pub canonical: String,
    /// Realization error, if the diagram could not be assembled.
    pub error: Option<String>,
    pub verification: Option<VerificationReport>,
    pub within_stratum_bound: bool,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.within_stratum_bound && self.verification.as_ref().is_some_and(|v| v.passed())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairEvidence {
    pub p: u32,
    pub m: u32,
    pub witnesses: Vec<WitnessReport>,
    /// Set when no builder applies, which only happens when the block `M_1`
    /// would be needed.
    pub unrealizable: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundReason {
    /// `min_half_edges(p, m)` exceeds the budget.
    Counting,
    /// The flat torus has a single component.
    Torus,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundEvidence {
    pub p: u32,
    pub m: u32,
    pub min_half_edges: u32,
    pub budget: u32,
    pub reason: BoundReason,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvidenceReport {
    pub genus: u32,
    pub stratum: StratumKind,
    pub half_edges: u32,
    pub alpha: QuadExt,
    pub pairs: Vec<PairEvidence>,
    pub bound_side: Vec<BoundEvidence>,
    pub stratum_minimal_bound: u32,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct TheoremRun {
    pub report: EvidenceReport,
    pub witnesses: Vec<Witness>,
}

/// Evidence that no diagram exists for `(p, m)` in genus `g`.
pub fn bound_evidence(g: u32, kind: StratumKind, p: u32, m: u32) -> BoundEvidence {
    let budget = kind.budget(g);
    let need = min_half_edges(p, m);
    let reason = if g == 1 && kind == StratumKind::DoubleZero && need <= budget {
        BoundReason::Torus
    } else {
        BoundReason::Counting
    };
    let holds = match reason {
        BoundReason::Counting => need > budget,
        BoundReason::Torus => p + m > 1,
    };
    BoundEvidence {
        p,
        m,
        min_half_edges: need,
        budget,
        reason,
        holds,
    }
}

fn run_witness(
    k: u32,
    pair: (u32, u32),
    builder: DiagramBuilder,
    g: u32,
    kind: StratumKind,
    alpha: &QuadExt,
) -> Option<Witness> {
    let (p, m) = pair;
    let diagram = builder.build(k, p, m)?;
    let within = m <= stratum_minimal_bound(g, kind);
    let (assembly, error, verification) = match realize_diagram(&diagram, alpha) {
        Ok(a) => {
            let v = verify_realization(&diagram, &a.surface, &a.involution, &a.hints, (p as usize, m as usize));
            (Some(a), None, Some(v))
        }
        Err(AssemblyError::NeedsM1(_)) => return None,
        Err(e) => (None, Some(e.to_string()), None),
    };
    Some(Witness {
        pair,
        builder,
        report: WitnessReport {
            builder,
            canonical: canonical_form(&diagram),
            error,
            verification,
            within_stratum_bound: within,
        },
        diagram,
        assembly,
    })
}

/// Realizes and verifies a witness for every feasible pair, and records
/// the counting bound for every infeasible pair with `p + m ≤ 2g`.
pub fn verify_theorem(g: u32, kind: StratumKind, alpha: &QuadExt) -> TheoremRun {
    let k = kind.budget(g);
    let mut pairs = Vec::new();
    let mut witnesses = Vec::new();
    for pair in enumerate_pairs(g, kind) {
        let mut reports = Vec::new();
        for builder in [DiagramBuilder::PCentral, DiagramBuilder::MCentral] {
            if let Some(w) = run_witness(k, pair, builder, g, kind, alpha) {
                reports.push(w.report.clone());
                witnesses.push(w);
            }
        }
        let unrealizable = reports.is_empty().then(|| "needs the block M_1".to_string());
        pairs.push(PairEvidence {
            p: pair.0,
            m: pair.1,
            witnesses: reports,
            unrealizable,
        });
    }
    let mut bound_side = Vec::new();
    for m in 0..=2 * g {
        for p in 0..=2 * g - m {
            if p + m >= 1 && !feasible_pair(g, kind, p, m) {
                bound_side.push(bound_evidence(g, kind, p, m));
            }
        }
    }
    bound_side.sort_by_key(|b| (b.m, b.p));
    let passed = pairs.iter().all(|p| p.witnesses.iter().all(|w| w.passed())) && bound_side.iter().all(|b| b.holds);
    TheoremRun {
        report: EvidenceReport {
            genus: g,
            stratum: kind,
            half_edges: k,
            alpha: alpha.clone(),
            pairs,
            bound_side,
            stratum_minimal_bound: stratum_minimal_bound(g, kind),
            passed,
        },
        witnesses,
    }
}
