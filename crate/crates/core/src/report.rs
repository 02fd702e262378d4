//! Coverage reports shared by the matcher and the oracle, with table-style text
//! rendering, a JSON view, report diffs and engine cross-checks.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::fault_model::{FaultClass, FaultPrimitive, Orientation};
use crate::march::MarchAlgorithm;
use crate::matcher::{MatchWitness, Sensitization, StatePoint};
use crate::oracle::{FaultPlacement, Mismatch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Matcher,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResult {
    pub primitive: FaultPrimitive,
    pub detected: bool,
    /// Matcher evidence: present iff detected.
    pub witness: Option<MatchWitness>,
    /// Oracle evidence: present iff detected.
    pub mismatch: Option<Mismatch>,
    /// Oracle placement of the mismatch, or an escaping placement when undetected.
    pub placement: Option<FaultPlacement>,
}

impl MatchResult {
    pub fn undetected(primitive: FaultPrimitive) -> Self {
        MatchResult { primitive, detected: false, witness: None, mismatch: None, placement: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub algorithm: String,
    pub engine: Engine,
    pub results: Vec<MatchResult>,
}

/// How a primitive shows up in a class rollup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Directions {
    /// Single-cell primitive.
    Single,
    /// Both orientations detected.
    Both,
    Only(Orientation),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RollupEntry {
    pub primitive: String,
    pub directions: Directions,
}

impl RollupEntry {
    pub fn label(&self) -> String {
        match self.directions {
            Directions::Single => self.primitive.clone(),
            Directions::Both => format!("{}↕", self.primitive),
            Directions::Only(o) => format!("{}{o}", self.primitive),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRollup {
    pub class: FaultClass,
    pub entries: Vec<RollupEntry>,
}

impl CoverageReport {
    pub fn total(&self) -> usize {
        self.results.len()
    }

    pub fn detected_count(&self) -> usize {
        self.results.iter().filter(|r| r.detected).count()
    }

    pub fn detected(&self) -> Vec<FaultPrimitive> {
        self.results.iter().filter(|r| r.detected).map(|r| r.primitive).collect()
    }

    pub fn result(&self, fp: &FaultPrimitive) -> Option<&MatchResult> {
        self.results.iter().find(|r| r.primitive == *fp)
    }

    /// Detected primitives per class, orientations folded into `↕` where both hold.
    pub fn rollup(&self) -> Vec<ClassRollup> {
        let mut out: Vec<ClassRollup> = Vec::new();
        for r in self.results.iter().filter(|r| r.detected) {
            let class = r.primitive.class();
            if out.last().map(|c| c.class) != Some(class) {
                out.push(ClassRollup { class, entries: Vec::new() });
            }
            let entries = &mut out.last_mut().expect("pushed above").entries;
            let text = r.primitive.unoriented();
            match r.primitive.orientation() {
                None => entries.push(RollupEntry { primitive: text, directions: Directions::Single }),
                Some(o) => match entries.iter_mut().find(|e| e.primitive == text) {
                    Some(e) => e.directions = Directions::Both,
                    None => entries.push(RollupEntry { primitive: text, directions: Directions::Only(o) }),
                },
            }
        }
        out
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let engine = match self.engine {
            Engine::Matcher => "matcher",
            Engine::Oracle => "oracle",
        };
        let _ = writeln!(s, "{}: {}/{} detected ({engine})", self.algorithm, self.detected_count(), self.total());
        for c in self.rollup() {
            let labels: Vec<String> = c.entries.iter().map(RollupEntry::label).collect();
            let _ = writeln!(s, "  {:<9} {}", c.class.name(), labels.join(", "));
        }
        s
    }

    /// One line per primitive with its evidence.
    pub fn render_details(&self, m: &MarchAlgorithm) -> String {
        let mut s = String::new();
        for r in &self.results {
            let _ = write!(s, "{:<16} ", r.primitive.to_string());
            if !r.detected {
                match r.placement {
                    Some(p) => {
                        let _ = writeln!(s, "undetected (escapes at {p})");
                    }
                    None => {
                        let _ = writeln!(s, "undetected");
                    }
                }
                continue;
            }
            if let Some(w) = &r.witness {
                let _ = writeln!(s, "{}", describe_witness(m, w));
            } else if let (Some(mm), Some(p)) = (r.mismatch, r.placement) {
                let _ = writeln!(s, "{p}: {mm}");
            } else {
                let _ = writeln!(s, "detected");
            }
        }
        s
    }

    pub fn json(&self, m: &MarchAlgorithm) -> JsonReport {
        let results = self
            .results
            .iter()
            .map(|r| JsonResult {
                primitive: r.primitive.to_string(),
                class: r.primitive.class().name().to_string(),
                detected: r.detected,
                witness: r.witness.as_ref().map(|w| JsonWitness {
                    sens: w.sensitization_ops().iter().map(|o| [o.element, o.op]).collect(),
                    state: match w.sensitization {
                        Sensitization::Operation(_) => None,
                        Sensitization::State(p) => Some(describe_point(m, p)),
                    },
                    det: w.detection_op.map(|o| [o.element, o.op]),
                    det_number: w.detection_op.map(|o| m.op_number(o)),
                    order: w.order_used.iter().map(|o| o.to_string()).collect(),
                    relation: format!("{:?}", w.relation),
                    fill: w.fill.to_string(),
                }),
                mismatch: r.mismatch.map(|mm| mm.to_string()),
            })
            .collect();
        JsonReport {
            algorithm: self.algorithm.clone(),
            march: m.to_string(),
            engine: self.engine,
            total: self.total(),
            detected: self.detected_count(),
            results,
        }
    }
}

fn describe_point(m: &MarchAlgorithm, p: StatePoint) -> String {
    match p {
        StatePoint::PowerUp => "power-up".to_string(),
        StatePoint::Before(o) => format!("before op {}", m.op_number(o)),
        StatePoint::After(o) => format!("after op {}", m.op_number(o)),
    }
}

pub fn describe_witness(m: &MarchAlgorithm, w: &MatchWitness) -> String {
    let sens = match w.sensitization {
        Sensitization::Operation(o) => format!("sensitized by op {} ({})", m.op_number(o), m.op_at(o)),
        Sensitization::State(p) => format!("sensitized {}", describe_point(m, p)),
    };
    let det = w.detection_op.map_or(String::new(), |o| format!(", detected by op {} ({})", m.op_number(o), m.op_at(o)));
    let orders: Vec<String> = w.order_used.iter().map(|o| o.to_string()).collect();
    format!("{sens}{det}, {:?}, fill {}, orders {}", w.relation, w.fill, orders.join(""))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonReport {
    pub algorithm: String,
    pub march: String,
    pub engine: Engine,
    pub total: usize,
    pub detected: usize,
    pub results: Vec<JsonResult>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonResult {
    pub primitive: String,
    pub class: String,
    pub detected: bool,
    pub witness: Option<JsonWitness>,
    pub mismatch: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonWitness {
    pub sens: Vec<[usize; 2]>,
    pub state: Option<String>,
    pub det: Option<[usize; 2]>,
    pub det_number: Option<usize>,
    pub order: Vec<String>,
    pub relation: String,
    pub fill: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDiff {
    pub gained: Vec<FaultPrimitive>,
    pub lost: Vec<FaultPrimitive>,
}

/// Primitives detected by `after` but not `before`, and the reverse.
pub fn diff_reports(before: &CoverageReport, after: &CoverageReport) -> ReportDiff {
    let b = before.detected();
    let a = after.detected();
    ReportDiff {
        gained: a.iter().filter(|f| !b.contains(f)).copied().collect(),
        lost: b.iter().filter(|f| !a.contains(f)).copied().collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub primitive: FaultPrimitive,
    pub matcher: bool,
    pub oracle: bool,
}

pub fn disagreements(matcher: &CoverageReport, oracle: &CoverageReport) -> Vec<Disagreement> {
    matcher
        .results
        .iter()
        .filter_map(|r| {
            let o = oracle.result(&r.primitive)?.detected;
            (o != r.detected).then_some(Disagreement { primitive: r.primitive, matcher: r.detected, oracle: o })
        })
        .collect()
}
