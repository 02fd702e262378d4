//! Matching of sequenced test-primitive requirements against an annotated March.
//!
//! Only the aggressor and the victim matter for a fault, and every placement with the
//! same orientation sees the same sequence of operations on those two cells. The
//! matcher therefore lays the annotated March out as a pair timeline: per element, the
//! visit of the cell met first, then the other, each carrying the tuples of its
//! operations. An element runs aggressor-first exactly when it traverses `a=>v`.
//!
//! A sensitization site is a position whose tuple the requirement admits and whose
//! operation (if any) is the sensitizing one; an operation site also needs the victim
//! to be fault-free right before it. From a site the fault effect is followed until
//! the first victim read that exposes it (the detection) or until a victim operation
//! restores the fault-free value. A primitive is detected when, for every power-up
//! fill and every order of the Either elements, some requirement has such a site.

use serde::{Deserialize, Serialize};

use crate::annotate::{annotate_from, AnnotatedMarch, StateTuple, Tri};
use crate::fault_model::{CellState, Condition, FaultPrimitive, MemOp, OpKind, Orientation};
use crate::march::{AddressOrder, MarchAlgorithm, OpRef};
use crate::report::{CoverageReport, Engine, MatchResult};
use crate::test_primitive::{
    derive_test_primitive, state_tuples_for_test_primitive, CellRole, Guard, Item, PositionSymbol,
    SequencedRequirement, Variant,
};

/// How detection descriptors constrain the detection read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Semantics {
    /// The detection is the first victim read after the sensitization, with any
    /// operations in between as long as none restores the victim.
    #[default]
    Exact,
    /// Additionally the read must sit where the library descriptor places it
    /// (adjacent, first in its element, or behind a split).
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MatchOptions {
    pub semantics: Semantics,
    /// Power-up content; both fills are required when unknown.
    pub initial: Option<CellState>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StatePoint {
    PowerUp,
    Before(OpRef),
    /// After the last operation of a visit.
    After(OpRef),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sensitization {
    Operation(OpRef),
    State(StatePoint),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `Os Od` within one element and one visit.
    SameElementAdjacent,
    /// `Os ; Od`: detection in a later element.
    SplitNextElement,
    /// `; Od ... Os`: detection opens the element, the sensitization happens earlier in
    /// traversal at the other cell.
    DetectionFirstThenSensitize,
    /// The sensitizing read itself returns the wrong value.
    SensitizingRead,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchWitness {
    pub sensitization: Sensitization,
    pub detection_op: Option<OpRef>,
    pub cac: CellRole,
    pub requirement: StateTuple,
    pub relation: Relation,
    pub fill: CellState,
    pub order_used: Vec<AddressOrder>,
}

impl MatchWitness {
    pub fn sensitization_ops(&self) -> Vec<OpRef> {
        match self.sensitization {
            Sensitization::Operation(at) => vec![at],
            Sensitization::State(_) => Vec::new(),
        }
    }
}

/// One power-up fill plus a concrete order for every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub fill: CellState,
    pub orders: Vec<AddressOrder>,
}

pub fn resolutions(am: &AnnotatedMarch) -> Vec<Resolution> {
    let fills = match am.initial.known() {
        Some(s) => vec![s],
        None => CellState::ALL.to_vec(),
    };
    let orders = am.algorithm.order_assignments();
    fills.into_iter().flat_map(|fill| orders.iter().map(move |o| Resolution { fill, orders: o.clone() })).collect()
}

#[derive(Debug, Clone, Copy)]
struct Step {
    at: OpRef,
    cell: CellRole,
    op: MemOp,
    tuple: StateTuple,
    after: StateTuple,
    victim: CellState,
    aggressor: CellState,
    visit_end: bool,
    toward_victim: bool,
}

fn resolve(t: StateTuple, fill: CellState) -> StateTuple {
    let r = |s: Tri| Tri::from(s.resolve(fill));
    StateTuple::new(r(t.las), r(t.cas), r(t.has))
}

fn known(s: Tri) -> CellState {
    s.known().expect("resolved tuple")
}

fn timeline(am: &AnnotatedMarch, res: &Resolution, orientation: Option<Orientation>) -> Vec<Step> {
    let low = orientation == Some(Orientation::AggressorLow);
    let mut steps = Vec::new();
    for (ei, (e, ae)) in am.algorithm.elements.iter().zip(&am.elements).enumerate() {
        let order = res.orders[ei];
        let cand = ae.candidate(order);
        let toward_victim = (order == AddressOrder::Up) == low;
        let visits: &[CellRole] = match (orientation, toward_victim) {
            (None, _) => &[CellRole::Victim],
            (Some(_), true) => &[CellRole::Aggressor, CellRole::Victim],
            (Some(_), false) => &[CellRole::Victim, CellRole::Aggressor],
        };
        for &cell in visits {
            for (oi, &op) in e.ops.iter().enumerate() {
                let tuple = resolve(cand.before[oi], res.fill);
                let after = resolve(cand.before.get(oi + 1).copied().unwrap_or(cand.after), res.fill);
                let here = known(tuple.cas);
                let (victim, aggressor) = match (orientation, cell) {
                    (None, _) => (here, here),
                    (Some(_), CellRole::Victim) => (here, known(if low { tuple.las } else { tuple.has })),
                    (Some(_), CellRole::Aggressor) => (known(if low { tuple.has } else { tuple.las }), here),
                };
                steps.push(Step {
                    at: OpRef { element: ei, op: oi },
                    cell,
                    op,
                    tuple,
                    after,
                    victim,
                    aggressor,
                    visit_end: oi + 1 == e.ops.len(),
                    toward_victim,
                });
            }
        }
    }
    steps
}

/// Effect of a primitive on the victim of the pair, tracked as the faulty victim value.
struct PairFault<'a> {
    fp: &'a FaultPrimitive,
}

struct Outcome {
    read: Option<CellState>,
    faulty: CellState,
    golden: CellState,
}

impl PairFault<'_> {
    fn aggressor_enables(&self, aggressor: CellState) -> bool {
        match self.fp.aggressor() {
            None => true,
            Some(Condition::State(x)) => aggressor == x,
            Some(_) => false,
        }
    }

    fn level(&self, faulty: CellState, aggressor: CellState) -> CellState {
        let f = self.fp.faulty_value();
        match (self.fp.aggressor(), self.fp.victim()) {
            (None, Condition::Always) => f,
            (None, Condition::State(s)) if faulty == s => f,
            (Some(Condition::State(x)), Condition::State(y)) if aggressor == x && faulty == y => f,
            _ => faulty,
        }
    }

    fn power_up(&self, fill: CellState) -> CellState {
        self.level(fill, fill)
    }

    fn apply(&self, s: &Step, faulty: CellState) -> Outcome {
        let fp = self.fp;
        match s.cell {
            CellRole::Victim => {
                let (read, faulty, golden) = match s.op.kind {
                    OpKind::Read => {
                        let trig = matches!(fp.victim(), Condition::ReadOf(v) if v == faulty)
                            && self.aggressor_enables(s.aggressor);
                        if trig {
                            (fp.read_output(), fp.faulty_value(), s.victim)
                        } else {
                            (Some(faulty), faulty, s.victim)
                        }
                    }
                    OpKind::Write => {
                        let trig = matches!(fp.victim(), Condition::WriteTransition { from, to }
                            if from == faulty && to == s.op.value)
                            && self.aggressor_enables(s.aggressor);
                        (None, if trig { fp.faulty_value() } else { s.op.value }, s.op.value)
                    }
                };
                Outcome { read, faulty: self.level(faulty, s.aggressor), golden }
            }
            CellRole::Aggressor => {
                let mut faulty = faulty;
                let disturbs = match (fp.aggressor(), fp.victim()) {
                    (Some(a @ (Condition::ReadOf(_) | Condition::WriteTransition { .. })), Condition::State(y)) => {
                        a.required_state() == Some(s.aggressor) && a.operation() == Some(s.op) && faulty == y
                    }
                    _ => false,
                };
                if disturbs {
                    faulty = fp.faulty_value();
                }
                let aggressor = if s.op.kind == OpKind::Write { s.op.value } else { s.aggressor };
                Outcome { read: None, faulty: self.level(faulty, aggressor), golden: s.victim }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Site {
    Op(usize),
    PowerUp,
    Before(usize),
    After(usize),
}

struct Trace<'a> {
    steps: Vec<Step>,
    clean_before: Vec<bool>,
    model: PairFault<'a>,
}

impl<'a> Trace<'a> {
    fn new(am: &AnnotatedMarch, res: &Resolution, fp: &'a FaultPrimitive) -> Self {
        let steps = timeline(am, res, fp.orientation());
        let model = PairFault { fp };
        let mut faulty = model.power_up(res.fill);
        let mut clean_before = Vec::with_capacity(steps.len());
        for s in &steps {
            clean_before.push(faulty == s.victim);
            faulty = model.apply(s, faulty).faulty;
        }
        Trace { steps, clean_before, model }
    }

    /// First step at or after `from` whose victim read exposes the fault.
    fn propagate(&self, from: usize, mut faulty: CellState) -> Option<usize> {
        for (t, s) in self.steps.iter().enumerate().skip(from) {
            let out = self.model.apply(s, faulty);
            if out.read.is_some_and(|r| r != s.victim) {
                return Some(t);
            }
            if out.faulty == out.golden {
                return None;
            }
            faulty = out.faulty;
        }
        None
    }

    fn sites(&self, req: &SequencedRequirement, fill: CellState) -> Vec<(Site, usize)> {
        let forced = self.model.fp.faulty_value();
        let mut out = Vec::new();
        match req.sensitization {
            Some(op) => {
                for (i, s) in self.steps.iter().enumerate() {
                    if s.cell == req.cac && s.op == op && req.tuple.admits(&s.tuple) && self.clean_before[i] {
                        if let Some(j) = self.propagate(i, s.victim) {
                            out.push((Site::Op(i), j));
                        }
                    }
                }
            }
            None => {
                if req.tuple.admits(&StateTuple::uniform(fill.into())) {
                    if let Some(j) = self.propagate(0, forced) {
                        out.push((Site::PowerUp, j));
                    }
                }
                for (i, s) in self.steps.iter().enumerate() {
                    if s.cell != req.cac {
                        continue;
                    }
                    if req.tuple.admits(&s.tuple) {
                        if let Some(j) = self.propagate(i, forced) {
                            out.push((Site::Before(i), j));
                        }
                    }
                    if s.visit_end && req.tuple.admits(&s.after) {
                        if let Some(j) = self.propagate(i + 1, forced) {
                            out.push((Site::After(i), j));
                        }
                    }
                }
            }
        }
        out
    }

    fn site_step(&self, site: Site) -> Option<&Step> {
        match site {
            Site::Op(i) | Site::Before(i) | Site::After(i) => Some(&self.steps[i]),
            Site::PowerUp => None,
        }
    }

    /// Whether a detection at `j` sits where one of the descriptor variants puts it.
    fn conforms(&self, req: &SequencedRequirement, site: Site, j: usize) -> bool {
        let Some(s) = self.site_step(site) else { return true };
        let d = &self.steps[j];
        let first_of_visit = d.cell == CellRole::Victim && d.at.op == 0;
        if req.sensitizing_read_first {
            return matches!(site, Site::Op(_))
                && s.at.op == 0
                && s.toward_victim
                && d.at.element == s.at.element
                && first_of_visit;
        }
        if req.variants.iter().all(|v| v.detection_read().is_none()) {
            return matches!(site, Site::Op(i) if i == j);
        }
        req.variants.iter().any(|v| self.variant_conforms(v, site, s, j))
    }

    fn variant_conforms(&self, v: &Variant, site: Site, s: &Step, j: usize) -> bool {
        use PositionSymbol::*;
        let guards_hold = v.guards.iter().all(|g| match g {
            Guard::AggressorToVictim => s.toward_victim,
            Guard::VictimToAggressor => !s.toward_victim,
            _ => true,
        });
        if !guards_hold {
            return false;
        }
        let d = &self.steps[j];
        let first_of_visit = d.at.op == 0;
        let syms: Vec<PositionSymbol> = v
            .items
            .iter()
            .filter_map(|i| match i {
                Item::Symbol(p) => Some(*p),
                Item::Read(_) => None,
            })
            .collect();
        let same_element = d.at.element == s.at.element;
        match syms.as_slice() {
            [Hash] => true,
            [Caret, ..] => same_element && first_of_visit,
            [Star, Semicolon] => !same_element && first_of_visit,
            [] => match site {
                Site::Before(i) => j == i,
                Site::Op(i) => j == i + 1 && same_element && d.cell == s.cell,
                _ => false,
            },
            [Semicolon] => {
                let Site::After(i) = site else { return false };
                !same_element && first_of_visit && self.steps[i + 1..j].iter().all(|t| t.cell != CellRole::Victim)
            }
            _ => false,
        }
    }

    fn relation(&self, site: Site, j: usize) -> Relation {
        let d = &self.steps[j];
        match site {
            Site::Op(i) if i == j => Relation::SensitizingRead,
            Site::PowerUp => Relation::SplitNextElement,
            _ => {
                let s = self.site_step(site).expect("site with a step");
                if s.at.element != d.at.element {
                    Relation::SplitNextElement
                } else if s.cell == d.cell {
                    Relation::SameElementAdjacent
                } else {
                    Relation::DetectionFirstThenSensitize
                }
            }
        }
    }
}

/// Earliest witness for one resolution over all requirements.
fn witness_for(
    am: &AnnotatedMarch,
    res: &Resolution,
    reqs: &[SequencedRequirement],
    fp: &FaultPrimitive,
    semantics: Semantics,
) -> Option<MatchWitness> {
    let trace = Trace::new(am, res, fp);
    let mut best: Option<(usize, MatchWitness)> = None;
    for req in reqs {
        for (site, j) in trace.sites(req, res.fill) {
            if semantics == Semantics::Printed && !trace.conforms(req, site, j) {
                continue;
            }
            if best.as_ref().is_some_and(|(b, _)| *b <= j) {
                continue;
            }
            let sensitization = match site {
                Site::Op(i) => Sensitization::Operation(trace.steps[i].at),
                Site::PowerUp => Sensitization::State(StatePoint::PowerUp),
                Site::Before(i) => Sensitization::State(StatePoint::Before(trace.steps[i].at)),
                Site::After(i) => Sensitization::State(StatePoint::After(trace.steps[i].at)),
            };
            let w = MatchWitness {
                sensitization,
                detection_op: Some(trace.steps[j].at),
                cac: req.cac,
                requirement: req.tuple,
                relation: trace.relation(site, j),
                fill: res.fill,
                order_used: res.orders.clone(),
            };
            best = Some((j, w));
        }
    }
    best.map(|(_, w)| w)
}

/// Detected when every resolution has a witness; reports the first resolution's witness.
pub fn match_requirements(
    am: &AnnotatedMarch,
    reqs: &[SequencedRequirement],
    fp: &FaultPrimitive,
    semantics: Semantics,
) -> MatchResult {
    let mut first = None;
    for res in resolutions(am) {
        match witness_for(am, &res, reqs, fp, semantics) {
            Some(w) => {
                first.get_or_insert(w);
            }
            None => return MatchResult::undetected(*fp),
        }
    }
    MatchResult { primitive: *fp, detected: true, witness: first, mismatch: None, placement: None }
}

/// Matches a single sequenced requirement.
pub fn match_tp(am: &AnnotatedMarch, req: &SequencedRequirement, fp: &FaultPrimitive) -> MatchResult {
    match_requirements(am, std::slice::from_ref(req), fp, Semantics::Exact)
}

pub fn match_primitive(am: &AnnotatedMarch, fp: &FaultPrimitive, semantics: Semantics) -> MatchResult {
    let reqs = state_tuples_for_test_primitive(&derive_test_primitive(fp), None);
    match_requirements(am, &reqs, fp, semantics)
}

pub fn coverage(m: &MarchAlgorithm, faults: &[FaultPrimitive]) -> CoverageReport {
    coverage_with(m, faults, MatchOptions::default())
}

pub fn coverage_with(m: &MarchAlgorithm, faults: &[FaultPrimitive], opts: MatchOptions) -> CoverageReport {
    let am = annotate_from(m, opts.initial.into());
    let results = faults.iter().map(|fp| match_primitive(&am, fp, opts.semantics)).collect();
    CoverageReport { algorithm: m.label(), engine: Engine::Matcher, results }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotate::annotate;
    use crate::march::parse_march;

    const MARCH_A: &str = "b(w0); u(r0,w1,w0,w1); u(r1,w0,w1); d(r1,w0,w1,w0); d(r0,w1,w0)";
    const MARCH_SR: &str = "b(w0); u(r0,w1,r1,w0); u(r0,r0); u(w1); d(r1,w0,r0,w1); d(r1,r1)";

    fn fp(s: &str) -> FaultPrimitive {
        s.parse().unwrap()
    }

    #[test]
    fn cftr_witness_in_march_a() {
        let m = parse_march(MARCH_A).unwrap();
        let f = fp("<1;1w0/1/->a<v");
        let r = match_primitive(&annotate(&m), &f, Semantics::Exact);
        let w = r.witness.unwrap();
        assert_eq!(w.sensitization_ops().iter().map(|&o| m.op_number(o)).collect::<Vec<_>>(), [12]);
        assert_eq!(m.op_number(w.detection_op.unwrap()), 13);
        assert_eq!(w.relation, Relation::SplitNextElement);
    }

    #[test]
    fn wdf_not_in_march_sr() {
        let am = annotate(&parse_march(MARCH_SR).unwrap());
        assert!(!match_primitive(&am, &fp("<0w0/1/->"), Semantics::Exact).detected);
        assert!(!match_primitive(&am, &fp("<1w1/0/->"), Semantics::Exact).detected);
    }

    #[test]
    fn restoring_write_ends_the_window() {
        let f = fp("<0w1/0/->");
        let am = annotate(&parse_march("b(w0); u(w1); u(w0); u(r0)").unwrap());
        assert!(!match_primitive(&am, &f, Semantics::Exact).detected);
        let am = annotate(&parse_march("b(w0); u(w1); u(r1)").unwrap());
        assert!(match_primitive(&am, &f, Semantics::Exact).detected);
    }

    #[test]
    fn state_tuple_mismatch_blocks_match() {
        let m = parse_march("b(w0)").unwrap();
        let f = fp("<1;1w0/1/->a<v");
        let req = state_tuples_for_test_primitive(&derive_test_primitive(&f), None).remove(0);
        assert!(!match_tp(&annotate(&m), &req, &f).detected);
    }
}
