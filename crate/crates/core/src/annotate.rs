//! State tuples `<LAS,CAS,HAS>` before every operation of a March algorithm.
//!
//! LAS and HAS describe the whole lower and higher address regions, which a March
//! element keeps uniform. The first tuple of an Up element is `<end, initial, initial>`,
//! of a Down element `<initial, initial, end>`, and an Either element carries both.
//! Reads keep the tuple, writes change CAS only.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fault_model::{CellState, OpKind};
use crate::march::{element_states_from, AddressOrder, ElementStates, MarchAlgorithm, OpRef};

/// A cell or region state that may be unknown (`x`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tri {
    Zero,
    One,
    X,
}

impl Tri {
    pub fn known(self) -> Option<CellState> {
        match self {
            Tri::Zero => Some(CellState::Zero),
            Tri::One => Some(CellState::One),
            Tri::X => None,
        }
    }

    /// Requirement check: `x` admits anything, a concrete value only itself.
    pub fn admits(self, actual: Tri) -> bool {
        self == Tri::X || self == actual
    }

    pub fn resolve(self, unknown: CellState) -> CellState {
        self.known().unwrap_or(unknown)
    }
}

impl From<CellState> for Tri {
    fn from(s: CellState) -> Self {
        match s {
            CellState::Zero => Tri::Zero,
            CellState::One => Tri::One,
        }
    }
}

impl From<Option<CellState>> for Tri {
    fn from(s: Option<CellState>) -> Self {
        s.map_or(Tri::X, Tri::from)
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::Zero => "0",
            Tri::One => "1",
            Tri::X => "x",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateTuple {
    pub las: Tri,
    pub cas: Tri,
    pub has: Tri,
}

impl StateTuple {
    pub fn new(las: Tri, cas: Tri, has: Tri) -> Self {
        StateTuple { las, cas, has }
    }

    pub fn uniform(s: Tri) -> Self {
        StateTuple::new(s, s, s)
    }

    /// True when every concrete slot of `self` equals the same slot of `actual`.
    pub fn admits(&self, actual: &StateTuple) -> bool {
        self.las.admits(actual.las) && self.cas.admits(actual.cas) && self.has.admits(actual.has)
    }

    pub fn with_cas(self, cas: Tri) -> Self {
        StateTuple { cas, ..self }
    }

    pub fn slots(&self) -> [Tri; 3] {
        [self.las, self.cas, self.has]
    }

    pub fn to_unicode(&self) -> String {
        format!("⟨{},{},{}⟩", self.las, self.cas, self.has)
    }
}

impl fmt::Display for StateTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{},{}>", self.las, self.cas, self.has)
    }
}

/// Tuples of one element under one concrete address order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub order: AddressOrder,
    /// Tuple before each operation.
    pub before: Vec<StateTuple>,
    /// Tuple after the last operation of a visit.
    pub after: StateTuple,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedElement {
    pub order: AddressOrder,
    pub states: ElementStates,
    /// One candidate for Up/Down, Up then Down for Either.
    pub candidates: Vec<Candidate>,
}

impl AnnotatedElement {
    pub fn candidate(&self, order: AddressOrder) -> &Candidate {
        self.candidates.iter().find(|c| c.order == order).expect("order admitted by element")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedMarch {
    pub algorithm: MarchAlgorithm,
    pub initial: Tri,
    pub elements: Vec<AnnotatedElement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderStyle {
    /// `<0,x,x> | <x,x,0> b w0 ; <1,0,0> u r0 ...`
    Ascii,
    /// `⟨0,x,x⟩⇕w0; ⟨1,0,0⟩⇑r0 ...`, first candidate of Either elements only.
    Unicode,
}

impl AnnotatedMarch {
    pub fn tuples(&self, at: OpRef) -> Vec<StateTuple> {
        self.elements[at.element].candidates.iter().map(|c| c.before[at.op]).collect()
    }

    pub fn render(&self, style: RenderStyle) -> String {
        let mut parts = Vec::new();
        for (e, el) in self.algorithm.elements.iter().zip(&self.elements) {
            let mut ops = Vec::new();
            for (i, op) in e.ops.iter().enumerate() {
                ops.push(match style {
                    RenderStyle::Ascii => {
                        let ts: Vec<String> = el.candidates.iter().map(|c| c.before[i].to_string()).collect();
                        format!("{} {} {op}", ts.join(" | "), e.order)
                    }
                    RenderStyle::Unicode => {
                        format!("{}{}{op}", el.candidates[0].before[i].to_unicode(), e.order.symbol())
                    }
                });
            }
            parts.push(ops.join(" "));
        }
        match style {
            RenderStyle::Ascii => parts.join(" ; "),
            RenderStyle::Unicode => parts.join("; "),
        }
    }
}

pub fn annotate(m: &MarchAlgorithm) -> AnnotatedMarch {
    annotate_from(m, Tri::X)
}

pub fn annotate_from(m: &MarchAlgorithm, initial: Tri) -> AnnotatedMarch {
    let states = element_states_from(m, initial);
    let elements = m
        .elements
        .iter()
        .zip(states)
        .map(|(e, st)| {
            let candidates = e
                .order
                .concrete()
                .iter()
                .map(|&order| {
                    let mut t = match order {
                        AddressOrder::Up => StateTuple::new(st.end, st.initial, st.initial),
                        _ => StateTuple::new(st.initial, st.initial, st.end),
                    };
                    let mut before = Vec::with_capacity(e.ops.len());
                    for op in &e.ops {
                        before.push(t);
                        if op.kind == OpKind::Write {
                            t = t.with_cas(op.value.into());
                        }
                    }
                    Candidate { order, before, after: t }
                })
                .collect();
            AnnotatedElement { order: e.order, states: st, candidates }
        })
        .collect();
    AnnotatedMarch { algorithm: m.clone(), initial, elements }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::march::parse_march;

    #[test]
    fn either_element_has_both_candidates() {
        let am = annotate(&parse_march("b(w0)").unwrap());
        assert_eq!(am.render(RenderStyle::Ascii), "<0,x,x> | <x,x,0> b w0");
    }

    #[test]
    fn second_element_of_march_a() {
        let m = parse_march("b(w0); u(r0,w1,w0,w1)").unwrap();
        let am = annotate(&m);
        let got: Vec<String> = am.elements[1].candidates[0].before.iter().map(|t| t.to_string()).collect();
        assert_eq!(got, ["<1,0,0>", "<1,0,0>", "<1,1,0>", "<1,0,0>"]);
    }

    #[test]
    fn preset_initial_state() {
        let am = annotate_from(&parse_march("u(r0,r0)").unwrap(), Tri::Zero);
        assert_eq!(am.render(RenderStyle::Unicode), "⟨0,0,0⟩⇑r0 ⟨0,0,0⟩⇑r0");
    }
}
