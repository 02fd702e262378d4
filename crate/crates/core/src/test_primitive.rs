//! Test primitives `<S>D`: the sensitization set of a fault primitive plus a detection
//! descriptor locating the read that exposes the fault.
//!
//! Descriptor symbols: `*` any number of operations, `#` optional split into a later
//! element, `;` mandatory split, `^` the next operation opens its element and the
//! sensitization follows it. Guarded variants (`a=>v`, `v in CAC`, ...) are alternatives.
//!
//! The same derivation runs over concrete values and over the symbols `x`/`y`, so the
//! library rows and the 86 concrete test primitives cannot drift apart.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::annotate::{StateTuple, Tri};
use crate::fault_model::{
    Bit, CellState, Condition, FaultClass, FaultPrimitive, FaultTemplate, MemOp, Orientation, Sym,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PositionSymbol {
    Star,
    Hash,
    Semicolon,
    Caret,
}

impl PositionSymbol {
    pub fn as_char(self) -> char {
        match self {
            PositionSymbol::Star => '*',
            PositionSymbol::Hash => '#',
            PositionSymbol::Semicolon => ';',
            PositionSymbol::Caret => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Guard {
    AggressorToVictim,
    VictimToAggressor,
    VictimInCac,
    AggressorInCac,
    EqualStates,
    UnequalStates,
}

impl Guard {
    fn text(self, unicode: bool) -> &'static str {
        match (self, unicode) {
            (Guard::AggressorToVictim, true) => "a⇒v",
            (Guard::AggressorToVictim, false) => "a=>v",
            (Guard::VictimToAggressor, true) => "v⇒a",
            (Guard::VictimToAggressor, false) => "v=>a",
            (Guard::VictimInCac, _) => "v in CAC",
            (Guard::AggressorInCac, _) => "a in CAC",
            (Guard::EqualStates, _) => "x=y",
            (Guard::UnequalStates, true) => "x≠y",
            (Guard::UnequalStates, false) => "x!=y",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Item<V = CellState> {
    Symbol(PositionSymbol),
    /// The detection read and its expected value.
    Read(V),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variant<V = CellState> {
    /// Conjunction; empty means unconditional.
    pub guards: Vec<Guard>,
    pub items: Vec<Item<V>>,
}

impl<V: Bit> Variant<V> {
    fn new(guards: &[Guard], items: Vec<Item<V>>) -> Self {
        Variant { guards: guards.to_vec(), items }
    }

    pub fn detection_read(&self) -> Option<V> {
        self.items.iter().find_map(|i| match i {
            Item::Read(v) => Some(*v),
            Item::Symbol(_) => None,
        })
    }

    pub fn has(&self, s: PositionSymbol) -> bool {
        self.items.contains(&Item::Symbol(s))
    }

    fn items_text(&self, unicode: bool, spaced: bool) -> String {
        let toks: Vec<String> = self
            .items
            .iter()
            .map(|i| match i {
                Item::Symbol(s) => s.as_char().to_string(),
                Item::Read(v) => format!("{}{v}", if unicode { 'R' } else { 'r' }),
            })
            .collect();
        toks.join(if spaced { " " } else { "" })
    }
}

fn render_variants<V: Bit>(vs: &[&Variant<V>], hidden: &[Guard], unicode: bool, spaced: bool) -> String {
    let shown = |v: &Variant<V>| -> Vec<&'static str> {
        v.guards.iter().filter(|g| !hidden.contains(g)).map(|g| g.text(unicode)).collect()
    };
    match vs {
        [] => String::new(),
        [v] if shown(v).is_empty() => v.items_text(unicode, spaced),
        _ => {
            let alts: Vec<String> = vs
                .iter()
                .map(|v| {
                    let g = shown(v);
                    let items = v.items_text(unicode, spaced);
                    if g.is_empty() {
                        items
                    } else {
                        format!("{items} ({})", g.join(", "))
                    }
                })
                .collect();
            format!("{{{}}}", alts.join(" | "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DetectionDescriptor<V = CellState> {
    pub variants: Vec<Variant<V>>,
    /// When present (under the listed guards) the sensitizing read must open its element
    /// and doubles as the detection.
    pub sensitizing_read_first: Option<Vec<Guard>>,
}

impl<V: Bit> DetectionDescriptor<V> {
    /// `D = ∅`: no variant carries a detection read.
    pub fn is_empty(&self) -> bool {
        self.variants.iter().all(|v| v.detection_read().is_none())
    }
}

/// `<S>D` for one concrete fault primitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TestPrimitive {
    pub source: FaultPrimitive,
    pub aggressor: Option<Condition>,
    pub victim: Condition,
    pub descriptor: DetectionDescriptor,
}

impl TestPrimitive {
    pub fn to_unicode(&self) -> String {
        render_tp(self.aggressor, self.victim, &self.descriptor, true)
    }
}

impl fmt::Display for TestPrimitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_tp(self.aggressor, self.victim, &self.descriptor, false))
    }
}

fn render_sens<V: Bit>(aggressor: Option<Condition<V>>, victim: Condition<V>, unicode: bool) -> String {
    let s = match aggressor {
        Some(a) => format!("{};{}", a.render(unicode), victim.render(unicode)),
        None => victim.render(unicode),
    };
    if unicode {
        format!("⟨{s}⟩")
    } else {
        format!("<{s}>")
    }
}

fn render_tp<V: Bit>(a: Option<Condition<V>>, v: Condition<V>, d: &DetectionDescriptor<V>, unicode: bool) -> String {
    let all: Vec<&Variant<V>> = d.variants.iter().collect();
    let mut s = render_sens(a, v, unicode) + &render_variants(&all, &[], unicode, false);
    if d.sensitizing_read_first.is_some() {
        s.push_str(" (sensitizing read first)");
    }
    s
}

/// Derivation shared by concrete primitives and the symbolic library templates.
/// Returns the victim's sensitization as it appears in the test primitive.
fn derive<V: Bit>(
    aggressor: Option<Condition<V>>,
    victim: Condition<V>,
    faulty: V,
    read_output: Option<V>,
) -> (Condition<V>, DetectionDescriptor<V>) {
    use Item::{Read, Symbol};
    use PositionSymbol::*;
    let hash_read = |v: V| vec![Variant::new(&[], vec![Symbol(Hash), Read(v)])];
    let after_read = |s: V| -> Vec<Variant<V>> {
        let r = read_output.expect("read primitive has a read output");
        match r.same(s) {
            Some(true) => hash_read(s),
            Some(false) => Vec::new(),
            None => unreachable!("read output is written over the read's own symbol"),
        }
    };
    let plain = |variants| DetectionDescriptor { variants, sensitizing_read_first: None };
    match (aggressor, victim) {
        // A stuck-at cell is only visible through the complement of its stuck value.
        (None, Condition::Always) => (Condition::State(faulty.not()), plain(hash_read(faulty.not()))),
        (_, Condition::ReadOf(s)) => (victim, plain(after_read(s))),
        (_, Condition::WriteTransition { to, .. }) => (victim, plain(hash_read(to))),
        (None, Condition::State(s)) => (victim, plain(hash_read(s))),
        (Some(a), Condition::State(y)) if a.is_operation() => {
            let general = |extra: &[Guard]| {
                let g = |d: Guard| [&[d][..], extra].concat();
                vec![
                    Variant::new(&g(Guard::AggressorToVictim), vec![Symbol(Caret), Read(y), Symbol(Star)]),
                    Variant::new(&g(Guard::VictimToAggressor), vec![Symbol(Star), Symbol(Semicolon), Read(y)]),
                ]
            };
            let d = match a {
                Condition::ReadOf(x) => match x.same(y) {
                    Some(true) => {
                        DetectionDescriptor { variants: Vec::new(), sensitizing_read_first: Some(Vec::new()) }
                    }
                    Some(false) => plain(general(&[])),
                    None => DetectionDescriptor {
                        variants: general(&[Guard::UnequalStates]),
                        sensitizing_read_first: Some(vec![Guard::EqualStates]),
                    },
                },
                _ => plain(general(&[])),
            };
            (victim, d)
        }
        (Some(a), Condition::State(y)) => {
            let x = a.required_state().expect("aggressor state");
            let mut vs = vec![
                Variant::new(&[Guard::VictimInCac], vec![Read(y)]),
                Variant::new(&[Guard::AggressorInCac], vec![Symbol(Caret), Read(y)]),
            ];
            let split = vec![Symbol(Semicolon), Read(y)];
            match x.same(y) {
                Some(true) => vs.push(Variant::new(&[Guard::VictimInCac], split)),
                Some(false) => {}
                None => vs.push(Variant::new(&[Guard::VictimInCac, Guard::EqualStates], split)),
            }
            (victim, plain(vs))
        }
        (Some(_), Condition::Always) => unreachable!("validated primitive"),
    }
}

/// Derives the test primitive of a fault primitive. Total on valid primitives.
pub fn derive_test_primitive(fp: &FaultPrimitive) -> TestPrimitive {
    let (victim, descriptor) = derive(fp.aggressor(), fp.victim(), fp.faulty_value(), fp.read_output());
    TestPrimitive { source: *fp, aggressor: fp.aggressor(), victim, descriptor }
}

/// Symbolic test primitive of a library row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplatePrimitive {
    pub aggressor: Option<Condition<Sym>>,
    pub victim: Condition<Sym>,
    pub descriptor: DetectionDescriptor<Sym>,
}

impl TemplatePrimitive {
    /// Row text: the variants that hold for `x≠y` (or for any `x`, `y`).
    pub fn to_unicode(&self) -> String {
        let main: Vec<&Variant<Sym>> =
            self.descriptor.variants.iter().filter(|v| !v.guards.contains(&Guard::EqualStates)).collect();
        render_sens(self.aggressor, self.victim, true) + &render_variants(&main, &[Guard::UnequalStates], true, false)
    }

    /// Extra primitives that only exist for `x=y`.
    pub fn notes(&self) -> Vec<String> {
        let sens = render_sens(self.aggressor, self.victim, true);
        let mut out = Vec::new();
        if let Some(g) = &self.descriptor.sensitizing_read_first {
            let gs: Vec<&str> = g.iter().map(|g| g.text(true)).collect();
            out.push(format!("{sens} ({}, sensitizing read first)", gs.join(", ")));
        }
        for v in self.descriptor.variants.iter().filter(|v| v.guards.contains(&Guard::EqualStates)) {
            let gs: Vec<&str> = v.guards.iter().map(|g| g.text(true)).collect();
            out.push(format!("{sens}{} ({})", v.items_text(true, false), gs.join(", ")));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LibraryRow {
    pub class: FaultClass,
    pub fault: FaultTemplate,
    pub test: TemplatePrimitive,
}

pub fn test_primitive_library() -> Vec<LibraryRow> {
    FaultClass::ALL
        .iter()
        .map(|&class| {
            let t = class.template();
            let (victim, descriptor) = derive(t.aggressor, t.victim, t.faulty, t.read_output);
            LibraryRow { class, fault: t, test: TemplatePrimitive { aggressor: t.aggressor, victim, descriptor } }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellRole {
    Aggressor,
    Victim,
}

/// A test primitive placed on the March state space: the tuple required before the
/// sensitization, which cell is the current address cell, and the detection variants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SequencedRequirement {
    pub tuple: StateTuple,
    pub cac: CellRole,
    /// `None` when the sensitization consists of states only.
    pub sensitization: Option<MemOp>,
    pub variants: Vec<Variant>,
    pub sensitizing_read_first: bool,
}

impl fmt::Display for SequencedRequirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tuple)?;
        if let Some(op) = self.sensitization {
            write!(f, " {op}")?;
        }
        let vs: Vec<&Variant> = self.variants.iter().collect();
        let d = render_variants(&vs, &[Guard::VictimInCac, Guard::AggressorInCac], false, true);
        if !d.is_empty() {
            write!(f, " {d}")?;
        }
        if self.sensitizing_read_first {
            f.write_str(" (sensitizing read first)")?;
        }
        Ok(())
    }
}

/// Sequenced requirements of a test primitive. `orientation` overrides the source
/// primitive's orientation and is ignored for single-cell primitives.
pub fn state_tuples_for_test_primitive(
    tp: &TestPrimitive,
    orientation: Option<Orientation>,
) -> Vec<SequencedRequirement> {
    let first = tp.descriptor.sensitizing_read_first.is_some();
    let all = tp.descriptor.variants.clone();
    let Some(aggr) = tp.aggressor else {
        let s = tp.victim.required_state().map(Tri::from).unwrap_or(Tri::X);
        return vec![SequencedRequirement {
            tuple: StateTuple::new(Tri::X, s, Tri::X),
            cac: CellRole::Victim,
            sensitization: tp.victim.operation(),
            variants: all,
            sensitizing_read_first: first,
        }];
    };
    let orientation = orientation.or(tp.source.orientation()).expect("two-cell primitive has an orientation");
    let aggressor_high = orientation == Orientation::AggressorHigh;
    let state = |c: Condition| -> Tri { c.required_state().map(Tri::from).unwrap_or(Tri::X) };
    let place = |cac: CellRole, variants: Vec<Variant>| {
        let (here, other, other_high) = match cac {
            CellRole::Aggressor => (aggr, tp.victim, !aggressor_high),
            CellRole::Victim => (tp.victim, aggr, aggressor_high),
        };
        let tuple = if other_high {
            StateTuple::new(Tri::X, state(here), state(other))
        } else {
            StateTuple::new(state(other), state(here), Tri::X)
        };
        SequencedRequirement { tuple, cac, sensitization: here.operation(), variants, sensitizing_read_first: first }
    };
    if aggr.is_operation() {
        vec![place(CellRole::Aggressor, all)]
    } else if tp.victim.is_operation() {
        vec![place(CellRole::Victim, all)]
    } else {
        let pick = |g: Guard| all.iter().filter(|v| v.guards.contains(&g)).cloned().collect();
        vec![place(CellRole::Victim, pick(Guard::VictimInCac)), place(CellRole::Aggressor, pick(Guard::AggressorInCac))]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(s: &str) -> TestPrimitive {
        derive_test_primitive(&s.parse().unwrap())
    }

    #[test]
    fn concrete_renderings() {
        assert_eq!(tp("<r0/0/1>").to_string(), "<r0>");
        assert!(tp("<r0/0/1>").descriptor.is_empty());
        assert_eq!(tp("<0/1/->").to_string(), "<0>#r0");
        assert_eq!(tp("<r0;1/0/->a>v").to_string(), "<r0;1>{^r1* (a=>v) | *;r1 (v=>a)}");
        assert_eq!(tp("<r1;1/0/->a<v").to_string(), "<r1;1> (sensitizing read first)");
        assert_eq!(tp("<forall/0/->").to_string(), "<1>#r1");
        assert_eq!(tp("<0;0/1/->a<v").to_string(), "<0;0>{r0 (v in CAC) | ^r0 (a in CAC) | ;r0 (v in CAC)}");
        assert_eq!(tp("<0;1/0/->a<v").to_string(), "<0;1>{r1 (v in CAC) | ^r1 (a in CAC)}");
    }

    #[test]
    fn requirements() {
        let r = |s: &str| -> Vec<String> {
            state_tuples_for_test_primitive(&tp(s), None).iter().map(|r| r.to_string()).collect()
        };
        assert_eq!(r("<1;1w0/1/->a<v"), ["<1,1,x> w0 # r0"]);
        assert_eq!(r("<1;1w0/1/->a>v"), ["<x,1,1> w0 # r0"]);
        assert_eq!(r("<0;1w0/1/->a>v"), ["<x,1,0> w0 # r0"]);
        assert_eq!(r("<0/1/->"), ["<x,0,x> # r0"]);
        assert_eq!(r("<0w0/1/->"), ["<x,0,x> w0 # r0"]);
        assert_eq!(r("<r0;1/0/->a<v"), ["<x,0,1> r0 {^ r1 * (a=>v) | * ; r1 (v=>a)}"]);
        assert_eq!(r("<0;1/0/->a>v"), ["<x,1,0> r1", "<1,0,x> ^ r1"]);
    }

    #[test]
    fn library_rows() {
        let lib = test_primitive_library();
        assert_eq!(lib.len(), 16);
        let tf = lib.iter().find(|r| r.class == FaultClass::Tf).unwrap();
        assert_eq!(tf.test.to_unicode(), "⟨xWx̄⟩#Rx̄");
        let tr = lib.iter().find(|r| r.class == FaultClass::CfTr).unwrap();
        assert_eq!(tr.test.to_unicode(), "⟨x;yWȳ⟩#Rȳ");
    }
}
