//! Cell states, memory operations, sensitizing conditions and static fault primitives.
//!
//! A fault primitive is written `<S/F/R>` for a single cell or `<Sa;Sv/F/R>a<v` for a
//! coupled pair. Construction validates the primitive, so every [`FaultPrimitive`]
//! value is one of the 86 non-connectivity static primitives returned by
//! [`enumerate_static_faults`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Binary value held by a memory cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellState {
    Zero,
    One,
}

impl CellState {
    pub const ALL: [CellState; 2] = [CellState::Zero, CellState::One];

    pub fn complement(self) -> Self {
        match self {
            CellState::Zero => CellState::One,
            CellState::One => CellState::Zero,
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            CellState::One
        } else {
            CellState::Zero
        }
    }

    pub fn bit(self) -> bool {
        self == CellState::One
    }
}

impl std::ops::Not for CellState {
    type Output = CellState;

    fn not(self) -> CellState {
        self.complement()
    }
}

impl fmt::Display for CellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.bit() { "1" } else { "0" })
    }
}

/// Values a fault or test primitive can be written over: concrete cell states, or the
/// symbolic `x`/`y` placeholders of the primitive library.
pub trait Bit: Copy + Eq + fmt::Debug + fmt::Display {
    fn not(self) -> Self;

    /// Whether two values are equal, or `None` when that depends on an unbound symbol.
    fn same(self, other: Self) -> Option<bool>;
}

impl Bit for CellState {
    fn not(self) -> Self {
        self.complement()
    }

    fn same(self, other: Self) -> Option<bool> {
        Some(self == other)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OpKind {
    Read,
    Write,
}

/// A memory access: the expected value of a read, or the value written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MemOp<V = CellState> {
    pub kind: OpKind,
    pub value: V,
}

impl<V> MemOp<V> {
    pub fn read(value: V) -> Self {
        MemOp { kind: OpKind::Read, value }
    }

    pub fn write(value: V) -> Self {
        MemOp { kind: OpKind::Write, value }
    }

    pub fn is_read(&self) -> bool {
        self.kind == OpKind::Read
    }
}

impl MemOp {
    pub const R0: MemOp = MemOp { kind: OpKind::Read, value: CellState::Zero };
    pub const R1: MemOp = MemOp { kind: OpKind::Read, value: CellState::One };
    pub const W0: MemOp = MemOp { kind: OpKind::Write, value: CellState::Zero };
    pub const W1: MemOp = MemOp { kind: OpKind::Write, value: CellState::One };
    pub const ALL: [MemOp; 4] = [MemOp::R0, MemOp::R1, MemOp::W0, MemOp::W1];
}

impl<V: fmt::Display> fmt::Display for MemOp<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = if self.kind == OpKind::Read { 'r' } else { 'w' };
        write!(f, "{k}{}", self.value)
    }
}

impl FromStr for MemOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.trim().chars();
        let kind = match chars.next() {
            Some('r' | 'R') => OpKind::Read,
            Some('w' | 'W') => OpKind::Write,
            _ => return Err(format!("unknown operation '{s}'")),
        };
        let value = match (chars.next(), chars.next()) {
            (Some('0'), None) => CellState::Zero,
            (Some('1'), None) => CellState::One,
            _ => return Err(format!("unknown operation '{s}'")),
        };
        Ok(MemOp { kind, value })
    }
}

/// What one cell must see or undergo for a fault to sensitize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition<V = CellState> {
    State(V),
    ReadOf(V),
    WriteTransition {
        from: V,
        to: V,
    },
    /// Any state and any operation; only meaningful for stuck-at faults.
    Always,
}

impl<V: Bit> Condition<V> {
    pub fn is_operation(&self) -> bool {
        matches!(self, Condition::ReadOf(_) | Condition::WriteTransition { .. })
    }

    pub fn operation(&self) -> Option<MemOp<V>> {
        match *self {
            Condition::ReadOf(v) => Some(MemOp::read(v)),
            Condition::WriteTransition { to, .. } => Some(MemOp::write(to)),
            _ => None,
        }
    }

    /// State the cell must hold when the condition starts.
    pub fn required_state(&self) -> Option<V> {
        match *self {
            Condition::State(s) | Condition::ReadOf(s) => Some(s),
            Condition::WriteTransition { from, .. } => Some(from),
            Condition::Always => None,
        }
    }

    /// State of a fault-free cell once the condition has been applied.
    pub fn fault_free_result(&self) -> Option<V> {
        match *self {
            Condition::State(s) | Condition::ReadOf(s) => Some(s),
            Condition::WriteTransition { to, .. } => Some(to),
            Condition::Always => None,
        }
    }

    pub(crate) fn render(&self, unicode: bool) -> String {
        let (r, w) = if unicode { ("R", "W") } else { ("r", "w") };
        match self {
            Condition::State(s) => s.to_string(),
            Condition::ReadOf(s) => format!("{r}{s}"),
            Condition::WriteTransition { from, to } => format!("{from}{w}{to}"),
            Condition::Always => if unicode { "∀" } else { "forall" }.to_string(),
        }
    }
}

impl<V: Bit> fmt::Display for Condition<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// Relative address of the aggressor with respect to the victim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    /// `a<v`
    AggressorLow,
    /// `a>v`
    AggressorHigh,
}

impl Orientation {
    pub const ALL: [Orientation; 2] = [Orientation::AggressorLow, Orientation::AggressorHigh];

    pub fn mirrored(self) -> Self {
        match self {
            Orientation::AggressorLow => Orientation::AggressorHigh,
            Orientation::AggressorHigh => Orientation::AggressorLow,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::AggressorLow => "a<v",
            Orientation::AggressorHigh => "a>v",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaultModelError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("invalid fault primitive: {0}")]
    Invalid(&'static str),
}

/// A validated static fault primitive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FaultPrimitive {
    aggressor: Option<Condition>,
    victim: Condition,
    faulty: CellState,
    read_output: Option<CellState>,
    orientation: Option<Orientation>,
}

impl FaultPrimitive {
    pub fn single(
        victim: Condition,
        faulty: CellState,
        read_output: Option<CellState>,
    ) -> Result<Self, FaultModelError> {
        Self::new(None, victim, faulty, read_output, None)
    }

    pub fn coupled(
        aggressor: Condition,
        victim: Condition,
        faulty: CellState,
        read_output: Option<CellState>,
        orientation: Orientation,
    ) -> Result<Self, FaultModelError> {
        Self::new(Some(aggressor), victim, faulty, read_output, Some(orientation))
    }

    pub fn new(
        aggressor: Option<Condition>,
        victim: Condition,
        faulty: CellState,
        read_output: Option<CellState>,
        orientation: Option<Orientation>,
    ) -> Result<Self, FaultModelError> {
        use FaultModelError::Invalid;
        if aggressor.is_some() != orientation.is_some() {
            return Err(Invalid("orientation is required for two-cell primitives only"));
        }
        if let Some(a) = aggressor {
            if a == Condition::Always || victim == Condition::Always {
                return Err(Invalid("'forall' applies to single-cell stuck-at faults only"));
            }
            if a.is_operation() && victim.is_operation() {
                return Err(Invalid("aggressor and victim cannot both be operations"));
            }
        }
        match victim {
            Condition::ReadOf(s) => {
                let r = read_output.ok_or(Invalid("a read-sensitized primitive needs a read output"))?;
                if faulty == s && r == s {
                    return Err(Invalid("faulty value and read output equal the fault-free behavior"));
                }
            }
            _ => {
                if read_output.is_some() {
                    return Err(Invalid("read output must be '-' unless the victim is read"));
                }
                if victim.fault_free_result() == Some(faulty) {
                    return Err(Invalid("faulty value equals the fault-free state"));
                }
            }
        }
        Ok(FaultPrimitive { aggressor, victim, faulty, read_output, orientation })
    }

    pub fn aggressor(&self) -> Option<Condition> {
        self.aggressor
    }

    pub fn victim(&self) -> Condition {
        self.victim
    }

    pub fn faulty_value(&self) -> CellState {
        self.faulty
    }

    pub fn read_output(&self) -> Option<CellState> {
        self.read_output
    }

    pub fn orientation(&self) -> Option<Orientation> {
        self.orientation
    }

    pub fn is_two_cell(&self) -> bool {
        self.aggressor.is_some()
    }

    /// The same primitive with the aggressor on the other side of the victim.
    pub fn mirrored(&self) -> Self {
        FaultPrimitive { orientation: self.orientation.map(Orientation::mirrored), ..*self }
    }

    /// The primitive without its orientation, as printed in coverage tables.
    pub fn unoriented(&self) -> String {
        let s = self.to_string();
        match self.orientation {
            Some(_) => s[..s.len() - 3].to_string(),
            None => s,
        }
    }

    pub fn class(&self) -> FaultClass {
        use Condition::*;
        match (self.aggressor, self.victim) {
            (None, State(_)) => FaultClass::Sf,
            (None, Always) => FaultClass::Saf,
            (None, WriteTransition { from, to }) if from != to => FaultClass::Tf,
            (None, WriteTransition { .. }) => FaultClass::Wdf,
            (None, ReadOf(s)) => read_class(s, self.faulty, self.read_output, false),
            (Some(State(_)), State(_)) => FaultClass::CfSt,
            (Some(ReadOf(_)), _) => FaultClass::CfDsRx,
            (Some(WriteTransition { from, to }), _) if from == to => FaultClass::CfDsXwX,
            (Some(WriteTransition { .. }), _) => FaultClass::CfDsXwNotX,
            (Some(_), WriteTransition { from, to }) if from != to => FaultClass::CfTr,
            (Some(_), WriteTransition { .. }) => FaultClass::CfWd,
            (Some(_), ReadOf(s)) => read_class(s, self.faulty, self.read_output, true),
            _ => unreachable!("validated primitive"),
        }
    }

    pub fn to_unicode(&self) -> String {
        self.render(true)
    }

    fn render(&self, unicode: bool) -> String {
        let sens = match self.aggressor {
            Some(a) => format!("{};{}", a.render(unicode), self.victim.render(unicode)),
            None => self.victim.render(unicode),
        };
        let dash = if unicode { "−" } else { "-" };
        let r = self.read_output.map_or(dash.to_string(), |r| r.to_string());
        let (l, g) = if unicode { ("⟨", "⟩") } else { ("<", ">") };
        let o = self.orientation.map_or(String::new(), |o| o.to_string());
        format!("{l}{sens}/{}/{r}{g}{o}", self.faulty)
    }
}

fn read_class(s: CellState, f: CellState, r: Option<CellState>, coupled: bool) -> FaultClass {
    let r = r.expect("validated read primitive");
    match (f != s, r != s, coupled) {
        (true, true, false) => FaultClass::Rdf,
        (true, false, false) => FaultClass::Drdf,
        (false, _, false) => FaultClass::Irf,
        (true, true, true) => FaultClass::CfRd,
        (true, false, true) => FaultClass::CfDrd,
        (false, _, true) => FaultClass::CfIr,
    }
}

impl fmt::Display for FaultPrimitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl FromStr for FaultPrimitive {
    type Err = FaultModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_fault_primitive(s)
    }
}

impl Serialize for FaultPrimitive {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FaultPrimitive {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn format_fault_primitive(fp: &FaultPrimitive) -> String {
    fp.to_string()
}

/// Parses the ASCII notation; `⟨ ⟩ ∀ −` and upper-case `R`/`W` are accepted as aliases.
pub fn parse_fault_primitive(text: &str) -> Result<FaultPrimitive, FaultModelError> {
    let mut p = Parser::new(text);
    p.expect('<')?;
    let first = p.condition()?;
    let second = if p.eat(';') { Some(p.condition()?) } else { None };
    p.expect('/')?;
    let faulty = p.value()?;
    p.expect('/')?;
    let read_output = if p.eat('-') { None } else { Some(p.value()?) };
    p.expect('>')?;
    let orientation = if p.eat('a') {
        let o = if p.eat('<') {
            Orientation::AggressorLow
        } else if p.eat('>') {
            Orientation::AggressorHigh
        } else {
            return Err(p.error("expected '<' or '>' in orientation"));
        };
        p.expect('v')?;
        Some(o)
    } else {
        None
    };
    if let Some(pos) = p.remaining() {
        return Err(FaultModelError::Syntax { position: pos, message: "trailing input".into() });
    }
    let (aggressor, victim) = match second {
        Some(v) => (Some(first), v),
        None => (None, first),
    };
    if aggressor.is_some() && orientation.is_none() {
        return Err(FaultModelError::Invalid("two-cell primitive needs an orientation (a<v or a>v)"));
    }
    FaultPrimitive::new(aggressor, victim, faulty, read_output, orientation)
}

struct Parser {
    chars: Vec<(usize, char)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        let chars: Vec<(usize, char)> = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| {
                let c = match c {
                    '⟨' => '<',
                    '⟩' => '>',
                    '−' | '–' => '-',
                    'R' => 'r',
                    'W' => 'w',
                    c => c,
                };
                (i, c)
            })
            .collect();
        Parser { chars, at: 0, len: text.chars().count() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn position(&self) -> usize {
        self.chars.get(self.at).map_or(self.len, |&(i, _)| i)
    }

    fn remaining(&self) -> Option<usize> {
        (self.at < self.chars.len()).then(|| self.position())
    }

    fn error(&self, message: &str) -> FaultModelError {
        FaultModelError::Syntax { position: self.position(), message: message.to_string() }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), FaultModelError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn value(&mut self) -> Result<CellState, FaultModelError> {
        match self.peek() {
            Some('0') => {
                self.at += 1;
                Ok(CellState::Zero)
            }
            Some('1') => {
                self.at += 1;
                Ok(CellState::One)
            }
            _ => Err(self.error("expected '0' or '1'")),
        }
    }

    fn condition(&mut self) -> Result<Condition, FaultModelError> {
        if self.eat('∀') {
            return Ok(Condition::Always);
        }
        if self.peek() == Some('f') {
            for c in "forall".chars() {
                if !self.eat(c) {
                    return Err(self.error("expected 'forall'"));
                }
            }
            return Ok(Condition::Always);
        }
        if self.eat('r') {
            return Ok(Condition::ReadOf(self.value()?));
        }
        let from = self.value()?;
        if self.eat('w') {
            let to = self.value()?;
            return Ok(Condition::WriteTransition { from, to });
        }
        Ok(Condition::State(from))
    }
}

/// Symbolic cell value used by the class templates: `x`, `x̄`, `y` or `ȳ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sym {
    pub var: Var,
    pub negated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

impl Sym {
    pub const X: Sym = Sym { var: Var::X, negated: false };
    pub const Y: Sym = Sym { var: Var::Y, negated: false };

    pub fn eval(self, x: CellState, y: CellState) -> CellState {
        let v = match self.var {
            Var::X => x,
            Var::Y => y,
        };
        if self.negated {
            !v
        } else {
            v
        }
    }
}

impl Bit for Sym {
    fn not(self) -> Self {
        Sym { negated: !self.negated, ..self }
    }

    fn same(self, other: Self) -> Option<bool> {
        (self.var == other.var).then_some(self.negated == other.negated)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match (self.var, self.negated) {
            (Var::X, false) => "x",
            (Var::X, true) => "x\u{0304}",
            (Var::Y, false) => "y",
            (Var::Y, true) => "\u{0233}",
        })
    }
}

/// One row of the fault-model library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FaultClass {
    Sf,
    Saf,
    Tf,
    Wdf,
    Rdf,
    Drdf,
    Irf,
    CfSt,
    CfDsRx,
    CfDsXwX,
    CfDsXwNotX,
    CfTr,
    CfWd,
    CfRd,
    CfDrd,
    CfIr,
}

/// A class written over the symbols `x` (aggressor, or the single cell) and `y` (victim).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaultTemplate {
    pub aggressor: Option<Condition<Sym>>,
    pub victim: Condition<Sym>,
    pub faulty: Sym,
    pub read_output: Option<Sym>,
}

impl FaultTemplate {
    pub fn to_unicode(&self) -> String {
        let sens = match self.aggressor {
            Some(a) => format!("{};{}", a.render(true), self.victim.render(true)),
            None => self.victim.render(true),
        };
        let r = self.read_output.map_or("−".to_string(), |r| r.to_string());
        format!("⟨{sens}/{}/{r}⟩", self.faulty)
    }
}

impl FaultClass {
    pub const ALL: [FaultClass; 16] = [
        FaultClass::Sf,
        FaultClass::Saf,
        FaultClass::Tf,
        FaultClass::Wdf,
        FaultClass::Rdf,
        FaultClass::Drdf,
        FaultClass::Irf,
        FaultClass::CfSt,
        FaultClass::CfDsRx,
        FaultClass::CfDsXwX,
        FaultClass::CfDsXwNotX,
        FaultClass::CfTr,
        FaultClass::CfWd,
        FaultClass::CfRd,
        FaultClass::CfDrd,
        FaultClass::CfIr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FaultClass::Sf => "SF",
            FaultClass::Saf => "SAF",
            FaultClass::Tf => "TF",
            FaultClass::Wdf => "WDF",
            FaultClass::Rdf => "RDF",
            FaultClass::Drdf => "DRDF",
            FaultClass::Irf => "IRF",
            FaultClass::CfSt => "CFst",
            FaultClass::CfDsRx => "CFdsrx",
            FaultClass::CfDsXwX => "CFdsxwx",
            FaultClass::CfDsXwNotX => "CFdsxw!x",
            FaultClass::CfTr => "CFtr",
            FaultClass::CfWd => "CFwd",
            FaultClass::CfRd => "CFrd",
            FaultClass::CfDrd => "CFdrd",
            FaultClass::CfIr => "CFir",
        }
    }

    pub fn is_two_cell(self) -> bool {
        self >= FaultClass::CfSt
    }

    pub fn template(self) -> FaultTemplate {
        use Condition::*;
        let (x, y) = (Sym::X, Sym::Y);
        let (nx, ny) = (x.not(), y.not());
        let t = |aggressor, victim, faulty, read_output| FaultTemplate { aggressor, victim, faulty, read_output };
        match self {
            FaultClass::Sf => t(None, State(x), nx, None),
            FaultClass::Saf => t(None, Always, x, None),
            FaultClass::Tf => t(None, WriteTransition { from: x, to: nx }, x, None),
            FaultClass::Wdf => t(None, WriteTransition { from: x, to: x }, nx, None),
            FaultClass::Rdf => t(None, ReadOf(x), nx, Some(nx)),
            FaultClass::Drdf => t(None, ReadOf(x), nx, Some(x)),
            FaultClass::Irf => t(None, ReadOf(x), x, Some(nx)),
            FaultClass::CfSt => t(Some(State(x)), State(y), ny, None),
            FaultClass::CfDsRx => t(Some(ReadOf(x)), State(y), ny, None),
            FaultClass::CfDsXwX => t(Some(WriteTransition { from: x, to: x }), State(y), ny, None),
            FaultClass::CfDsXwNotX => t(Some(WriteTransition { from: x, to: nx }), State(y), ny, None),
            FaultClass::CfTr => t(Some(State(x)), WriteTransition { from: y, to: ny }, y, None),
            FaultClass::CfWd => t(Some(State(x)), WriteTransition { from: y, to: y }, ny, None),
            FaultClass::CfRd => t(Some(State(x)), ReadOf(y), ny, Some(ny)),
            FaultClass::CfDrd => t(Some(State(x)), ReadOf(y), ny, Some(y)),
            FaultClass::CfIr => t(Some(State(x)), ReadOf(y), y, Some(ny)),
        }
    }

    /// Concrete primitives of this class: `x` before `x̄`, then `y` before `ȳ`, then `a<v` before `a>v`.
    pub fn instances(self) -> Vec<FaultPrimitive> {
        let t = self.template();
        let cond = |c: Condition<Sym>, x, y| match c {
            Condition::State(s) => Condition::State(s.eval(x, y)),
            Condition::ReadOf(s) => Condition::ReadOf(s.eval(x, y)),
            Condition::WriteTransition { from, to } => {
                Condition::WriteTransition { from: from.eval(x, y), to: to.eval(x, y) }
            }
            Condition::Always => Condition::Always,
        };
        let mut out = Vec::new();
        for x in CellState::ALL {
            let ys: &[CellState] = if self.is_two_cell() { &CellState::ALL } else { &[CellState::Zero] };
            for &y in ys {
                let victim = cond(t.victim, x, y);
                let faulty = t.faulty.eval(x, y);
                let read = t.read_output.map(|r| r.eval(x, y));
                match t.aggressor {
                    None => out.push(FaultPrimitive::single(victim, faulty, read).expect("template instance")),
                    Some(a) => {
                        for o in Orientation::ALL {
                            let fp = FaultPrimitive::coupled(cond(a, x, y), victim, faulty, read, o);
                            out.push(fp.expect("template instance"));
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for FaultClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FaultClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FaultClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown fault class '{s}'"))
    }
}

/// Every non-connectivity static fault primitive, in library class order.
pub fn enumerate_static_faults() -> Vec<FaultPrimitive> {
    FaultClass::ALL.iter().flat_map(|c| c.instances()).collect()
}
