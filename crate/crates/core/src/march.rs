//! March algorithm DSL: parsing, validation, pretty-printing and per-element states.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! march   := element (';' element)* ';'?
//! element := order '(' op (',' op)* ')'
//! order   := 'u' | 'd' | 'b' | '⇑' | '⇓' | '⇕'
//! op      := ('r' | 'w' | 'R' | 'W') ('0' | '1')
//! ```
//!
//! `//` starts a comment that runs to the end of the line.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotate::Tri;
use crate::fault_model::{CellState, MemOp, OpKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AddressOrder {
    Up,
    Down,
    Either,
}

impl AddressOrder {
    pub fn symbol(self) -> &'static str {
        match self {
            AddressOrder::Up => "⇑",
            AddressOrder::Down => "⇓",
            AddressOrder::Either => "⇕",
        }
    }

    /// Concrete orders this order admits.
    pub fn concrete(self) -> &'static [AddressOrder] {
        match self {
            AddressOrder::Up => &[AddressOrder::Up],
            AddressOrder::Down => &[AddressOrder::Down],
            AddressOrder::Either => &[AddressOrder::Up, AddressOrder::Down],
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            AddressOrder::Up => AddressOrder::Down,
            AddressOrder::Down => AddressOrder::Up,
            AddressOrder::Either => AddressOrder::Either,
        }
    }
}

impl fmt::Display for AddressOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AddressOrder::Up => "u",
            AddressOrder::Down => "d",
            AddressOrder::Either => "b",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarchElement {
    pub order: AddressOrder,
    pub ops: Vec<MemOp>,
}

impl fmt::Display for MarchElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.order)?;
        for (i, op) in self.ops.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{op}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarchAlgorithm {
    pub name: Option<String>,
    pub elements: Vec<MarchElement>,
}

/// Position of one operation: zero-based element and op index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OpRef {
    pub element: usize,
    pub op: usize,
}

impl MarchAlgorithm {
    pub fn new(elements: Vec<MarchElement>) -> Self {
        MarchAlgorithm { name: None, elements }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn op_count(&self) -> usize {
        self.elements.iter().map(|e| e.ops.len()).sum()
    }

    /// One-based position of an operation when all operations are numbered in sequence.
    pub fn op_number(&self, at: OpRef) -> usize {
        self.elements[..at.element].iter().map(|e| e.ops.len()).sum::<usize>() + at.op + 1
    }

    pub fn op_at(&self, at: OpRef) -> MemOp {
        self.elements[at.element].ops[at.op]
    }

    /// Swaps Up and Down in every element.
    pub fn mirrored(&self) -> Self {
        let elements =
            self.elements.iter().map(|e| MarchElement { order: e.order.mirrored(), ops: e.ops.clone() }).collect();
        MarchAlgorithm { name: self.name.clone(), elements }
    }

    /// Every concrete order assignment, Either elements enumerated Up-first.
    pub fn order_assignments(&self) -> Vec<Vec<AddressOrder>> {
        let mut out = vec![Vec::with_capacity(self.elements.len())];
        for e in &self.elements {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    e.order.concrete().iter().map(move |&o| {
                        let mut p = prefix.clone();
                        p.push(o);
                        p
                    })
                })
                .collect();
        }
        out
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.to_string())
    }
}

impl fmt::Display for MarchAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for MarchAlgorithm {
    type Err = MarchParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_march(s)
    }
}

pub fn format_march(m: &MarchAlgorithm) -> String {
    m.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct MarchParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Lexer {
    chars: Vec<(usize, usize, char)>,
    at: usize,
    end: (usize, usize),
}

impl Lexer {
    fn new(text: &str) -> Self {
        let mut chars = Vec::new();
        let mut end = (1, 1);
        for (ln, line) in text.lines().enumerate() {
            let body = line.split("//").next().unwrap_or("");
            for (col, c) in body.chars().enumerate() {
                if !c.is_whitespace() {
                    chars.push((ln + 1, col + 1, c));
                }
            }
            end = (ln + 1, line.chars().count() + 1);
        }
        Lexer { chars, at: 0, end }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|t| t.2)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.at += 1;
        c
    }

    fn error(&self, message: impl Into<String>) -> MarchParseError {
        let (line, column) = self.chars.get(self.at).map_or(self.end, |t| (t.0, t.1));
        MarchParseError { line, column, message: message.into() }
    }

    fn expect(&mut self, c: char) -> Result<(), MarchParseError> {
        if self.peek() == Some(c) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }
}

pub fn parse_march(text: &str) -> Result<MarchAlgorithm, MarchParseError> {
    let mut lx = Lexer::new(text);
    let mut elements = Vec::new();
    loop {
        let order = match lx.peek() {
            Some('u' | 'U' | '⇑') => AddressOrder::Up,
            Some('d' | 'D' | '⇓') => AddressOrder::Down,
            Some('b' | 'B' | '⇕') => AddressOrder::Either,
            None if !elements.is_empty() => break,
            _ => return Err(lx.error("expected address order 'u', 'd' or 'b'")),
        };
        lx.bump();
        lx.expect('(')?;
        if lx.peek() == Some(')') {
            return Err(lx.error("empty March element"));
        }
        let mut ops = Vec::new();
        loop {
            let kind = match lx.peek() {
                Some('r' | 'R') => OpKind::Read,
                Some('w' | 'W') => OpKind::Write,
                _ => return Err(lx.error("expected operation 'r' or 'w'")),
            };
            lx.bump();
            let value = match lx.peek() {
                Some('0') => CellState::Zero,
                Some('1') => CellState::One,
                _ => return Err(lx.error("expected '0' or '1'")),
            };
            lx.bump();
            ops.push(MemOp { kind, value });
            match lx.peek() {
                Some(',') => {
                    lx.bump();
                }
                Some(')') => {
                    lx.bump();
                    break;
                }
                _ => return Err(lx.error("expected ',' or ')'")),
            }
        }
        elements.push(MarchElement { order, ops });
        match lx.peek() {
            Some(';') => {
                lx.bump();
            }
            None => break,
            _ => return Err(lx.error("expected ';' between elements")),
        }
    }
    Ok(MarchAlgorithm::new(elements))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementStates {
    pub initial: Tri,
    pub end: Tri,
}

pub fn element_states(m: &MarchAlgorithm) -> Vec<ElementStates> {
    element_states_from(m, Tri::X)
}

/// Element states when memory starts in `initial` (`Tri::X` when unknown).
pub fn element_states_from(m: &MarchAlgorithm, initial: Tri) -> Vec<ElementStates> {
    let mut state = initial;
    m.elements
        .iter()
        .map(|e| {
            let start = state;
            for op in &e.ops {
                if op.kind == OpKind::Write {
                    state = op.value.into();
                }
            }
            ElementStates { initial: start, end: state }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagnosticKind {
    ReadBeforeInit { expected: CellState },
    ReadMismatch { expected: CellState, held: CellState },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub at: OpRef,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "element {}, op {}: ", self.at.element + 1, self.at.op + 1)?;
        match self.kind {
            DiagnosticKind::ReadBeforeInit { expected } => {
                write!(f, "read expects {expected} before any initialization (cell state x)")
            }
            DiagnosticKind::ReadMismatch { expected, held } => {
                write!(f, "read expects {expected} but cell holds {held}")
            }
        }
    }
}

pub fn validate_march(m: &MarchAlgorithm) -> Vec<Diagnostic> {
    validate_march_from(m, Tri::X)
}

pub fn validate_march_from(m: &MarchAlgorithm, initial: Tri) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut state = initial;
    for (ei, e) in m.elements.iter().enumerate() {
        for (oi, op) in e.ops.iter().enumerate() {
            let at = OpRef { element: ei, op: oi };
            match (op.kind, state.known()) {
                (OpKind::Write, _) => state = op.value.into(),
                (OpKind::Read, None) => {
                    out.push(Diagnostic { at, kind: DiagnosticKind::ReadBeforeInit { expected: op.value } })
                }
                (OpKind::Read, Some(held)) if held != op.value => {
                    out.push(Diagnostic { at, kind: DiagnosticKind::ReadMismatch { expected: op.value, held } })
                }
                (OpKind::Read, Some(_)) => {}
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MARCH_A: &str = "b(w0); u(r0,w1,w0,w1); u(r1,w0,w1); d(r1,w0,w1,w0); d(r0,w1,w0)";

    #[test]
    fn parse_and_format() {
        let m = parse_march(MARCH_A).unwrap();
        assert_eq!(m.elements.len(), 5);
        assert_eq!(m.to_string(), MARCH_A);
        let u = parse_march("⇕(W0);⇑(R0 , W1);\n⇓(r1,w0);").unwrap();
        assert_eq!(u.to_string(), "b(w0); u(r0,w1); d(r1,w0)");
    }

    #[test]
    fn parse_errors() {
        let e = parse_march("u()").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        assert!(parse_march("").is_err());
        assert!(parse_march("u(r2)").is_err());
        let e = parse_march("b(w0);\nx(r0)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
    }

    #[test]
    fn comments_are_ignored() {
        let m = parse_march("// MATS+\nb(w0); // init\nu(r0,w1); d(r1,w0)").unwrap();
        assert_eq!(m.elements.len(), 3);
    }

    #[test]
    fn states_of_march_a() {
        let m = parse_march(MARCH_A).unwrap();
        let s: Vec<(Tri, Tri)> = element_states(&m).iter().map(|s| (s.initial, s.end)).collect();
        use Tri::*;
        assert_eq!(s, vec![(X, Zero), (Zero, One), (One, One), (One, Zero), (Zero, Zero)]);
    }

    #[test]
    fn validation() {
        assert!(validate_march(&parse_march(MARCH_A).unwrap()).is_empty());
        let d = validate_march(&parse_march("b(w0); u(r0,w1,r0)").unwrap());
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].to_string(), "element 2, op 3: read expects 0 but cell holds 1");
        let d = validate_march(&parse_march("u(r0)").unwrap());
        assert!(matches!(d[0].kind, DiagnosticKind::ReadBeforeInit { .. }));
        assert!(validate_march_from(&parse_march("u(r0)").unwrap(), Tri::Zero).is_empty());
    }

    #[test]
    fn op_numbers() {
        let m = parse_march(MARCH_A).unwrap();
        assert_eq!(m.op_number(OpRef { element: 3, op: 3 }), 12);
        assert_eq!(m.op_number(OpRef { element: 4, op: 0 }), 13);
    }
}
