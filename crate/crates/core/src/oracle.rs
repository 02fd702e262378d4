//! Brute-force fault-injection oracle.
//!
//! Runs a March algorithm on an `N`-cell memory with one fault primitive injected and
//! compares every read with a fault-free golden run. A primitive counts as detected
//! only if every placement, both power-up fills and every order of the Either elements
//! produce a mismatch.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fault_model::{CellState, Condition, FaultPrimitive, OpKind, Orientation};
use crate::march::{AddressOrder, MarchAlgorithm, OpRef};
use crate::report::{CoverageReport, Engine, MatchResult};

pub const DEFAULT_CELLS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryImage {
    pub cells: Vec<CellState>,
}

impl MemoryImage {
    pub fn filled(n: usize, fill: CellState) -> Self {
        MemoryImage { cells: vec![fill; n] }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaultPlacement {
    pub victim: usize,
    pub aggressor: Option<usize>,
}

impl fmt::Display for FaultPlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.aggressor {
            Some(a) => write!(f, "a={a} v={}", self.victim),
            None => write!(f, "v={}", self.victim),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub at: OpRef,
    pub address: usize,
    pub expected: CellState,
    pub observed: CellState,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "element {}, op {}, addr {}: expected {}, observed {}",
            self.at.element + 1,
            self.at.op + 1,
            self.address,
            self.expected,
            self.observed
        )
    }
}

/// Power-up fill and concrete element orders of one run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSetup {
    pub fill: CellState,
    pub orders: Vec<AddressOrder>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionVerdict {
    pub detected: bool,
    /// Mismatch of the first run when detected.
    pub first_mismatch: Option<Mismatch>,
    /// A run without any mismatch when undetected.
    pub escape: Option<RunSetup>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("memory needs at least 3 cells, got {0}")]
    TooFewCells(usize),
    #[error("placement {placement} is invalid for {fp} in {cells} cells")]
    InvalidPlacement { fp: FaultPrimitive, placement: FaultPlacement, cells: usize },
}

/// Oracle settings: memory size and optional fixed power-up content.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub cells: usize,
    pub initial: Option<CellState>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { cells: DEFAULT_CELLS, initial: None }
    }
}

impl OracleOptions {
    pub fn fills(&self) -> Vec<CellState> {
        match self.initial {
            Some(s) => vec![s],
            None => CellState::ALL.to_vec(),
        }
    }
}

struct FaultyMemory<'a> {
    cells: Vec<CellState>,
    fault: Option<(&'a FaultPrimitive, FaultPlacement)>,
}

impl FaultyMemory<'_> {
    fn aggressor_holds(&self, fp: &FaultPrimitive, p: FaultPlacement) -> bool {
        match (fp.aggressor(), p.aggressor) {
            (None, _) => true,
            (Some(Condition::State(x)), Some(a)) => self.cells[a] == x,
            _ => false,
        }
    }

    fn settle(&mut self) {
        let Some((fp, p)) = self.fault else { return };
        let v = p.victim;
        match (fp.aggressor(), fp.victim()) {
            (None, Condition::Always) => self.cells[v] = fp.faulty_value(),
            (None, Condition::State(s)) if self.cells[v] == s => self.cells[v] = fp.faulty_value(),
            (Some(Condition::State(x)), Condition::State(y))
                if p.aggressor.is_some_and(|a| self.cells[a] == x) && self.cells[v] == y =>
            {
                self.cells[v] = fp.faulty_value();
            }
            _ => {}
        }
    }

    fn write(&mut self, addr: usize, value: CellState) {
        let old = self.cells[addr];
        let mut new = value;
        if let Some((fp, p)) = self.fault {
            if addr == p.victim {
                if let Condition::WriteTransition { from, to } = fp.victim() {
                    if old == from && value == to && self.aggressor_holds(fp, p) {
                        new = fp.faulty_value();
                    }
                }
            }
            self.cells[addr] = new;
            if Some(addr) == p.aggressor {
                if let (Some(Condition::WriteTransition { from, to }), Condition::State(y)) =
                    (fp.aggressor(), fp.victim())
                {
                    if old == from && value == to && self.cells[p.victim] == y {
                        self.cells[p.victim] = fp.faulty_value();
                    }
                }
            }
        } else {
            self.cells[addr] = new;
        }
        self.settle();
    }

    fn read(&mut self, addr: usize) -> CellState {
        let cur = self.cells[addr];
        let mut out = cur;
        if let Some((fp, p)) = self.fault {
            if addr == p.victim {
                if let Condition::ReadOf(s) = fp.victim() {
                    if cur == s && self.aggressor_holds(fp, p) {
                        self.cells[addr] = fp.faulty_value();
                        out = fp.read_output().expect("read primitive has a read output");
                    }
                }
            }
            if Some(addr) == p.aggressor {
                if let (Some(Condition::ReadOf(x)), Condition::State(y)) = (fp.aggressor(), fp.victim()) {
                    if cur == x && self.cells[p.victim] == y {
                        self.cells[p.victim] = fp.faulty_value();
                    }
                }
            }
        }
        self.settle();
        out
    }
}

fn addresses(order: AddressOrder, n: usize) -> Box<dyn Iterator<Item = usize>> {
    match order {
        AddressOrder::Down => Box::new((0..n).rev()),
        _ => Box::new(0..n),
    }
}

/// One golden and one faulty execution in lock step; returns the first read whose
/// faulty output differs from the golden output.
pub fn run_once(
    m: &MarchAlgorithm,
    fault: Option<(&FaultPrimitive, FaultPlacement)>,
    n: usize,
    fill: CellState,
    orders: &[AddressOrder],
) -> Option<Mismatch> {
    let mut golden = FaultyMemory { cells: vec![fill; n], fault: None };
    let mut faulty = FaultyMemory { cells: vec![fill; n], fault };
    faulty.settle();
    for (ei, e) in m.elements.iter().enumerate() {
        for addr in addresses(orders[ei], n) {
            for (oi, op) in e.ops.iter().enumerate() {
                match op.kind {
                    OpKind::Write => {
                        golden.write(addr, op.value);
                        faulty.write(addr, op.value);
                    }
                    OpKind::Read => {
                        let expected = golden.read(addr);
                        let observed = faulty.read(addr);
                        if expected != observed {
                            return Some(Mismatch {
                                at: OpRef { element: ei, op: oi },
                                address: addr,
                                expected,
                                observed,
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

/// First golden read that disagrees with the value the March expects.
pub fn golden_mismatch(m: &MarchAlgorithm, n: usize, fill: CellState, orders: &[AddressOrder]) -> Option<Mismatch> {
    let mut mem = MemoryImage::filled(n, fill);
    for (ei, e) in m.elements.iter().enumerate() {
        for addr in addresses(orders[ei], n) {
            for (oi, op) in e.ops.iter().enumerate() {
                match op.kind {
                    OpKind::Write => mem.cells[addr] = op.value,
                    OpKind::Read if mem.cells[addr] != op.value => {
                        return Some(Mismatch {
                            at: OpRef { element: ei, op: oi },
                            address: addr,
                            expected: op.value,
                            observed: mem.cells[addr],
                        })
                    }
                    OpKind::Read => {}
                }
            }
        }
    }
    None
}

/// Every legal placement of a primitive in an `n`-cell memory, victim-major.
pub fn placements(fp: &FaultPrimitive, n: usize) -> Vec<FaultPlacement> {
    let mut out = Vec::new();
    for v in 0..n {
        match fp.orientation() {
            None => out.push(FaultPlacement { victim: v, aggressor: None }),
            Some(o) => {
                for a in 0..n {
                    let ok = match o {
                        Orientation::AggressorLow => a < v,
                        Orientation::AggressorHigh => a > v,
                    };
                    if ok {
                        out.push(FaultPlacement { victim: v, aggressor: Some(a) });
                    }
                }
            }
        }
    }
    out
}

fn check_placement(fp: &FaultPrimitive, p: FaultPlacement, n: usize) -> Result<(), OracleError> {
    if n < 3 {
        return Err(OracleError::TooFewCells(n));
    }
    let ok = p.victim < n
        && match (fp.orientation(), p.aggressor) {
            (None, None) => true,
            (Some(Orientation::AggressorLow), Some(a)) => a < p.victim,
            (Some(Orientation::AggressorHigh), Some(a)) => a > p.victim && a < n,
            _ => false,
        };
    if ok {
        Ok(())
    } else {
        Err(OracleError::InvalidPlacement { fp: *fp, placement: p, cells: n })
    }
}

pub fn simulate_fault(
    m: &MarchAlgorithm,
    fp: &FaultPrimitive,
    p: FaultPlacement,
    n: usize,
) -> Result<DetectionVerdict, OracleError> {
    simulate_fault_with(m, fp, p, OracleOptions { cells: n, initial: None })
}

pub fn simulate_fault_with(
    m: &MarchAlgorithm,
    fp: &FaultPrimitive,
    p: FaultPlacement,
    opts: OracleOptions,
) -> Result<DetectionVerdict, OracleError> {
    check_placement(fp, p, opts.cells)?;
    let mut first = None;
    for fill in opts.fills() {
        for orders in m.order_assignments() {
            match run_once(m, Some((fp, p)), opts.cells, fill, &orders) {
                Some(mm) => {
                    first.get_or_insert(mm);
                }
                None => {
                    return Ok(DetectionVerdict {
                        detected: false,
                        first_mismatch: None,
                        escape: Some(RunSetup { fill, orders }),
                    })
                }
            }
        }
    }
    Ok(DetectionVerdict { detected: true, first_mismatch: first, escape: None })
}

/// Oracle verdict over all placements; returns the first placement's mismatch when detected.
pub fn detect_all_placements(
    m: &MarchAlgorithm,
    fp: &FaultPrimitive,
    opts: OracleOptions,
) -> Result<MatchResult, OracleError> {
    let mut mismatch = None;
    for p in placements(fp, opts.cells) {
        let v = simulate_fault_with(m, fp, p, opts)?;
        if !v.detected {
            return Ok(MatchResult {
                primitive: *fp,
                detected: false,
                witness: None,
                mismatch: None,
                placement: Some(p),
            });
        }
        if mismatch.is_none() {
            mismatch = v.first_mismatch.map(|mm| (mm, p));
        }
    }
    let (mm, p) = mismatch.expect("at least one placement");
    Ok(MatchResult { primitive: *fp, detected: true, witness: None, mismatch: Some(mm), placement: Some(p) })
}

pub fn oracle_coverage(m: &MarchAlgorithm, faults: &[FaultPrimitive], n: usize) -> Result<CoverageReport, OracleError> {
    oracle_coverage_with(m, faults, OracleOptions { cells: n, initial: None })
}

pub fn oracle_coverage_with(
    m: &MarchAlgorithm,
    faults: &[FaultPrimitive],
    opts: OracleOptions,
) -> Result<CoverageReport, OracleError> {
    if opts.cells < 3 {
        return Err(OracleError::TooFewCells(opts.cells));
    }
    let results = faults.par_iter().map(|fp| detect_all_placements(m, fp, opts)).collect::<Result<Vec<_>, _>>()?;
    Ok(CoverageReport { algorithm: m.label(), engine: Engine::Oracle, results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::march::parse_march;

    fn fp(s: &str) -> FaultPrimitive {
        s.parse().unwrap()
    }

    #[test]
    fn drdf_in_march_sr() {
        let m = parse_march("b(w0); u(r0,w1,r1,w0); u(r0,r0); u(w1); d(r1,w0,r0,w1); d(r1,r1)").unwrap();
        let f = fp("<r0/1/0>");
        for p in placements(&f, 4) {
            let v = simulate_fault(&m, &f, p, 4).unwrap();
            assert!(v.detected);
            let mm = v.first_mismatch.unwrap();
            assert_eq!(m.op_number(mm.at), 7);
        }
        let wdf = fp("<0w0/1/->");
        assert!(!simulate_fault(&m, &wdf, FaultPlacement { victim: 2, aggressor: None }, 4).unwrap().detected);
    }

    #[test]
    fn stuck_at_zero_fails_first_expected_one() {
        let m = parse_march("b(w0); u(r0,w1); d(r1,w0)").unwrap();
        let v = simulate_fault(&m, &fp("<forall/0/->"), FaultPlacement { victim: 1, aggressor: None }, 4).unwrap();
        assert!(v.detected);
        assert_eq!(v.first_mismatch.unwrap().to_string(), "element 3, op 1, addr 1: expected 1, observed 0");
    }

    #[test]
    fn placement_checks() {
        let m = parse_march("b(w0)").unwrap();
        let f = fp("<0;0/1/->a<v");
        assert!(simulate_fault(&m, &f, FaultPlacement { victim: 0, aggressor: Some(1) }, 4).is_err());
        assert!(simulate_fault(&m, &f, FaultPlacement { victim: 1, aggressor: None }, 4).is_err());
        assert!(simulate_fault(&m, &f, FaultPlacement { victim: 1, aggressor: Some(0) }, 2).is_err());
        assert_eq!(placements(&f, 4).len(), 6);
    }

    #[test]
    fn golden_run_follows_march() {
        let m = parse_march("b(w1); d(r1,w0); u(r0)").unwrap();
        for orders in m.order_assignments() {
            assert_eq!(golden_mismatch(&m, 4, CellState::Zero, &orders), None);
            assert_eq!(run_once(&m, None, 4, CellState::One, &orders), None);
        }
    }
}
