#![allow(dead_code)]

use marchtp::annotate::{annotate, Tri};
use marchtp::fault_model::{enumerate_static_faults, CellState, FaultPrimitive, MemOp, OpKind};
use marchtp::march::{validate_march, AddressOrder, MarchAlgorithm, MarchElement, OpRef};
use marchtp::matcher::{coverage, match_tp, Sensitization};
use marchtp::oracle::{golden_mismatch, oracle_coverage, placements, run_once};
use marchtp::test_primitive::{derive_test_primitive, state_tuples_for_test_primitive};
use proptest::prelude::*;
use rand::Rng;

/// One element as raw choices: order selector and (is_write, value) per op.
pub type ElementChoice = (u8, Vec<(bool, bool)>);

/// Builds a valid March from raw choices. Reads always expect the tracked
/// uniform state, and any op issued while the state is unknown becomes a write.
pub fn march_from_choices(choices: &[ElementChoice]) -> MarchAlgorithm {
    let mut state: Option<CellState> = None;
    let elements = choices
        .iter()
        .map(|(order, ops)| {
            let order = [AddressOrder::Up, AddressOrder::Down, AddressOrder::Either][*order as usize % 3];
            let ops = ops
                .iter()
                .map(|&(write, value)| match state {
                    Some(s) if !write => MemOp::read(s),
                    _ => {
                        let v = CellState::from_bit(value);
                        state = Some(v);
                        MemOp::write(v)
                    }
                })
                .collect();
            MarchElement { order, ops }
        })
        .collect();
    MarchAlgorithm::new(elements)
}

pub fn random_march<R: Rng>(rng: &mut R, max_elements: usize, max_ops: usize) -> MarchAlgorithm {
    let n = rng.random_range(1..=max_elements);
    let choices: Vec<ElementChoice> = (0..n)
        .map(|_| {
            let k = rng.random_range(1..=max_ops);
            (rng.random_range(0..3), (0..k).map(|_| (rng.random(), rng.random())).collect())
        })
        .collect();
    march_from_choices(&choices)
}

pub fn arb_march(max_elements: usize, max_ops: usize) -> impl Strategy<Value = MarchAlgorithm> {
    prop::collection::vec((0u8..3, prop::collection::vec(any::<(bool, bool)>(), 1..=max_ops)), 1..=max_elements)
        .prop_map(|c| march_from_choices(&c))
}

/// Reads keep the tuple, writes replace CAS only, and each element starts from
/// the order-specific initial tuple.
pub fn check_tuple_propagation(m: &MarchAlgorithm) -> Result<(), String> {
    let am = annotate(m);
    for (ei, (e, el)) in m.elements.iter().zip(&am.elements).enumerate() {
        for c in &el.candidates {
            let (init, end) = (el.states.initial, el.states.end);
            let first = c.before[0];
            let expect = match c.order {
                AddressOrder::Up => (end, init, init),
                _ => (init, init, end),
            };
            if (first.las, first.cas, first.has) != expect {
                return Err(format!("element {}: first tuple {first}", ei + 1));
            }
            let mut after = c.before.iter().skip(1).copied().chain(std::iter::once(c.after));
            for (op, before) in e.ops.iter().zip(&c.before) {
                let next = after.next().expect("one tuple per op");
                let want = match op.kind {
                    OpKind::Read => *before,
                    OpKind::Write => before.with_cas(Tri::from(op.value)),
                };
                if next != want {
                    return Err(format!("element {}: {before} {op} -> {next}", ei + 1));
                }
            }
        }
    }
    Ok(())
}

/// Replacing a known slot of a requirement tuple by `x` never loses a match.
pub fn check_x_monotonicity(m: &MarchAlgorithm) -> Result<(), String> {
    let am = annotate(m);
    for fp in enumerate_static_faults() {
        for req in state_tuples_for_test_primitive(&derive_test_primitive(&fp), None) {
            if !match_tp(&am, &req, &fp).detected {
                continue;
            }
            let slots = [req.tuple.las, req.tuple.cas, req.tuple.has];
            for i in 0..3 {
                if slots[i] == Tri::X {
                    continue;
                }
                let mut s = slots;
                s[i] = Tri::X;
                let mut weak = req.clone();
                weak.tuple = marchtp::StateTuple::new(s[0], s[1], s[2]);
                if !match_tp(&am, &weak, &fp).detected {
                    return Err(format!("{fp}: {req} matches but {} does not", weak.tuple));
                }
            }
        }
    }
    Ok(())
}

/// Coverage of the mirrored March equals coverage of the mirrored primitives.
pub fn check_mirror_symmetry(m: &MarchAlgorithm) -> Result<(), String> {
    let faults = enumerate_static_faults();
    let a = coverage(m, &faults);
    let b = coverage(&m.mirrored(), &faults);
    for r in &a.results {
        let mirrored = b.result(&r.primitive.mirrored()).expect("mirrored primitive enumerated");
        if mirrored.detected != r.detected {
            return Err(format!("{}: {} vs mirrored {}", r.primitive, r.detected, mirrored.detected));
        }
    }
    Ok(())
}

/// A valid March never mismatches without a fault.
pub fn check_golden_soundness(m: &MarchAlgorithm, n: usize) -> Result<(), String> {
    if !validate_march(m).is_empty() {
        return Err(format!("{m} is not valid"));
    }
    for fill in CellState::ALL {
        for orders in m.order_assignments() {
            if let Some(mm) = golden_mismatch(m, n, fill, &orders) {
                return Err(format!("golden run expects other data: {mm}"));
            }
            if let Some(mm) = run_once(m, None, n, fill, &orders) {
                return Err(format!("fault-free run mismatched: {mm}"));
            }
        }
    }
    Ok(())
}

pub fn check_placement_independence(m: &MarchAlgorithm, faults: &[FaultPrimitive]) -> Result<(), String> {
    let detected: Vec<Vec<FaultPrimitive>> =
        [3, 4, 5].iter().map(|&n| oracle_coverage(m, faults, n).expect("n >= 3").detected()).collect();
    if detected[0] != detected[1] || detected[1] != detected[2] {
        return Err(format!("{m}: N=3 {} N=4 {} N=5 {}", detected[0].len(), detected[1].len(), detected[2].len()));
    }
    Ok(())
}

/// Replaying a matcher witness in the simulator mismatches first at the witnessed
/// detection op, on the victim, for every placement.
pub fn check_witness_replay(m: &MarchAlgorithm, n: usize) -> Result<(), String> {
    let faults = enumerate_static_faults();
    for r in coverage(m, &faults).results {
        let Some(w) = r.witness else { continue };
        let at: OpRef = match (w.detection_op, w.sensitization) {
            (Some(d), _) => d,
            (None, Sensitization::Operation(s)) => s,
            (None, Sensitization::State(_)) => return Err(format!("{}: witness without a read", r.primitive)),
        };
        for p in placements(&r.primitive, n) {
            match run_once(m, Some((&r.primitive, p)), n, w.fill, &w.order_used) {
                Some(mm) if mm.at == at && mm.address == p.victim => {}
                other => {
                    return Err(format!(
                        "{} at {p}: witness op {} but replay gave {}",
                        r.primitive,
                        m.op_number(at),
                        other.map_or("no mismatch".to_string(), |mm| mm.to_string())
                    ))
                }
            }
        }
    }
    Ok(())
}
