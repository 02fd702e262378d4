mod common;

use common::*;
use marchtp::annotate::{annotate, Tri};
use marchtp::corpus::CORPUS;
use marchtp::fault_model::{enumerate_static_faults, parse_fault_primitive, FaultPrimitive};
use marchtp::march::{element_states, parse_march};
use marchtp::matcher::coverage;
use marchtp::oracle::oracle_coverage;
use marchtp::report::{diff_reports, disagreements};
use proptest::prelude::*;

fn arb_fault() -> impl Strategy<Value = FaultPrimitive> {
    let all = enumerate_static_faults();
    (0..all.len()).prop_map(move |i| all[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tuples_propagate(m in arb_march(6, 6)) {
        prop_assert_eq!(check_tuple_propagation(&m), Ok(()));
    }

    #[test]
    fn matching_is_monotone_in_x(m in arb_march(5, 5)) {
        prop_assert_eq!(check_x_monotonicity(&m), Ok(()));
    }

    #[test]
    fn mirror_symmetry(m in arb_march(6, 6)) {
        prop_assert_eq!(check_mirror_symmetry(&m), Ok(()));
    }

    #[test]
    fn golden_runs_are_sound(m in arb_march(6, 6), n in 3usize..7) {
        prop_assert_eq!(check_golden_soundness(&m, n), Ok(()));
    }

    #[test]
    fn witnesses_replay(m in arb_march(6, 6)) {
        prop_assert_eq!(check_witness_replay(&m, 4), Ok(()));
    }

    #[test]
    fn march_text_round_trips(m in arb_march(6, 6)) {
        let again = parse_march(&m.to_string()).unwrap();
        prop_assert_eq!(again.elements, m.elements);
    }

    #[test]
    fn fault_text_round_trips(fp in arb_fault()) {
        prop_assert_eq!(parse_fault_primitive(&fp.to_string()).unwrap(), fp);
        prop_assert_eq!(parse_fault_primitive(&fp.to_unicode()).unwrap(), fp);
        prop_assert_eq!(fp.mirrored().mirrored(), fp);
    }

    #[test]
    fn generated_marches_are_valid(m in arb_march(6, 6)) {
        prop_assert!(marchtp::validate_march(&m).is_empty());
        let states = element_states(&m);
        prop_assert!(states.iter().all(|s| s.end != Tri::X));
        prop_assert_eq!(annotate(&m).elements.len(), m.elements.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn matcher_agrees_with_oracle(m in arb_march(6, 6)) {
        let faults = enumerate_static_faults();
        let a = coverage(&m, &faults);
        let b = oracle_coverage(&m, &faults, 4).unwrap();
        prop_assert!(disagreements(&a, &b).is_empty(), "{}: {:?}", m, disagreements(&a, &b));
    }

    #[test]
    fn appending_an_element_keeps_detections(m in arb_march(4, 5), tail in arb_march(2, 4)) {
        let faults = enumerate_static_faults();
        let mut longer = m.clone();
        longer.elements.extend(march_from_tail(&m, &tail));
        prop_assume!(marchtp::validate_march(&longer).is_empty());
        let before = oracle_coverage(&m, &faults, 4).unwrap();
        let after = oracle_coverage(&longer, &faults, 4).unwrap();
        prop_assert!(diff_reports(&before, &after).lost.is_empty());
    }

    #[test]
    fn verdicts_do_not_depend_on_memory_size(m in arb_march(5, 5)) {
        prop_assert_eq!(check_placement_independence(&m, &enumerate_static_faults()), Ok(()));
    }
}

/// Elements of `tail` with their reads retargeted to the state `m` leaves behind.
fn march_from_tail(m: &marchtp::MarchAlgorithm, tail: &marchtp::MarchAlgorithm) -> Vec<marchtp::march::MarchElement> {
    let mut state = element_states(m).last().map(|s| s.end).and_then(Tri::known);
    tail.elements
        .iter()
        .map(|e| {
            let ops = e
                .ops
                .iter()
                .map(|op| match (op.is_read(), state) {
                    (true, Some(s)) => marchtp::MemOp::read(s),
                    _ => {
                        state = Some(op.value);
                        marchtp::MemOp::write(op.value)
                    }
                })
                .collect();
            marchtp::march::MarchElement { order: e.order, ops }
        })
        .collect()
}

#[test]
fn corpus_placement_independence() {
    for e in CORPUS {
        assert_eq!(check_placement_independence(&e.algorithm(), &enumerate_static_faults()), Ok(()), "{}", e.name);
    }
}

#[test]
fn corpus_witnesses_replay() {
    for e in CORPUS {
        let m = e.algorithm();
        for n in [3, 4, 5] {
            assert_eq!(check_witness_replay(&m, n), Ok(()), "{}", e.name);
        }
        assert_eq!(check_mirror_symmetry(&m), Ok(()), "{}", e.name);
    }
}

#[test]
fn type_invariants_reject_malformed_primitives() {
    for bad in ["<0;0/1/->", "<r0;r1/0/->a<v", "<0/0/->", "<r0/1/->", "<0w1/1/->", "<0;0/0/->a<v"] {
        assert!(parse_fault_primitive(bad).is_err(), "{bad}");
    }
}
