//! Test-primitive based fault-coverage analysis of March memory tests.
//!
//! The pipeline: [`fault_model`] enumerates static fault primitives,
//! [`test_primitive`] derives a test primitive and its state-tuple requirements for
//! each, [`march`] parses a March algorithm, [`annotate`] attaches a state tuple to
//! every operation, and [`matcher`] decides which primitives the algorithm detects.
//! [`oracle`] answers the same question by brute-force fault injection.

pub mod annotate;
pub mod corpus;
pub mod fault_model;
pub mod march;
pub mod matcher;
pub mod oracle;
pub mod report;
pub mod test_primitive;

pub use annotate::{annotate, annotate_from, AnnotatedMarch, StateTuple, Tri};
pub use fault_model::{
    enumerate_static_faults, format_fault_primitive, parse_fault_primitive, CellState, Condition, FaultClass,
    FaultPrimitive, MemOp, Orientation,
};
pub use march::{element_states, format_march, parse_march, validate_march, AddressOrder, MarchAlgorithm, OpRef};
pub use matcher::{coverage, match_tp, MatchWitness, Semantics};
pub use oracle::{oracle_coverage, simulate_fault, FaultPlacement};
pub use report::{CoverageReport, MatchResult};
pub use test_primitive::{
    derive_test_primitive, state_tuples_for_test_primitive, test_primitive_library, TestPrimitive,
};
