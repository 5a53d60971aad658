//! Model repair for finite Kripke structures and turn-based game structures.
//!
//! Given a structure `M` and a CTL (or ATL) formula `eta` that `M` violates,
//! the toolkit decides whether some total substructure of `M` satisfies `eta`.
//! The question is compiled into a propositional formula, handed to a SAT
//! solver, and a satisfying assignment is decoded back into a repaired
//! structure, which is re-verified by an explicit-state model checker before
//! it is returned.
//!
//! The pipeline is split into small modules:
//!
//! * [`kripke`]: structures, validation, substructure tests, a text format.
//! * [`formula`]: CTL/ATL syntax, parsing, desugaring, sub-formula closure.
//! * [`checker`]: explicit-state model checking with full labeling output.
//! * [`encoder`]: the repair encoding as a boolean circuit over edge and
//!   satisfaction variables, plus optional constraint groups (uncontrollable
//!   edges, state deletion, symmetry, reachability, transition families).
//! * [`cnf`]: Tseitin conversion and DIMACS input/output.
//! * [`solver`]: an embedded CDCL solver, an external-solver adapter, and
//!   projected solution enumeration.
//! * [`engine`]: the end-to-end repair drivers, a brute-force cross-check,
//!   generators for random structures and 3SAT-derived instances.
//! * [`skeleton`]: concurrent-program repair via synchronization skeletons
//!   and their global state transition graphs.

pub mod checker;
pub mod cnf;
pub mod encoder;
pub mod engine;
pub mod formula;
pub mod kripke;
pub mod skeleton;
pub mod solver;

pub use kripke::{GameStructure, KripkeStructure, StateId};
