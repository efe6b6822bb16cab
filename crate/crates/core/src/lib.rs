//! Synthesis of graph-state transformations.
//!
//! A graph state can be reshaped by local complementation (LC), vertex
//! deletion (VD) and, on selected pairs, edge flips (EF). This crate encodes
//! "can source reach target in at most d steps" as a SAT formula, searches
//! for the shortest d, decodes and replays the operation sequence, and
//! decides unreachability under LC+VD with a completeness threshold.

pub mod bmc;
pub mod cnf;
pub mod encoder;
pub mod error;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod solver;
pub mod witness;

pub use bmc::{synthesize, SearchOptions, SynthesisOutcome, Verdict};
pub use cnf::{CnfFormula, Lit, SolveResult};
pub use encoder::{encode_bmc, encode_search, StepLayout, SynthesisInstance};
pub use error::{Error, Result};
pub use graph::{Graph, Operation, Pair};
pub use instance::InstanceFile;
pub use solver::{default_backend, ExternalSolver, SatBackend};
pub use witness::Witness;

#[cfg(feature = "cadical")]
pub use solver::InProcessSolver;
