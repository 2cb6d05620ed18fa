//! MAP inference for Markov logic networks.
//!
//! The pipeline: parse a weighted first-order model and ground-atom evidence,
//! then iteratively ground only the clauses that matter for the current
//! intermediate solution, aggregate symmetric groundings into counting
//! constraints, compile everything into an integer linear program, and solve
//! it with a built-in branch-and-bound under a relative-gap contract. The
//! loop repeats until no new groundings appear, at which point the last
//! solution is a MAP state.
//!
//! Entry points: [`parse::parse_mln`], [`evidence::parse_evidence`], and
//! [`engine::solve_map`]. The `cpa-map` binary wraps them in a CLI.

pub mod atoms;
pub mod cpa;
pub mod engine;
pub mod error;
pub mod evidence;
pub mod grounder;
pub mod ilp;
pub mod interpretation;
pub mod model;
pub mod parse;
pub mod report;
pub mod solver;
pub mod symbols;

pub use atoms::{AtomId, AtomTable, GroundClause};
pub use engine::{first_iteration_ilp, fixpoint_violations, solve_map, EngineConfig, MapResult};
pub use error::{Error, Result};
pub use evidence::{parse_evidence, EvidenceSet};
pub use ilp::IlpModel;
pub use interpretation::{initial_interpretation, interpretation_weight, Interpretation};
pub use model::{MlnModel, Weight};
pub use parse::parse_mln;
pub use report::RunReport;
pub use solver::brute::brute_force_map;
pub use solver::lp::{export_lp, parse_lp};
pub use solver::{solve_ilp, Solution, Status};
