//! Sign-abstracted boolean transition analysis of reaction networks.
//!
//! This crate turns a chemical reaction network into a first-order
//! formula over the sign domain `{+, -, 0}` describing one abstract
//! ODE step, encodes that formula into propositional CNF, and drives an
//! incremental SAT solver to enumerate the boolean state transition graph
//! and its fixed points. A brute-force enumerator over the sign semantics
//! and a classic boolean-semantics baseline are included for comparison.
//!
//! Start with [`parse_native`] or [`parse_coresbml`] to obtain a
//! [`ReactionNetwork`], build the transition formula with [`build_fobnn`],
//! and analyze it through a [`SolverSession`]. The `examples/` directory
//! walks through each capability end to end.

pub mod backend;
pub mod classic;
pub mod cnf;
pub mod coresbml;
pub mod error;
pub mod flatten;
pub mod fobnn;
pub mod graph;
pub mod network;
pub mod oracle;
pub mod parse;
pub mod session;
pub mod sign;
pub mod state;
pub mod term;

pub use backend::{
    backend_by_name, backend_from_env, NaiveBackend, SatBackend, VarisatBackend, BACKEND_ENV,
};
pub use classic::{classic_stg, classic_successors};
pub use cnf::{emit_dimacs, encode, op_clauses, Cnf, VarRegistry};
pub use coresbml::parse_coresbml;
pub use error::{Error, Result};
pub use flatten::{flatten, FlatAtom, FlatFormula};
pub use fobnn::{build_fobnn, build_odes, detect_mass_action, Fobnn, FobnnAtom, OdeSystem};
pub use graph::{
    build_stg, compare, ComparisonReport, GraphKind, TransitionGraph, STG_SPECIES_LIMIT,
};
pub use network::{render_native, RateConstant, Reaction, ReactionNetwork};
pub use oracle::{
    brute_force_base_transitions, brute_force_extended_transitions, eval_formula, eval_term,
    satisfiable_under, FoFormula, SignAssignment,
};
pub use parse::parse_native;
pub use session::{open_session, SolverSession, DEFAULT_LOOP_LIMIT};
pub use sign::{abstract_apply, sign_of_rational, Op, Sign, SignRelation, SignSet};
pub use state::{BaseState, ExtendedState, Transition};
pub use term::{AnnotatedVar, Constant, Term, VarKind};
