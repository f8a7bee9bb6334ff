//! Domain-consistency propagators for global constraints whose complete
//! filtering is intractable in general but fixed-parameter tractable.
//!
//! - [`regular`] unfolds a layered automaton and keeps values on accepting
//!   paths; [`automata`] supplies automata for NValue, Uses, CardPath and
//!   ValSymBreak.
//! - [`backdoor`] enumerates a small set of 0/1 variables and unions the
//!   results of an exact residual filter (Disjoint, Among, Roots).
//! - [`interval`] lifts a bound-consistency propagator to domain
//!   consistency by enumerating runs of holey domains (sum).
//! - [`oracle`] is the brute-force reference every propagator is tested
//!   against.

pub mod automata;
pub mod backdoor;
pub mod config;
pub mod constraint;
pub mod domain;
pub mod engine;
pub mod error;
pub mod interval;
pub mod oracle;
pub mod random;
pub mod regular;
pub mod state;

pub use automata::{Permutation, TuplePredicate};
pub use config::Config;
pub use constraint::{Constraint, ConstraintPropagator, Kind};
pub use domain::{Domain, Value, VALUE_MAX, VALUE_MIN};
pub use engine::{fixpoint, Fixpoint, Propagator};
pub use error::{Error, Result};
pub use state::{FilterOutcome, ProblemState, Pruning, SetVarId, SetVariable, Status, VarId};
