//! Herbrand models induced by ordered rewriting with a saturated set of
//! unit equations, and desk-scale checks on them.
//!
//! A saturated set `E` together with a reduction ordering total on ground
//! terms gives a model whose domain is the set of ground normal forms and
//! whose operations apply a symbol and normalize. This crate builds that
//! model ([`rewrite`], [`model`]), checks it against problem clauses at a
//! bounded term depth, produces saturations itself ([`completion`]),
//! searches for small finite models ([`finite`]) and generates the
//! magma implication problems this applies to ([`etp`]).

pub mod completion;
pub mod equation;
pub mod etp;
pub mod finite;
pub mod model;
pub mod ordering;
pub mod rewrite;
pub mod term;
pub mod tptp;

pub use completion::{complete, saturate_or_load, CompletionError, CompletionOutcome, Limits, ResourceLimit};
pub use equation::{Equation, Rule};
pub use etp::{enumerate_equations, implication_problem, MagmaEquation};
pub use finite::{no_finite_model_up_to, search_finite_model, FiniteInterpretation, FiniteReport};
pub use model::{verify_countermodel, HerbrandModel, ModelReport, ModelVerdict};
pub use ordering::{OrderingConfig, OrderingError, OrderingKind, Precedence};
pub use rewrite::{ConfluenceReport, ConfluenceVerdict, Mode, RewriteError, RewriteSystem};
pub use term::{Position, Signature, Substitution, Symbol, Term, Var};
pub use tptp::{parse_problem, parse_saturation, Problem, SaturationDump, TptpError};
