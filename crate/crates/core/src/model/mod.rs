//! Permutation semantics on finite membership digraphs.
//!
//! A digraph on `0..n` stands in for the universe: every element is a set
//! and every subset of `0..n` is a class. Permutations are bijections of the
//! whole universe, so "0-permute" holds of every `Permutation` by type.

mod demos;
mod digraph;
mod eval;
mod invariance;
mod permutation;

use thiserror::Error;

use crate::formula::Var;

pub use demos::{demo, demo_spec, DemoRun, DemoSpec, DEMO_NAMES};
pub use digraph::{ClassSubset, Digraph, ModelFile};
pub use eval::{defined_class, eval, CompiledFormula};
pub use invariance::{
    comprehension_invariant, invariance_survey, invariance_survey_sampled, ConstraintFile, Constraints,
    InvarianceReport, ParamValue, Sampling, Verdict, Violation, ViolationRecord, CLASS_KEY,
};
pub use permutation::{
    automorphisms, enumerate_permutations, image_class, j_lift, permute_level, permutes, sample_permutations,
    JLiftFailure, Level, Permutation, PermutationStream, DEFAULT_PERMUTATION_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("element {element} is outside the universe 0..{n}")]
    Range { element: usize, n: usize },
    #[error("universe of size {n} exceeds the permutation limit {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("variable `{0}` is not bound")]
    UnboundVariable(Var),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unknown demo `{0}`")]
    UnknownDemo(String),
    #[error("{0:?} is not a permutation of the universe")]
    InvalidPermutation(Vec<usize>),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(Var),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}
