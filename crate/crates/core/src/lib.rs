//! Stratification and acyclicity of first-order set-theory formulas.
//!
//! Two occurrence-indexing procedures ([`canonical`], [`acyclic`]) decide
//! their property from the sum of per-variable index ranges; [`stratify`] and
//! [`acyclic::graph_acyclic`] decide the same properties directly and serve
//! as oracles. [`model`] realizes permutation invariance of comprehension
//! instances on finite membership digraphs.

pub mod acyclic;
pub mod canonical;
pub mod corpus;
pub mod formula;
pub mod indexing;
pub mod model;
pub mod stratify;

pub use formula::{parse, Formula, ParseError, Var};
