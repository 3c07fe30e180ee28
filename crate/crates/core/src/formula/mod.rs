//! Formula syntax: AST, parser, renderer, and the atom/occurrence views that
//! the indexing procedures walk.

mod ast;
mod occurrence;
mod parse;
mod render;

pub use ast::{Formula, Quantifier, Relation, Var};
pub use occurrence::{atomic_sequence, build_var_graph, occurrence_count, AtomOccurrence, OccRef, Side, VarGraph};
pub use parse::{parse, ParseError, KEYWORDS};
pub use render::{render, render_with};
