//! Reading, writing and generating instances.

pub mod dimacs;
pub mod fixtures;
pub mod gen;
pub mod text;

use thiserror::Error;

pub use dimacs::{emit_dimacs, parse_dimacs, DimacsFormula};
pub use gen::{
    gen_boolean, gen_coloring, gen_factoring, gen_random, BoolSpec, FactoringInstance,
    FactoringLayout, FactoringSpec, GenError, Graph, RandomSpec,
};
pub use text::{emit_csp, emit_csp_annotated, parse_csp};

/// A syntax or validation error; line 0 refers to the file as a whole.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}
