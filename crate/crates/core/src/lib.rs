//! PathQuery: a path-based query language over edge-labelled graphs.
//!
//! The pipeline is [`syntax::parse_query`] → [`syntax::resolve::link`] →
//! [`eval::eval_query`] over a [`graph::Graph`]. [`run_query`] wires the
//! three together for the common case.

pub mod cli;
pub mod eval;
pub mod graph;
pub mod stdlib;
pub mod syntax;
pub mod value;

use eval::{EvalError, QueryInputs, QueryResult};
use graph::Graph;
use stdlib::ExternalRegistry;
use syntax::resolve::{link, LinkError, ModuleLoader};
use syntax::ParseError;

pub use value::{Record, Value};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Link(#[from] LinkError),
    #[error("{0}")]
    Eval(#[from] EvalError),
}

/// Parses, links and evaluates `source`.
pub fn run_query(
    source: &str,
    graph: &Graph,
    loader: &dyn ModuleLoader,
    registry: &ExternalRegistry,
    inputs: &QueryInputs,
) -> Result<QueryResult, Error> {
    let query = syntax::parse_query(source)?;
    let program = link(&query, "<query>", loader, registry)?;
    Ok(eval::eval_query(&program, graph, inputs)?)
}
