#![allow(dead_code)]

pub mod corpus;
pub mod gen;
pub mod oracle;
pub mod props;

use std::path::{Path, PathBuf};

use pathquery::eval::{QueryInputs, QueryResult};
use pathquery::graph::{load_graph, Graph};
use pathquery::stdlib::{lookup_table, ExternalRegistry};
use pathquery::syntax::parse_literal;
use pathquery::syntax::resolve::FsLoader;
use pathquery::{run_query, Error, Value};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> String {
    let p = fixture_dir().join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn graph(name: &str) -> Graph {
    load_graph(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn loader() -> FsLoader {
    FsLoader::new(vec![fixture_dir()])
}

/// `Distance` backed by the fixture distance table.
pub fn distance_registry() -> ExternalRegistry {
    let mut r = ExternalRegistry::new();
    r.register_arc("Distance", lookup_table(&fixture("distances.tsv")).unwrap())
        .unwrap();
    r
}

pub fn params_v3() -> Value {
    parse_literal(&fixture("params_v3.pqr")).unwrap()
}

pub fn try_run(
    src: &str,
    g: &Graph,
    registry: &ExternalRegistry,
    inputs: &QueryInputs,
) -> Result<QueryResult, Error> {
    run_query(src, g, &loader(), registry, inputs)
}

/// Runs with fixture modules, no externals and no inputs; panics on error.
pub fn run(src: &str, g: &Graph) -> QueryResult {
    try_run(src, g, &ExternalRegistry::new(), &QueryInputs::default())
        .unwrap_or_else(|e| panic!("query failed: {e}\n{src}"))
}

/// The result as a sorted multiset of one-line `(root, value)` literals.
pub fn canon(r: &QueryResult) -> Vec<(String, String)> {
    let mut v: Vec<_> = r
        .pairs
        .iter()
        .map(|(a, b)| (a.render_compact(), b.render_compact()))
        .collect();
    v.sort();
    v
}

/// Canonical form of expected pairs written as literals.
pub fn expect(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
    let lit = |s: &str| parse_literal(s).unwrap_or_else(|e| panic!("{s}: {e}")).render_compact();
    let mut v: Vec<_> = pairs.iter().map(|(a, b)| (lit(a), lit(b))).collect();
    v.sort();
    v
}

/// Output values of a query, in evaluation order, rendered on one line.
pub fn values(r: &QueryResult) -> Vec<String> {
    r.pairs.iter().map(|(_, v)| v.render_compact()).collect()
}
