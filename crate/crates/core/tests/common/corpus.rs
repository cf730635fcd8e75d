//! The query files and literal forms every build must parse.

use pathquery::syntax::render::{render_module, render_query};
use pathquery::syntax::{parse_literal, parse_module, parse_query};

use super::fixture;

pub const QUERIES: [&str; 6] = [
    "attractions_v1.pq",
    "attractions_v2.pq",
    "attractions_v3.pq",
    "bounded.pq",
    "complex_patterns.pq",
    "classifications.pq",
];

pub const MODULES: [&str; 2] = ["events.pq", "spacetime.pq"];

pub const TABLE_LITERALS: [&str; 23] = [
    "true",
    "false",
    "DateTime('2019-10-31T08:00:00Z')",
    "DateTime('2019-10-31T08:00:00')",
    "DateTime('2019-10-31T08:00:00+05:00')",
    "DateTime('2019-10-31')",
    "DateTime('T08:00')",
    "5.1",
    "-0.01e-15",
    "Double('5')",
    "Double('inf')",
    "Double('-inf')",
    "Duration('PT1H')",
    "Duration('P30D')",
    "Duration('PT1M30S')",
    "Id('/z/14znzk')",
    "5",
    "-2000",
    "Int('7')",
    "{ f: 5 }",
    "'single quotes'",
    "\"double quotes\"",
    "Text('hello world', 'en')",
];

/// Parses `src`, renders it, and checks the rendering parses back to the
/// same tree and renders identically.
pub fn query_fixpoint(name: &str, src: &str) -> Result<(), String> {
    let q = parse_query(src).map_err(|e| format!("{name}: {e}"))?;
    let text = render_query(&q);
    let again = parse_query(&text).map_err(|e| format!("{name} (rendered): {e}\n{text}"))?;
    if again != q {
        return Err(format!("{name}: rendering changes the tree\n{text}"));
    }
    if render_query(&again) != text {
        return Err(format!("{name}: rendering is not stable"));
    }
    Ok(())
}

pub fn module_fixpoint(name: &str, src: &str) -> Result<(), String> {
    let m = parse_module(name, src).map_err(|e| format!("{name}: {e}"))?;
    let text = render_module(&m);
    let again = parse_module(name, &text).map_err(|e| format!("{name} (rendered): {e}\n{text}"))?;
    if again != m {
        return Err(format!("{name}: rendering changes the tree\n{text}"));
    }
    Ok(())
}

pub fn literal_fixpoint(lit: &str) -> Result<(), String> {
    let v = parse_literal(lit).map_err(|e| format!("{lit}: {e}"))?;
    for text in [v.render_literal(), v.render_compact()] {
        let back = parse_literal(&text).map_err(|e| format!("{lit} rendered as {text}: {e}"))?;
        if back.render_compact() != v.render_compact() {
            return Err(format!("{lit}: {text} reads back as {back}"));
        }
    }
    Ok(())
}

/// Everything in the corpus; the first failure is reported.
pub fn check_all() -> Result<usize, String> {
    let mut n = 0;
    for name in QUERIES {
        query_fixpoint(name, &fixture(name))?;
        n += 1;
    }
    for name in MODULES {
        module_fixpoint(name, &fixture(name))?;
        n += 1;
    }
    for lit in TABLE_LITERALS {
        literal_fixpoint(lit)?;
        n += 1;
    }
    Ok(n)
}
