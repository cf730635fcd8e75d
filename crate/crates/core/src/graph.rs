//! Immutable in-memory triple store.
//!
//! Triples load from the PQT text format: one triple per line, three
//! TAB-separated columns (subject literal, predicate, object literal). A
//! token starting with `/` is shorthand for an `Id`. Lines starting with `#`
//! are comments. Duplicate triples collapse to one.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::stdlib::parse_cell;
use crate::value::{EqKey, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct Triple {
    pub subject: Value,
    pub predicate: String,
    pub object: Value,
}

impl Triple {
    pub fn new(subject: Value, predicate: &str, object: Value) -> Self {
        Triple {
            subject,
            predicate: predicate.to_string(),
            object,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: Record {position} not allowed")]
    RecordNode { line: usize, position: &'static str },
    #[error("line {line}: NaN is not allowed as a node")]
    NanNode { line: usize },
}

type Index = HashMap<EqKey, HashMap<String, Vec<Value>>>;

#[derive(Debug, Clone, Default)]
pub struct Graph {
    triples: Vec<Triple>,
    spo: Index,
    ops: Index,
    entities: Vec<Value>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from triples. Record-valued or NaN nodes are rejected;
    /// the error's line is the 1-based position in `triples`.
    pub fn from_triples(triples: impl IntoIterator<Item = Triple>) -> Result<Self, GraphError> {
        let mut g = Graph::new();
        let mut entity_keys = std::collections::HashSet::new();
        for (i, t) in triples.into_iter().enumerate() {
            g.insert(t, i + 1, &mut entity_keys)?;
        }
        Ok(g)
    }

    fn insert(
        &mut self,
        t: Triple,
        line: usize,
        entity_keys: &mut std::collections::HashSet<EqKey>,
    ) -> Result<(), GraphError> {
        let s_key = node_key(&t.subject, line, "subject")?;
        let o_key = node_key(&t.object, line, "object")?;
        if t.predicate.is_empty() {
            return Err(GraphError::Syntax {
                line,
                message: "empty predicate".into(),
            });
        }
        let objects = self
            .spo
            .entry(s_key.clone())
            .or_default()
            .entry(t.predicate.clone())
            .or_default();
        if objects.iter().any(|o| o.eq_key().as_ref() == Some(&o_key)) {
            return Ok(());
        }
        objects.push(t.object.clone());
        self.ops
            .entry(o_key.clone())
            .or_default()
            .entry(t.predicate.clone())
            .or_default()
            .push(t.subject.clone());
        if entity_keys.insert(s_key) {
            self.entities.push(t.subject.clone());
        }
        if matches!(t.object, Value::Id(_)) && entity_keys.insert(o_key) {
            self.entities.push(t.object.clone());
        }
        self.triples.push(t);
        Ok(())
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Objects of `(node, predicate, _)`, in load order.
    pub fn out_edges(&self, node: &Value, predicate: &str) -> &[Value] {
        lookup(&self.spo, node, predicate)
    }

    /// Subjects of `(_, predicate, node)`, in load order.
    pub fn in_edges(&self, node: &Value, predicate: &str) -> &[Value] {
        lookup(&self.ops, node, predicate)
    }

    /// Distinct subjects and `Id` objects, in order of first appearance.
    pub fn all_entities(&self) -> &[Value] {
        &self.entities
    }

    /// Serializes to the PQT format; `load_graph` reads it back unchanged.
    pub fn to_pqt(&self) -> String {
        let mut out = String::new();
        for t in &self.triples {
            let _ = writeln!(
                out,
                "{}\t{}\t{}",
                node_text(&t.subject),
                t.predicate,
                node_text(&t.object)
            );
        }
        out
    }
}

fn lookup<'g>(index: &'g Index, node: &Value, predicate: &str) -> &'g [Value] {
    node.eq_key()
        .and_then(|k| index.get(&k))
        .and_then(|m| m.get(predicate))
        .map(Vec::as_slice)
        .unwrap_or(&[])
}

fn node_key(v: &Value, line: usize, position: &'static str) -> Result<EqKey, GraphError> {
    if v.is_record() {
        return Err(GraphError::RecordNode { line, position });
    }
    v.eq_key().ok_or(GraphError::NanNode { line })
}

fn node_text(v: &Value) -> String {
    match v {
        // The shorthand only round-trips when nothing after the slash could
        // be mistaken for other syntax.
        Value::Id(s) if s.starts_with('/') && s.trim() == s && !s.contains(['\t', '\n', '\r']) => {
            s.clone()
        }
        other => other.render_compact(),
    }
}

pub fn load_graph(src: &str) -> Result<Graph, GraphError> {
    let mut g = Graph::new();
    let mut entity_keys = std::collections::HashSet::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.trim_end_matches('\r');
        if text.trim().is_empty() || text.trim_start().starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = text.split('\t').collect();
        if cols.len() != 3 {
            return Err(GraphError::Syntax {
                line,
                message: format!("expected 3 TAB-separated columns, found {}", cols.len()),
            });
        }
        let subject = parse_cell(cols[0].trim()).map_err(|m| GraphError::Syntax {
            line,
            message: format!("subject: {m}"),
        })?;
        let predicate = cols[1].trim();
        if !predicate.starts_with('/') || predicate.len() < 2 {
            return Err(GraphError::Syntax {
                line,
                message: format!("predicate must start with '/': '{predicate}'"),
            });
        }
        let object = parse_cell(cols[2].trim()).map_err(|m| GraphError::Syntax {
            line,
            message: format!("object: {m}"),
        })?;
        g.insert(Triple::new(subject, predicate, object), line, &mut entity_keys)?;
    }
    Ok(g)
}
