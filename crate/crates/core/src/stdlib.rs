//! Built-in functions and the registry of host-implemented externals.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::syntax::parse_literal;
use crate::value::Value;

/// A host function: one argument collection per declared parameter, in
/// declaration order, to an output collection.
pub type HostFn = Arc<dyn Fn(&[Vec<Value>]) -> Result<Vec<Value>, String> + Send + Sync>;

/// Modules named in the standard catalog. Importing one (by bare name, e.g.
/// `import 'geo'`) succeeds, but every function in it fails when called.
pub const STUB_MODULES: &[&str] = &["time", "math", "strings", "urls", "regex", "geo"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("external function '{0}' is already registered")]
    Duplicate(String),
}

/// Host functions keyed by their `implemented_by` name.
#[derive(Clone, Default)]
pub struct ExternalRegistry {
    fns: HashMap<String, HostFn>,
}

impl ExternalRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register<F>(&mut self, name: &str, f: F) -> Result<(), RegistryError>
    where
        F: Fn(&[Vec<Value>]) -> Result<Vec<Value>, String> + Send + Sync + 'static,
    {
        self.register_arc(name, Arc::new(f))
    }

    pub fn register_arc(&mut self, name: &str, f: HostFn) -> Result<(), RegistryError> {
        if self.fns.contains_key(name) {
            return Err(RegistryError::Duplicate(name.to_string()));
        }
        self.fns.insert(name.to_string(), f);
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Option<HostFn> {
        self.fns.get(name).cloned()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.fns.contains_key(name)
    }
}

impl fmt::Debug for ExternalRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<_> = self.fns.keys().collect();
        names.sort();
        f.debug_struct("ExternalRegistry").field("fns", &names).finish()
    }
}

/// Functions available everywhere without an import.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    TextLang,
}

impl Builtin {
    pub fn lookup(name: &str) -> Option<Builtin> {
        match name {
            "TextLang" => Some(Builtin::TextLang),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::TextLang => "TextLang",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::TextLang => 0,
        }
    }

    /// Applies the builtin to one input value.
    pub fn apply(self, input: &Value) -> Option<Value> {
        match self {
            Builtin::TextLang => text_lang(input),
        }
    }
}

/// The language tag of a `Text` value; nothing for any other type.
pub fn text_lang(v: &Value) -> Option<Value> {
    match v {
        Value::Text { lang, .. } => Some(Value::String(lang.clone())),
        _ => None,
    }
}

/// Builds a table-driven host function from TAB-separated rows of literals.
/// All columns but the last are arguments; the last is the result. A call
/// emits the result of every row whose argument cells each equal some value
/// in the corresponding argument collection. Blank lines and `#` comments
/// are skipped.
pub fn lookup_table(src: &str) -> Result<HostFn, String> {
    let mut rows: Vec<(Vec<Value>, Value)> = Vec::new();
    let mut width = None;
    for (n, line) in src.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let cells = line
            .split('\t')
            .map(|c| parse_cell(c.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("line {}: {e}", n + 1))?;
        if cells.len() < 2 {
            return Err(format!("line {}: expected at least two columns", n + 1));
        }
        if *width.get_or_insert(cells.len()) != cells.len() {
            return Err(format!("line {}: inconsistent column count", n + 1));
        }
        let mut cells = cells;
        let result = cells.pop().expect("at least two cells");
        rows.push((cells, result));
    }
    Ok(Arc::new(move |args: &[Vec<Value>]| {
        let mut out = Vec::new();
        for (keys, result) in &rows {
            if keys.len() != args.len() {
                return Err(format!(
                    "lookup table has {} argument columns but was called with {} arguments",
                    keys.len(),
                    args.len()
                ));
            }
            if keys
                .iter()
                .zip(args)
                .all(|(k, arg)| arg.iter().any(|a| a.equals(k)))
            {
                out.push(result.clone());
            }
        }
        Ok(out)
    }))
}

/// A literal, with `/x` accepted as shorthand for `Id('/x')`.
pub(crate) fn parse_cell(text: &str) -> Result<Value, String> {
    if text.starts_with('/') {
        return Ok(Value::Id(text.to_string()));
    }
    parse_literal(text).map_err(|e| e.message)
}
