//! Import resolution and linking.
//!
//! Linking lowers the AST into [`Node`]s where every call names its target
//! directly, loads imported modules through a [`ModuleLoader`], and rejects
//! programs that could recurse without bound.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::rc::Rc;

use crate::stdlib::{Builtin, ExternalRegistry, HostFn, STUB_MODULES};
use crate::value::Value;

use super::ast::*;
use super::{parse_module, ParseError, Pos};

pub type FnId = usize;
pub type GroupId = usize;

/// A linked query, ready to evaluate.
#[derive(Clone)]
pub struct Program {
    pub body: Node,
    pub functions: Vec<Function>,
    pub groups: Vec<RecurGroup>,
}

#[derive(Clone)]
pub struct Function {
    /// Qualified name for diagnostics, e.g. `events::GetInfo`.
    pub name: String,
    pub params: Vec<Param>,
    pub body: Node,
}

/// A `base` / `recur<N>` pair sharing one name.
#[derive(Debug, Clone)]
pub struct RecurGroup {
    pub name: String,
    pub bound: u32,
    pub base: FnId,
    pub recur: FnId,
}

#[derive(Clone)]
pub enum Callee {
    Function(FnId),
    Recursive(GroupId),
    External { implemented_by: String, func: HostFn },
    Builtin(Builtin),
    /// A function in a catalog module that has no implementation.
    Stub(String),
}

/// Linked path expression. Mirrors [`PathExpr`] with calls resolved and
/// block-local function definitions hoisted into [`Program::functions`].
#[derive(Clone)]
pub enum Node {
    Entities,
    Roots,
    Literal(Value),
    Predicate {
        label: String,
        direction: Direction,
    },
    Dot(Box<Node>, Box<Node>),
    Where(Box<Node>),
    Require(Box<Node>),
    Prohibit(Box<Node>),
    Optional(Box<Node>),
    Tuple(Vec<Node>),
    Block(Vec<BlockItem>),
    Classify {
        cases: Vec<(Node, Node)>,
        otherwise: Option<Box<Node>>,
    },
    Record(Vec<RecordField>),
    FieldAccess {
        base: Box<Node>,
        fields: Vec<String>,
    },
    Compare(Box<Node>, Box<Node>),
    Arith {
        op: ArithOp,
        left: Box<Node>,
        right: Box<Node>,
        pos: Pos,
    },
    Bind {
        body: Box<Node>,
        var: String,
    },
    Var(String),
    Coll(String),
    Call {
        callee: Callee,
        /// Parallel to `args`: whether each argument binds a collection.
        collection_args: Vec<bool>,
        params: Vec<String>,
        args: Vec<Node>,
        name: String,
        pos: Pos,
    },
    Aggregate {
        kind: AggregateKind,
        args: Vec<Node>,
        keys: Vec<(Node, bool)>,
        pos: Pos,
    },
    Cur,
    Root,
    Params,
}

#[derive(Clone)]
pub enum BlockItem {
    Path(Node),
    Var { name: String, value: Node },
    Coll { name: String, value: Node, required: bool },
}

#[derive(Clone)]
pub struct RecordField {
    /// `None` for `@merge`.
    pub name: Option<String>,
    pub required: bool,
    pub value: Node,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinkError {
    #[error("module not found: {0}")]
    ModuleNotFound(String),
    #[error("{module}:{error}")]
    Parse { module: String, error: ParseError },
    #[error("cannot read module {module}: {message}")]
    Io { module: String, message: String },
    #[error("import cycle: {}", .0.join(" -> "))]
    ImportCycle(Vec<String>),
    #[error("{pos}: namespace '{namespace}' is imported twice")]
    NamespaceCollision { namespace: String, pos: Pos },
    #[error("{pos}: unknown namespace '{namespace}'")]
    UnknownNamespace { namespace: String, pos: Pos },
    #[error("{pos}: unresolved function '{name}'")]
    UnresolvedFunction { name: String, pos: Pos },
    #[error("{pos}: '{name}' expects {expected} argument(s) but got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
        pos: Pos,
    },
    #[error("{pos}: function '{name}' is defined more than once")]
    DuplicateFunction { name: String, pos: Pos },
    #[error("{pos}: recur<N> function '{name}' has no matching base definition")]
    RecurWithoutBase { name: String, pos: Pos },
    #[error("{pos}: base function '{name}' has no matching recur<N> definition")]
    BaseWithoutRecur { name: String, pos: Pos },
    #[error("{pos}: base and recur definitions of '{name}' take different parameters")]
    RecurSignatureMismatch { name: String, pos: Pos },
    #[error("unbounded recursion through {}; use a base/recur<N> pair", .0.join(" -> "))]
    UnboundedRecursion(Vec<String>),
    #[error("{pos}: external function '{name}' (implemented_by '{implemented_by}') is not registered")]
    ExternalNotRegistered {
        name: String,
        implemented_by: String,
        pos: Pos,
    },
}

/// A module's identity (used for cycle detection and sharing) and text.
pub struct LoadedModule {
    pub id: String,
    pub source: String,
}

pub enum LoadFailure {
    NotFound,
    Io(String),
}

pub trait ModuleLoader {
    fn load(&self, path: &str) -> Result<LoadedModule, LoadFailure>;
}

/// Looks modules up in a list of directories, first match wins.
#[derive(Debug, Clone, Default)]
pub struct FsLoader {
    pub dirs: Vec<PathBuf>,
}

impl FsLoader {
    pub fn new(dirs: Vec<PathBuf>) -> Self {
        FsLoader { dirs }
    }
}

/// A canonical id for a file, falling back to the path as given.
pub fn file_id(path: &Path) -> String {
    std::fs::canonicalize(path)
        .unwrap_or_else(|_| path.to_path_buf())
        .to_string_lossy()
        .into_owned()
}

impl ModuleLoader for FsLoader {
    fn load(&self, path: &str) -> Result<LoadedModule, LoadFailure> {
        for dir in &self.dirs {
            let candidate = dir.join(path);
            if candidate.is_file() {
                return match std::fs::read_to_string(&candidate) {
                    Ok(source) => Ok(LoadedModule {
                        id: file_id(&candidate),
                        source,
                    }),
                    Err(e) => Err(LoadFailure::Io(e.to_string())),
                };
            }
        }
        Err(LoadFailure::NotFound)
    }
}

/// Modules held in memory, keyed by import path.
#[derive(Debug, Clone, Default)]
pub struct MemoryLoader {
    pub modules: HashMap<String, String>,
}

impl MemoryLoader {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, path: &str, source: &str) -> Self {
        self.modules.insert(path.to_string(), source.to_string());
        self
    }
}

impl ModuleLoader for MemoryLoader {
    fn load(&self, path: &str) -> Result<LoadedModule, LoadFailure> {
        match self.modules.get(path) {
            Some(src) => Ok(LoadedModule {
                id: path.to_string(),
                source: src.clone(),
            }),
            None => Err(LoadFailure::NotFound),
        }
    }
}

/// Links `query`, whose own module id is `query_id` (so a self-import is
/// reported as a cycle).
pub fn link(
    query: &QueryFile,
    query_id: &str,
    loader: &dyn ModuleLoader,
    registry: &ExternalRegistry,
) -> Result<Program, LinkError> {
    let mut l = Linker {
        loader,
        registry,
        functions: Vec::new(),
        params: Vec::new(),
        groups: Vec::new(),
        edges: Vec::new(),
        modules: HashMap::new(),
        loading: vec![query_id.to_string()],
        scopes: Vec::new(),
        namespaces: Rc::new(HashMap::new()),
        current_fn: None,
        prefix: String::new(),
    };
    let namespaces = l.import_all(&query.imports)?;
    l.namespaces = Rc::new(namespaces);
    let top = l.declare(&query.definitions, "")?;
    l.scopes.push(Rc::new(top));
    l.define(&query.definitions)?;
    let body = l.lower(&query.body)?;
    l.check_cycles()?;
    Ok(Program {
        body,
        functions: l.functions.into_iter().map(|f| f.expect("declared function lowered")).collect(),
        groups: l.groups,
    })
}

#[derive(Clone)]
enum Entry {
    Function { id: FnId, arity: usize },
    Group { id: GroupId, arity: usize },
    External { def: ExternalDef },
}

type Scope = HashMap<String, Entry>;

#[derive(Clone)]
enum Namespace {
    Module(Rc<Scope>),
    Stub(String),
}

struct Linker<'a> {
    loader: &'a dyn ModuleLoader,
    registry: &'a ExternalRegistry,
    functions: Vec<Option<Function>>,
    params: Vec<Vec<Param>>,
    groups: Vec<RecurGroup>,
    /// Call graph for cycle detection: caller -> callees.
    edges: Vec<Vec<FnId>>,
    modules: HashMap<String, Rc<Scope>>,
    loading: Vec<String>,
    /// Lexical function scopes, outermost (file top level) first.
    scopes: Vec<Rc<Scope>>,
    namespaces: Rc<HashMap<String, Namespace>>,
    current_fn: Option<FnId>,
    /// Namespace prefix for diagnostics, e.g. `events::`.
    prefix: String,
}

impl Linker<'_> {
    fn import_all(&mut self, imports: &[Import]) -> Result<HashMap<String, Namespace>, LinkError> {
        let mut out = HashMap::new();
        for imp in imports {
            let ns = imp.namespace();
            if out.contains_key(&ns) {
                return Err(LinkError::NamespaceCollision {
                    namespace: ns,
                    pos: imp.loc.0,
                });
            }
            let target = self.import(imp)?;
            out.insert(ns, target);
        }
        Ok(out)
    }

    fn import(&mut self, imp: &Import) -> Result<Namespace, LinkError> {
        let loaded = match self.loader.load(&imp.path) {
            Ok(m) => m,
            Err(LoadFailure::NotFound) if STUB_MODULES.contains(&imp.path.as_str()) => {
                return Ok(Namespace::Stub(imp.path.clone()))
            }
            Err(LoadFailure::NotFound) => return Err(LinkError::ModuleNotFound(imp.path.clone())),
            Err(LoadFailure::Io(message)) => {
                return Err(LinkError::Io {
                    module: imp.path.clone(),
                    message,
                })
            }
        };
        if let Some(i) = self.loading.iter().position(|id| *id == loaded.id) {
            let mut cycle = self.loading[i..].to_vec();
            cycle.push(loaded.id);
            return Err(LinkError::ImportCycle(cycle));
        }
        if let Some(scope) = self.modules.get(&loaded.id) {
            return Ok(Namespace::Module(scope.clone()));
        }
        let module = parse_module(&imp.path, &loaded.source).map_err(|error| LinkError::Parse {
            module: imp.path.clone(),
            error,
        })?;

        self.loading.push(loaded.id.clone());
        let namespaces = self.import_all(&module.imports)?;
        let saved_scopes = std::mem::take(&mut self.scopes);
        let saved_ns = std::mem::replace(&mut self.namespaces, Rc::new(namespaces));
        let saved_prefix = std::mem::replace(&mut self.prefix, format!("{}::", imp.namespace()));
        let prefix = self.prefix.clone();
        let result = (|| {
            let top = Rc::new(self.declare(&module.definitions, &prefix)?);
            self.scopes.push(top.clone());
            self.define(&module.definitions)?;
            Ok(top)
        })();
        self.scopes = saved_scopes;
        self.namespaces = saved_ns;
        self.prefix = saved_prefix;
        self.loading.pop();

        let top = result?;
        self.modules.insert(loaded.id, top.clone());
        Ok(Namespace::Module(top))
    }

    fn new_fn(&mut self, params: Vec<Param>) -> FnId {
        self.functions.push(None);
        self.params.push(params);
        self.edges.push(Vec::new());
        self.functions.len() - 1
    }

    /// Allocates ids for the function definitions in `defs` so that bodies
    /// can refer to each other regardless of order.
    fn declare(&mut self, defs: &[Def], prefix: &str) -> Result<Scope, LinkError> {
        let mut scope = Scope::new();
        let mut bases: HashMap<&str, &FunctionDef> = HashMap::new();
        let mut recurs: HashMap<&str, &FunctionDef> = HashMap::new();
        let mut kinds: HashMap<&str, Vec<u8>> = HashMap::new();

        for d in defs {
            // 0 plain, 1 base, 2 recur, 3 external
            let (name, loc, kind) = match d {
                Def::Function(f) => (
                    f.name.as_str(),
                    f.loc,
                    match f.kind {
                        FunctionKind::Plain => 0u8,
                        FunctionKind::Base => 1,
                        FunctionKind::Recur(_) => 2,
                    },
                ),
                Def::External(x) => (x.name.as_str(), x.loc, 3),
                _ => continue,
            };
            let seen = kinds.entry(name).or_default();
            let ok = seen.is_empty() || (seen.len() == 1 && seen[0] + kind == 3 && kind != 0 && kind != 3);
            if !ok {
                return Err(LinkError::DuplicateFunction {
                    name: name.to_string(),
                    pos: loc.0,
                });
            }
            seen.push(kind);
            match d {
                Def::Function(f) if f.kind == FunctionKind::Plain => {
                    let id = self.new_fn(f.params.clone());
                    scope.insert(
                        f.name.clone(),
                        Entry::Function {
                            id,
                            arity: f.params.len(),
                        },
                    );
                }
                Def::Function(f) if f.kind == FunctionKind::Base => {
                    bases.insert(name, f);
                }
                Def::Function(f) => {
                    recurs.insert(name, f);
                }
                Def::External(x) => {
                    scope.insert(x.name.clone(), Entry::External { def: x.clone() });
                }
                _ => {}
            }
        }

        for (name, base) in &bases {
            let Some(recur) = recurs.get(name) else {
                return Err(LinkError::BaseWithoutRecur {
                    name: name.to_string(),
                    pos: base.loc.0,
                });
            };
            if base.params != recur.params {
                return Err(LinkError::RecurSignatureMismatch {
                    name: name.to_string(),
                    pos: recur.loc.0,
                });
            }
        }
        for (name, recur) in &recurs {
            let Some(base) = bases.get(name) else {
                return Err(LinkError::RecurWithoutBase {
                    name: name.to_string(),
                    pos: recur.loc.0,
                });
            };
            let FunctionKind::Recur(bound) = recur.kind else {
                unreachable!()
            };
            let base_id = self.new_fn(base.params.clone());
            let recur_id = self.new_fn(recur.params.clone());
            self.groups.push(RecurGroup {
                name: format!("{prefix}{name}"),
                bound,
                base: base_id,
                recur: recur_id,
            });
            scope.insert(
                name.to_string(),
                Entry::Group {
                    id: self.groups.len() - 1,
                    arity: base.params.len(),
                },
            );
        }
        Ok(scope)
    }

    /// Lowers the bodies of the functions declared from `defs` in the
    /// innermost scope.
    fn define(&mut self, defs: &[Def]) -> Result<(), LinkError> {
        let scope = self.scopes.last().expect("scope pushed").clone();
        for d in defs {
            let Def::Function(f) = d else { continue };
            let id = match (scope.get(&f.name), f.kind) {
                (Some(Entry::Function { id, .. }), FunctionKind::Plain) => *id,
                (Some(Entry::Group { id, .. }), FunctionKind::Base) => self.groups[*id].base,
                (Some(Entry::Group { id, .. }), FunctionKind::Recur(_)) => self.groups[*id].recur,
                _ => unreachable!("declared above"),
            };
            let saved = self.current_fn.replace(id);
            let body = self.lower(&f.body);
            self.current_fn = saved;
            let name = match f.kind {
                FunctionKind::Plain => format!("{}{}", self.prefix, f.name),
                FunctionKind::Base => format!("{}{} (base)", self.prefix, f.name),
                FunctionKind::Recur(n) => format!("{}{} (recur<{n}>)", self.prefix, f.name),
            };
            self.functions[id] = Some(Function {
                name,
                params: f.params.clone(),
                body: body?,
            });
        }
        Ok(())
    }

    fn lower_box(&mut self, e: &PathExpr) -> Result<Box<Node>, LinkError> {
        Ok(Box::new(self.lower(e)?))
    }

    fn lower(&mut self, e: &PathExpr) -> Result<Node, LinkError> {
        Ok(match e {
            PathExpr::Entities => Node::Entities,
            PathExpr::Roots => Node::Roots,
            PathExpr::Literal(v) => Node::Literal(v.clone()),
            PathExpr::Predicate { label, direction } => Node::Predicate {
                label: label.clone(),
                direction: *direction,
            },
            PathExpr::Dot(l, r) => Node::Dot(self.lower_box(l)?, self.lower_box(r)?),
            PathExpr::Where(b) => Node::Where(self.lower_box(b)?),
            PathExpr::Require(b) => Node::Require(self.lower_box(b)?),
            PathExpr::Prohibit(b) => Node::Prohibit(self.lower_box(b)?),
            PathExpr::Optional(b) => Node::Optional(self.lower_box(b)?),
            PathExpr::Tuple(items) => Node::Tuple(
                items
                    .iter()
                    .map(|i| self.lower(i))
                    .collect::<Result<_, _>>()?,
            ),
            PathExpr::Block(elems) => self.lower_block(elems)?,
            PathExpr::Classify { cases, otherwise } => Node::Classify {
                cases: cases
                    .iter()
                    .map(|c| Ok((self.lower(&c.condition)?, self.lower(&c.body)?)))
                    .collect::<Result<_, LinkError>>()?,
                otherwise: match otherwise {
                    Some(o) => Some(self.lower_box(o)?),
                    None => None,
                },
            },
            PathExpr::Record(fields) => Node::Record(
                fields
                    .iter()
                    .map(|f| {
                        Ok(RecordField {
                            name: match &f.name {
                                FieldName::Named(n) => Some(n.clone()),
                                FieldName::Merge => None,
                            },
                            required: f.required,
                            value: self.lower(&f.value)?,
                            pos: f.loc.0,
                        })
                    })
                    .collect::<Result<_, LinkError>>()?,
            ),
            PathExpr::FieldAccess { base, fields } => Node::FieldAccess {
                base: self.lower_box(base)?,
                fields: fields.clone(),
            },
            PathExpr::Compare { left, right } => {
                Node::Compare(self.lower_box(left)?, self.lower_box(right)?)
            }
            PathExpr::Arith {
                op,
                left,
                right,
                loc,
            } => Node::Arith {
                op: *op,
                left: self.lower_box(left)?,
                right: self.lower_box(right)?,
                pos: loc.0,
            },
            PathExpr::Bind { body, var } => Node::Bind {
                body: self.lower_box(body)?,
                var: var.clone(),
            },
            PathExpr::Var(n) => Node::Var(n.clone()),
            PathExpr::Coll(n) => Node::Coll(n.clone()),
            PathExpr::Call {
                namespace,
                name,
                args,
                loc,
            } => self.lower_call(namespace.as_deref(), name, args, loc.0)?,
            PathExpr::Aggregate {
                kind,
                args,
                keys,
                loc,
            } => Node::Aggregate {
                kind: *kind,
                args: args
                    .iter()
                    .map(|a| self.lower(a))
                    .collect::<Result<_, _>>()?,
                keys: keys
                    .iter()
                    .map(|k| Ok((self.lower(&k.path)?, k.descending)))
                    .collect::<Result<_, LinkError>>()?,
                pos: loc.0,
            },
            PathExpr::Cur => Node::Cur,
            PathExpr::Root => Node::Root,
            PathExpr::Params => Node::Params,
        })
    }

    fn lower_block(&mut self, elems: &[BlockElement]) -> Result<Node, LinkError> {
        let defs: Vec<Def> = elems
            .iter()
            .filter_map(|el| match el {
                BlockElement::Def(d @ (Def::Function(_) | Def::External(_))) => Some(d.clone()),
                _ => None,
            })
            .collect();
        let has_local_fns = !defs.is_empty();
        if has_local_fns {
            let prefix = self.prefix.clone();
            let scope = self.declare(&defs, &prefix)?;
            self.scopes.push(Rc::new(scope));
            let saved = self.current_fn;
            let r = self.define(&defs);
            self.current_fn = saved;
            if let Err(e) = r {
                self.scopes.pop();
                return Err(e);
            }
        }
        let result = (|| {
            let mut items = Vec::new();
            for el in elems {
                match el {
                    BlockElement::Path(p) => items.push(BlockItem::Path(self.lower(p)?)),
                    BlockElement::Def(Def::Var { name, value }) => items.push(BlockItem::Var {
                        name: name.clone(),
                        value: self.lower(value)?,
                    }),
                    BlockElement::Def(Def::Collection {
                        name,
                        value,
                        required,
                    }) => items.push(BlockItem::Coll {
                        name: name.clone(),
                        value: self.lower(value)?,
                        required: *required,
                    }),
                    BlockElement::Def(_) => {}
                }
            }
            Ok(Node::Block(items))
        })();
        if has_local_fns {
            self.scopes.pop();
        }
        result
    }

    fn lower_call(
        &mut self,
        namespace: Option<&str>,
        name: &str,
        args: &[PathExpr],
        pos: Pos,
    ) -> Result<Node, LinkError> {
        let display = match namespace {
            Some(ns) => format!("{ns}::{name}"),
            None => name.to_string(),
        };
        let namespaces = Rc::clone(&self.namespaces);
        let entry = match namespace {
            Some(ns) => match namespaces.get(ns) {
                Some(Namespace::Module(scope)) => scope.get(name).cloned(),
                Some(Namespace::Stub(module)) => {
                    let args = args.iter().map(|a| self.lower(a)).collect::<Result<Vec<_>, _>>()?;
                    return Ok(Node::Call {
                        callee: Callee::Stub(format!("{module}::{name}")),
                        collection_args: vec![false; args.len()],
                        params: Vec::new(),
                        args,
                        name: display,
                        pos,
                    });
                }
                None => {
                    return Err(LinkError::UnknownNamespace {
                        namespace: ns.to_string(),
                        pos,
                    })
                }
            },
            None => self.scopes.iter().rev().find_map(|s| s.get(name).cloned()),
        };

        let (callee, params): (Callee, Vec<Param>) = match entry {
            Some(Entry::Function { id, arity }) => {
                check_arity(&display, arity, args.len(), pos)?;
                self.add_edge(id);
                (Callee::Function(id), self.fn_params(id))
            }
            Some(Entry::Group { id, arity }) => {
                check_arity(&display, arity, args.len(), pos)?;
                let base = self.groups[id].base;
                self.add_edge(base);
                (Callee::Recursive(id), self.fn_params(base))
            }
            Some(Entry::External { def }) => {
                check_arity(&display, def.params.len(), args.len(), pos)?;
                let func = self.registry.lookup(&def.implemented_by).ok_or_else(|| {
                    LinkError::ExternalNotRegistered {
                        name: display.clone(),
                        implemented_by: def.implemented_by.clone(),
                        pos,
                    }
                })?;
                (
                    Callee::External {
                        implemented_by: def.implemented_by.clone(),
                        func,
                    },
                    def.params.clone(),
                )
            }
            None => match (namespace, Builtin::lookup(name)) {
                (None, Some(b)) => {
                    check_arity(&display, b.arity(), args.len(), pos)?;
                    (Callee::Builtin(b), Vec::new())
                }
                _ => {
                    return Err(LinkError::UnresolvedFunction {
                        name: display,
                        pos,
                    })
                }
            },
        };
        let args = args.iter().map(|a| self.lower(a)).collect::<Result<Vec<_>, _>>()?;
        Ok(Node::Call {
            callee,
            collection_args: params
                .iter()
                .map(|p| matches!(p, Param::Collection(_)))
                .collect(),
            params: params.iter().map(|p| p.name().to_string()).collect(),
            args,
            name: display,
            pos,
        })
    }

    /// Parameters of a declared function, available before its body is lowered.
    fn fn_params(&self, id: FnId) -> Vec<Param> {
        self.params[id].clone()
    }

    fn add_edge(&mut self, callee: FnId) {
        if let Some(caller) = self.current_fn {
            self.edges[caller].push(callee);
        }
    }

    fn check_cycles(&self) -> Result<(), LinkError> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let n = self.edges.len();
        let mut state = vec![0u8; n];
        let mut stack: Vec<FnId> = Vec::new();
        for start in 0..n {
            if state[start] == 0 {
                if let Some(cycle) = self.dfs(start, &mut state, &mut stack) {
                    let names = cycle
                        .iter()
                        .map(|&id| {
                            self.functions[id]
                                .as_ref()
                                .map(|f| f.name.clone())
                                .unwrap_or_else(|| format!("#{id}"))
                        })
                        .collect();
                    return Err(LinkError::UnboundedRecursion(names));
                }
            }
        }
        Ok(())
    }

    fn dfs(&self, v: FnId, state: &mut [u8], stack: &mut Vec<FnId>) -> Option<Vec<FnId>> {
        state[v] = 1;
        stack.push(v);
        for &w in &self.edges[v] {
            if state[w] == 1 {
                let i = stack.iter().position(|&x| x == w).expect("on stack");
                let mut cycle = stack[i..].to_vec();
                cycle.push(w);
                return Some(cycle);
            }
            if state[w] == 0 {
                if let Some(c) = self.dfs(w, state, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        state[v] = 2;
        None
    }
}

fn check_arity(name: &str, expected: usize, found: usize, pos: Pos) -> Result<(), LinkError> {
    if expected == found {
        Ok(())
    } else {
        Err(LinkError::Arity {
            name: name.to_string(),
            expected,
            found,
            pos,
        })
    }
}
