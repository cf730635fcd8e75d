//! Source rendering (re-parsable) and an indented AST dump.

use std::fmt::Write as _;

use crate::value::write_quoted;

use super::ast::*;

const PREC_COMPARE: u8 = 0;
const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_CHAIN: u8 = 3;
const PREC_PRIMARY: u8 = 4;

fn prec(e: &PathExpr) -> u8 {
    match e {
        PathExpr::Compare { .. } => PREC_COMPARE,
        PathExpr::Arith { op, .. } => match op {
            ArithOp::Add | ArithOp::Sub => PREC_ADD,
            ArithOp::Mul | ArithOp::Div => PREC_MUL,
        },
        PathExpr::Dot(..) | PathExpr::Bind { .. } | PathExpr::FieldAccess { .. } => PREC_CHAIN,
        _ => PREC_PRIMARY,
    }
}

/// Renders a path as source text that parses back to an equal tree.
pub fn render_path(e: &PathExpr) -> String {
    at(e, PREC_COMPARE)
}

fn at(e: &PathExpr, min: u8) -> String {
    let s = render_bare(e);
    if prec(e) < min {
        format!("({s})")
    } else {
        s
    }
}

fn render_bare(e: &PathExpr) -> String {
    match e {
        PathExpr::Entities => "@entities".into(),
        PathExpr::Roots => "@roots".into(),
        PathExpr::Literal(v) => v.render_compact(),
        PathExpr::Predicate { label, direction } => match direction {
            Direction::Forward => label.clone(),
            Direction::Reverse => format!("!{label}"),
        },
        PathExpr::Dot(l, r) => {
            let left = at(l, PREC_CHAIN);
            let mut right = at(r, PREC_PRIMARY);
            // `5.5` would lex as a Double.
            if left.ends_with(|c: char| c.is_ascii_digit())
                && right.starts_with(|c: char| c.is_ascii_digit())
            {
                right = format!("({right})");
            }
            format!("{left}.{right}")
        }
        PathExpr::Where(b) => format!("[{}]", render_path(b)),
        PathExpr::Require(b) => format!("require({})", render_path(b)),
        PathExpr::Prohibit(b) => format!("prohibit({})", render_path(b)),
        PathExpr::Optional(b) => format!("optional({})", render_path(b)),
        PathExpr::Tuple(items) => {
            let parts: Vec<_> = items.iter().map(render_path).collect();
            if parts.len() == 1 {
                format!("({},)", parts[0])
            } else {
                format!("({})", parts.join(", "))
            }
        }
        PathExpr::Block(elems) => {
            let parts: Vec<_> = elems
                .iter()
                .map(|el| match el {
                    BlockElement::Path(p) => render_path(p),
                    BlockElement::Def(d) => render_def(d),
                })
                .collect();
            format!("{{ {} }}", parts.join("; "))
        }
        PathExpr::Classify { cases, otherwise } => {
            let mut s = String::from("classify {");
            for c in cases {
                let _ = write!(s, " {}: {}", leading_minus_safe(&c.condition), render_path(&c.body));
            }
            if let Some(e) = otherwise {
                let _ = write!(s, " else: {}", render_path(e));
            }
            s.push_str(" }");
            s
        }
        PathExpr::Record(fields) => {
            let mut s = String::from("{");
            for f in fields {
                s.push(' ');
                if f.required {
                    s.push_str("require ");
                }
                match &f.name {
                    FieldName::Named(n) => s.push_str(n),
                    FieldName::Merge => s.push_str("@merge"),
                }
                let _ = write!(s, ": {}", render_path(&f.value));
            }
            s.push_str(" }");
            s
        }
        PathExpr::FieldAccess { base, fields } => {
            let b = if matches!(**base, PathExpr::FieldAccess { .. }) {
                format!("({})", render_bare(base))
            } else {
                at(base, PREC_CHAIN)
            };
            let mut s = b;
            for f in fields {
                let _ = write!(s, "->{f}");
            }
            s
        }
        PathExpr::Compare { left, right } => {
            format!("{} == {}", at(left, PREC_ADD), at(right, PREC_ADD))
        }
        PathExpr::Arith {
            op, left, right, ..
        } => {
            let p = prec(e);
            format!("{} {} {}", at(left, p), op.symbol(), at(right, p + 1))
        }
        PathExpr::Bind { body, var } => format!("{}.bind(?{var})", at(body, PREC_CHAIN)),
        PathExpr::Var(n) => format!("?{n}"),
        PathExpr::Coll(n) => format!("${n}"),
        PathExpr::Call {
            namespace,
            name,
            args,
            ..
        } => {
            let args: Vec<_> = args.iter().map(render_path).collect();
            match namespace {
                Some(ns) => format!("{ns}::{name}({})", args.join(", ")),
                None => format!("{name}({})", args.join(", ")),
            }
        }
        PathExpr::Aggregate {
            kind, args, keys, ..
        } => {
            let mut parts: Vec<_> = args.iter().map(render_path).collect();
            for k in keys {
                let p = leading_minus_safe(&k.path);
                parts.push(if k.descending { format!("-{p}") } else { p });
            }
            format!("{}({})", kind.name(), parts.join(", "))
        }
        PathExpr::Cur => "?cur".into(),
        PathExpr::Root => "?root".into(),
        PathExpr::Params => "?params".into(),
    }
}

/// Wraps paths that would start with `-` where a leading `-` means
/// something else (descending keys, continuing arithmetic).
fn leading_minus_safe(e: &PathExpr) -> String {
    let s = render_path(e);
    if s.starts_with('-') {
        format!("({s})")
    } else {
        s
    }
}

fn render_params(params: &[Param]) -> String {
    let parts: Vec<_> = params
        .iter()
        .map(|p| match p {
            Param::Var(n) => format!("?{n}"),
            Param::Collection(n) => format!("${n}"),
        })
        .collect();
    parts.join(", ")
}

pub fn render_def(d: &Def) -> String {
    match d {
        Def::Var { name, value } => format!("def ?{name} {}", render_path(value)),
        Def::Collection {
            name,
            value,
            required,
        } => format!(
            "{}def ${name} {}",
            if *required { "require " } else { "" },
            render_path(value)
        ),
        Def::Function(f) => {
            let kind = match f.kind {
                FunctionKind::Plain => String::new(),
                FunctionKind::Base => "base ".into(),
                FunctionKind::Recur(n) => format!("recur<{n}> "),
            };
            let body = match &f.body {
                b @ (PathExpr::Block(_) | PathExpr::Record(_)) => render_path(b),
                other => format!("{{ {} }}", render_path(other)),
            };
            format!("def {kind}{}({}) {body}", f.name, render_params(&f.params))
        }
        Def::External(x) => {
            let mut s = format!(
                "external def {}{}({}) implemented_by ",
                if x.expr { "expr " } else { "" },
                x.name,
                render_params(&x.params)
            );
            write_quoted(&mut s, &x.implemented_by);
            s
        }
    }
}

fn render_imports(out: &mut String, imports: &[Import]) {
    for i in imports {
        out.push_str("import ");
        write_quoted(out, &i.path);
        if let Some(a) = &i.alias {
            let _ = write!(out, " into {a}");
        }
        out.push('\n');
    }
}

pub fn render_query(q: &QueryFile) -> String {
    let mut out = String::new();
    render_imports(&mut out, &q.imports);
    for d in &q.definitions {
        out.push_str(&render_def(d));
        out.push('\n');
    }
    out.push_str(&render_path(&q.body));
    out.push('\n');
    out
}

pub fn render_module(m: &Module) -> String {
    let mut out = String::new();
    render_imports(&mut out, &m.imports);
    for d in &m.definitions {
        out.push_str(&render_def(d));
        out.push('\n');
    }
    out
}

// ---- AST dump ----

struct Dump {
    out: String,
}

impl Dump {
    fn line(&mut self, depth: usize, text: &str) {
        for _ in 0..depth {
            self.out.push_str("  ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn path(&mut self, d: usize, e: &PathExpr) {
        match e {
            PathExpr::Entities => self.line(d, "Entities"),
            PathExpr::Roots => self.line(d, "Roots"),
            PathExpr::Literal(v) => self.line(d, &format!("Literal {}", v.render_compact())),
            PathExpr::Predicate { label, direction } => {
                let dir = match direction {
                    Direction::Forward => "fwd",
                    Direction::Reverse => "rev",
                };
                self.line(d, &format!("Predicate {label} {dir}"))
            }
            PathExpr::Dot(l, r) => {
                self.line(d, "Dot");
                self.path(d + 1, l);
                self.path(d + 1, r);
            }
            PathExpr::Where(b) => self.wrap(d, "Where", b),
            PathExpr::Require(b) => self.wrap(d, "Require", b),
            PathExpr::Prohibit(b) => self.wrap(d, "Prohibit", b),
            PathExpr::Optional(b) => self.wrap(d, "Optional", b),
            PathExpr::Tuple(items) => {
                self.line(d, "Tuple");
                for i in items {
                    self.path(d + 1, i);
                }
            }
            PathExpr::Block(elems) => {
                self.line(d, "Block");
                for el in elems {
                    match el {
                        BlockElement::Path(p) => self.path(d + 1, p),
                        BlockElement::Def(df) => self.def(d + 1, df),
                    }
                }
            }
            PathExpr::Classify { cases, otherwise } => {
                self.line(d, "Classify");
                for c in cases {
                    self.line(d + 1, "Case");
                    self.path(d + 2, &c.condition);
                    self.path(d + 2, &c.body);
                }
                if let Some(e) = otherwise {
                    self.wrap(d + 1, "Else", e);
                }
            }
            PathExpr::Record(fields) => {
                self.line(d, "Record");
                for f in fields {
                    let name = match &f.name {
                        FieldName::Named(n) => n.as_str(),
                        FieldName::Merge => "@merge",
                    };
                    let req = if f.required { " (required)" } else { "" };
                    self.wrap(d + 1, &format!("Field {name}{req}"), &f.value);
                }
            }
            PathExpr::FieldAccess { base, fields } => {
                self.line(d, &format!("FieldAccess {}", fields.join("->")));
                self.path(d + 1, base);
            }
            PathExpr::Compare { left, right } => {
                self.line(d, "Compare ==");
                self.path(d + 1, left);
                self.path(d + 1, right);
            }
            PathExpr::Arith {
                op, left, right, ..
            } => {
                self.line(d, &format!("Arith {}", op.symbol()));
                self.path(d + 1, left);
                self.path(d + 1, right);
            }
            PathExpr::Bind { body, var } => self.wrap(d, &format!("Bind ?{var}"), body),
            PathExpr::Var(n) => self.line(d, &format!("Var ?{n}")),
            PathExpr::Coll(n) => self.line(d, &format!("Coll ${n}")),
            PathExpr::Call {
                namespace,
                name,
                args,
                ..
            } => {
                let full = match namespace {
                    Some(ns) => format!("{ns}::{name}"),
                    None => name.clone(),
                };
                self.line(d, &format!("Call {full}"));
                for a in args {
                    self.path(d + 1, a);
                }
            }
            PathExpr::Aggregate {
                kind, args, keys, ..
            } => {
                self.line(d, &format!("Aggregate {}", kind.name()));
                for a in args {
                    self.path(d + 1, a);
                }
                for k in keys {
                    let label = if k.descending { "Key desc" } else { "Key asc" };
                    self.wrap(d + 1, label, &k.path);
                }
            }
            PathExpr::Cur => self.line(d, "Cur"),
            PathExpr::Root => self.line(d, "Root"),
            PathExpr::Params => self.line(d, "Params"),
        }
    }

    fn wrap(&mut self, d: usize, label: &str, body: &PathExpr) {
        self.line(d, label);
        self.path(d + 1, body);
    }

    fn def(&mut self, d: usize, def: &Def) {
        match def {
            Def::Var { name, value } => self.wrap(d, &format!("VarDef ?{name}"), value),
            Def::Collection {
                name,
                value,
                required,
            } => {
                let req = if *required { " (required)" } else { "" };
                self.wrap(d, &format!("CollDef ${name}{req}"), value)
            }
            Def::Function(f) => {
                let kind = match f.kind {
                    FunctionKind::Plain => String::new(),
                    FunctionKind::Base => " base".into(),
                    FunctionKind::Recur(n) => format!(" recur<{n}>"),
                };
                self.wrap(
                    d,
                    &format!("FuncDef{kind} {}({})", f.name, render_params(&f.params)),
                    &f.body,
                )
            }
            Def::External(x) => {
                let mut s = format!("ExternalDef {}({}) implemented_by ", x.name, render_params(&x.params));
                write_quoted(&mut s, &x.implemented_by);
                self.line(d, &s)
            }
        }
    }

    fn imports(&mut self, imports: &[Import]) {
        for i in imports {
            let mut s = String::from("Import ");
            write_quoted(&mut s, &i.path);
            let _ = write!(s, " as {}", i.namespace());
            self.line(0, &s);
        }
    }
}

pub fn dump_query(q: &QueryFile) -> String {
    let mut d = Dump { out: String::new() };
    d.imports(&q.imports);
    for def in &q.definitions {
        d.def(0, def);
    }
    d.line(0, "Query");
    d.path(1, &q.body);
    d.out
}

pub fn dump_module(m: &Module) -> String {
    let mut d = Dump { out: String::new() };
    d.line(0, &format!("Module {}", m.path));
    d.imports(&m.imports);
    for def in &m.definitions {
        d.def(0, def);
    }
    d.out
}

