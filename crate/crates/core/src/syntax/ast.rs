//! Abstract syntax for queries and modules.

use crate::value::Value;

use super::Pos;

/// A source position attached to nodes that can fail at run time.
///
/// Positions never take part in AST equality, so a pretty-printed and
/// re-parsed tree compares equal to the original.
#[derive(Debug, Clone, Copy, Default)]
pub struct Loc(pub Pos);

impl PartialEq for Loc {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregateKind {
    Count,
    Min,
    Max,
    Sum,
    Dedup,
    Slice,
    Top,
    Rtop,
    Sort,
}

impl AggregateKind {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "Count" => AggregateKind::Count,
            "Min" => AggregateKind::Min,
            "Max" => AggregateKind::Max,
            "Sum" => AggregateKind::Sum,
            "Dedup" => AggregateKind::Dedup,
            "Slice" => AggregateKind::Slice,
            "Top" => AggregateKind::Top,
            "Rtop" => AggregateKind::Rtop,
            "Sort" => AggregateKind::Sort,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            AggregateKind::Count => "Count",
            AggregateKind::Min => "Min",
            AggregateKind::Max => "Max",
            AggregateKind::Sum => "Sum",
            AggregateKind::Dedup => "Dedup",
            AggregateKind::Slice => "Slice",
            AggregateKind::Top => "Top",
            AggregateKind::Rtop => "Rtop",
            AggregateKind::Sort => "Sort",
        }
    }

    /// Positional (non-key) arguments accepted: `(min, max)`.
    pub fn positional_args(self) -> (usize, usize) {
        match self {
            AggregateKind::Slice => (2, 3),
            AggregateKind::Top | AggregateKind::Rtop => (2, 2),
            _ => (1, 1),
        }
    }

    pub fn takes_keys(self) -> bool {
        !matches!(
            self,
            AggregateKind::Count | AggregateKind::Sum | AggregateKind::Slice
        )
    }
}

/// An ordering or equivalence key: a path evaluated on each candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct SortKey {
    pub path: PathExpr,
    pub descending: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PathExpr {
    /// `@entities`
    Entities,
    /// `@roots`
    Roots,
    Literal(Value),
    Predicate {
        label: String,
        direction: Direction,
    },
    /// `left.right`
    Dot(Box<PathExpr>, Box<PathExpr>),
    /// `[body]`
    Where(Box<PathExpr>),
    Require(Box<PathExpr>),
    Prohibit(Box<PathExpr>),
    Optional(Box<PathExpr>),
    /// `(p1, ..., pn)`
    Tuple(Vec<PathExpr>),
    /// `{ e1; ...; en }`
    Block(Vec<BlockElement>),
    Classify {
        cases: Vec<ClassifyCase>,
        otherwise: Option<Box<PathExpr>>,
    },
    /// `{ f1: p1 ... fn: pn }`
    Record(Vec<Field>),
    /// `base->f1->...->fn`
    FieldAccess {
        base: Box<PathExpr>,
        fields: Vec<String>,
    },
    /// `left == right`
    Compare {
        left: Box<PathExpr>,
        right: Box<PathExpr>,
    },
    Arith {
        op: ArithOp,
        left: Box<PathExpr>,
        right: Box<PathExpr>,
        loc: Loc,
    },
    /// `body.bind(?var)`
    Bind {
        body: Box<PathExpr>,
        var: String,
    },
    Var(String),
    Coll(String),
    Call {
        namespace: Option<String>,
        name: String,
        args: Vec<PathExpr>,
        loc: Loc,
    },
    Aggregate {
        kind: AggregateKind,
        args: Vec<PathExpr>,
        keys: Vec<SortKey>,
        loc: Loc,
    },
    /// `?cur`
    Cur,
    /// `?root`
    Root,
    /// `?params`
    Params,
}

impl PathExpr {
    pub fn dot(left: PathExpr, right: PathExpr) -> PathExpr {
        PathExpr::Dot(Box::new(left), Box::new(right))
    }

    pub fn pred(label: &str) -> PathExpr {
        PathExpr::Predicate {
            label: label.to_string(),
            direction: Direction::Forward,
        }
    }

    pub fn rev_pred(label: &str) -> PathExpr {
        PathExpr::Predicate {
            label: label.to_string(),
            direction: Direction::Reverse,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyCase {
    pub condition: PathExpr,
    pub body: PathExpr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlockElement {
    Path(PathExpr),
    Def(Def),
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldName {
    Named(String),
    /// `@merge`
    Merge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub name: FieldName,
    pub required: bool,
    pub value: PathExpr,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Var(String),
    Collection(String),
}

impl Param {
    pub fn name(&self) -> &str {
        match self {
            Param::Var(n) | Param::Collection(n) => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    Plain,
    Base,
    /// `recur<N>`: at most N calls, the last of which uses the base case.
    Recur(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDef {
    pub name: String,
    pub kind: FunctionKind,
    pub params: Vec<Param>,
    pub body: PathExpr,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExternalDef {
    pub name: String,
    pub params: Vec<Param>,
    pub implemented_by: String,
    /// The `expr` marker in `external def expr`. Recorded, not interpreted.
    pub expr: bool,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Def {
    /// `def ?name path`
    Var { name: String, value: PathExpr },
    /// `[require] def $name path`
    Collection {
        name: String,
        value: PathExpr,
        required: bool,
    },
    Function(FunctionDef),
    External(ExternalDef),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Import {
    pub path: String,
    pub alias: Option<String>,
    pub loc: Loc,
}

impl Import {
    /// The namespace the import binds: the alias, or the file stem.
    pub fn namespace(&self) -> String {
        if let Some(a) = &self.alias {
            return a.clone();
        }
        let file = self.path.rsplit('/').next().unwrap_or(&self.path);
        file.strip_suffix(".pq").unwrap_or(file).to_string()
    }
}

/// A module: imports plus function and external declarations only.
#[derive(Debug, Clone, PartialEq)]
pub struct Module {
    pub path: String,
    pub imports: Vec<Import>,
    pub definitions: Vec<Def>,
}

/// A query file: imports, function declarations and one top-level path.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryFile {
    pub imports: Vec<Import>,
    pub definitions: Vec<Def>,
    pub body: PathExpr,
}
