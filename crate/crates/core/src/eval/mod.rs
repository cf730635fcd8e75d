//! Bag-semantics evaluation of linked programs.
//!
//! Every path maps one input item to a multiset of output items; composite
//! paths are built from that. Items remember the root they descend from,
//! their variable bindings, and the value `?cur` currently denotes.

mod env;

use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::collections::HashSet;

pub use env::{Binding, Env, Origin};

use crate::graph::Graph;
use crate::syntax::resolve::{BlockItem, Callee, Node, Program, RecordField};
use crate::syntax::{AggregateKind, ArithOp, Direction, Pos};
use crate::value::{EqKey, Record, Value};

/// Nested function calls allowed before evaluation gives up.
pub const MAX_CALL_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("{pos}: {message}")]
    At { pos: Pos, message: String },
    #[error("{0}")]
    General(String),
}

impl EvalError {
    fn at(pos: Pos, message: impl Into<String>) -> Self {
        EvalError::At {
            pos,
            message: message.into(),
        }
    }
}

type EResult<T> = Result<T, EvalError>;

/// A value in flight, with its provenance and scope.
#[derive(Debug, Clone)]
pub struct FlowItem {
    pub value: Value,
    pub root: Option<Value>,
    pub env: Env,
    /// What `?cur` denotes; `None` means the item's own value.
    pub cur: Option<Value>,
}

impl FlowItem {
    /// An item that is its own root, with no bindings.
    pub fn rooted(value: Value) -> Self {
        FlowItem {
            root: Some(value.clone()),
            value,
            env: Env::new(),
            cur: None,
        }
    }

    /// The starting input of a query: a placeholder no path can traverse.
    fn unit() -> Self {
        FlowItem {
            value: Value::Record(Record::new()),
            root: None,
            env: Env::new(),
            cur: None,
        }
    }

    fn with_value(&self, value: Value) -> Self {
        FlowItem {
            value,
            root: self.root.clone(),
            env: self.env.clone(),
            cur: self.cur.clone(),
        }
    }

    /// A source output: roots are assigned the first time only.
    fn sourced(&self, value: Value) -> Self {
        FlowItem {
            root: Some(self.root.clone().unwrap_or_else(|| value.clone())),
            value,
            env: self.env.clone(),
            cur: self.cur.clone(),
        }
    }

    /// This item with `?cur` pointing at its own value.
    fn focused(&self) -> Self {
        FlowItem {
            value: self.value.clone(),
            root: self.root.clone(),
            env: self.env.clone(),
            cur: Some(self.value.clone()),
        }
    }

    fn cur_value(&self) -> &Value {
        self.cur.as_ref().unwrap_or(&self.value)
    }
}

/// The multiset of `(root, output)` pairs a query produced, in evaluation
/// order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QueryResult {
    pub pairs: Vec<(Value, Value)>,
}

impl QueryResult {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs ordered by root, then output, using the value ordering. Ties
    /// keep evaluation order.
    pub fn sorted(&self) -> Vec<(Value, Value)> {
        let mut v = self.pairs.clone();
        v.sort_by(|a, b| a.0.compare(&b.0).then_with(|| a.1.compare(&b.1)));
        v
    }
}

/// Inputs supplied alongside a query.
#[derive(Debug, Clone, Default)]
pub struct QueryInputs {
    /// Bound to `?params`.
    pub params: Option<Value>,
    /// Output by `@roots`; `None` makes `@roots` behave like `@entities`.
    pub roots: Option<Vec<Value>>,
}

pub struct Evaluator<'a> {
    program: &'a Program,
    graph: &'a Graph,
    inputs: &'a QueryInputs,
    depths: RefCell<Vec<u32>>,
    call_depth: Cell<usize>,
}

/// Evaluates a whole query.
pub fn eval_query(program: &Program, graph: &Graph, inputs: &QueryInputs) -> EResult<QueryResult> {
    let ev = Evaluator::new(program, graph, inputs);
    let mut out = Vec::new();
    ev.eval(&program.body, &FlowItem::unit(), &mut out)?;
    let mut pairs = Vec::with_capacity(out.len());
    for item in out {
        let root = match item.root {
            Some(r) => r,
            None if item.value.is_record() => {
                return Err(EvalError::General(
                    "query output has no root and a Record cannot be a root".into(),
                ))
            }
            None => item.value.clone(),
        };
        pairs.push((root, item.value));
    }
    Ok(QueryResult { pairs })
}

impl<'a> Evaluator<'a> {
    pub fn new(program: &'a Program, graph: &'a Graph, inputs: &'a QueryInputs) -> Self {
        Evaluator {
            program,
            graph,
            inputs,
            depths: RefCell::new(vec![0; program.groups.len()]),
            call_depth: Cell::new(0),
        }
    }

    /// Evaluates `node` on one input item.
    pub fn eval_item(&self, node: &Node, input: &FlowItem) -> EResult<Vec<FlowItem>> {
        let mut out = Vec::new();
        self.eval(node, input, &mut out)?;
        Ok(out)
    }

    /// Evaluates the program body with each value as a self-rooted input,
    /// returning the output values in order.
    pub fn eval_values(&self, inputs: &[Value]) -> EResult<Vec<Value>> {
        let mut out = Vec::new();
        for v in inputs {
            self.eval(&self.program.body, &FlowItem::rooted(v.clone()), &mut out)?;
        }
        Ok(out.into_iter().map(|i| i.value).collect())
    }

    fn eval(&self, node: &Node, input: &FlowItem, out: &mut Vec<FlowItem>) -> EResult<()> {
        match node {
            Node::Entities => {
                out.extend(self.graph.all_entities().iter().map(|e| input.sourced(e.clone())));
            }
            Node::Roots => match &self.inputs.roots {
                Some(roots) => out.extend(roots.iter().map(|r| input.sourced(r.clone()))),
                None => out.extend(self.graph.all_entities().iter().map(|e| input.sourced(e.clone()))),
            },
            Node::Literal(v) => out.push(input.sourced(v.clone())),
            Node::Predicate { label, direction } => {
                if input.value.is_record() {
                    return Ok(());
                }
                let targets = match direction {
                    Direction::Forward => self.graph.out_edges(&input.value, label),
                    Direction::Reverse => self.graph.in_edges(&input.value, label),
                };
                out.extend(targets.iter().map(|t| input.with_value(t.clone())));
            }
            Node::Dot(left, right) => {
                for mid in self.eval_item(left, input)? {
                    self.eval(right, &mid, out)?;
                }
            }
            Node::Where(body) => {
                let b = self.eval_item(body, &input.focused())?;
                if b.iter().any(|i| i.value.is_truthy()) {
                    out.push(input.clone());
                }
            }
            Node::Require(body) => {
                if !self.eval_item(body, input)?.is_empty() {
                    out.push(input.clone());
                }
            }
            Node::Prohibit(body) => {
                if self.eval_item(body, input)?.is_empty() {
                    out.push(input.clone());
                }
            }
            Node::Optional(body) => {
                let b = self.eval_item(body, input)?;
                if b.is_empty() {
                    out.push(input.clone());
                } else {
                    out.extend(b);
                }
            }
            Node::Tuple(branches) => {
                for b in branches {
                    self.eval(b, input, out)?;
                }
            }
            Node::Block(items) => self.eval_block(items, input, out)?,
            Node::Classify { cases, otherwise } => {
                let focused = input.focused();
                for (cond, body) in cases {
                    if !self.eval_item(cond, &focused)?.is_empty() {
                        out.extend(self.eval_item(body, &focused)?.into_iter().map(|mut i| {
                            i.cur = input.cur.clone();
                            i
                        }));
                        return Ok(());
                    }
                }
                match otherwise {
                    Some(body) => {
                        out.extend(self.eval_item(body, &focused)?.into_iter().map(|mut i| {
                            i.cur = input.cur.clone();
                            i
                        }))
                    }
                    None => out.push(input.clone()),
                }
            }
            Node::Record(fields) => {
                if let Some(r) = self.eval_record(fields, input)? {
                    out.push(input.with_value(Value::Record(r)));
                }
            }
            Node::FieldAccess { base, fields } => {
                for b in self.eval_item(base, input)? {
                    let mut current = vec![b.value.clone()];
                    for f in fields {
                        current = current
                            .iter()
                            .filter_map(Value::as_record)
                            .filter_map(|r| r.get(f))
                            .flat_map(|vals| vals.iter().cloned())
                            .collect();
                    }
                    out.extend(current.into_iter().map(|v| b.with_value(v)));
                }
            }
            Node::Compare(left, right) => {
                let l = self.eval_item(left, input)?;
                let r = self.eval_item(right, input)?;
                let hit = l.iter().any(|a| r.iter().any(|b| a.value.equals(&b.value)));
                out.push(input.with_value(Value::Bool(hit)));
            }
            Node::Arith {
                op,
                left,
                right,
                pos,
            } => {
                let l = self.eval_item(left, input)?;
                let r = self.eval_item(right, input)?;
                for a in &l {
                    for b in &r {
                        if let Some(v) = arith(*op, &a.value, &b.value, *pos)? {
                            out.push(input.with_value(v));
                        }
                    }
                }
            }
            Node::Bind { body, var } => {
                for mut item in self.eval_item(body, input)? {
                    item.env = item.env.with_var(var, Origin::Bind, item.value.clone());
                    out.push(item);
                }
            }
            Node::Var(name) => {
                if let Some(v) = input.env.var(name) {
                    out.push(input.with_value(v.clone()));
                }
            }
            Node::Coll(name) => {
                if let Some(c) = input.env.coll(name) {
                    out.extend(c.iter().map(|v| input.with_value(v.clone())));
                }
            }
            Node::Cur => out.push(input.with_value(input.cur_value().clone())),
            Node::Root => {
                if let Some(r) = &input.root {
                    out.push(input.with_value(r.clone()));
                }
            }
            Node::Params => {
                if let Some(p) = &self.inputs.params {
                    out.push(input.with_value(p.clone()));
                }
            }
            Node::Call {
                callee,
                collection_args,
                params,
                args,
                name,
                pos,
            } => self.eval_call(callee, collection_args, params, args, name, *pos, input, out)?,
            Node::Aggregate {
                kind,
                args,
                keys,
                pos,
            } => self.eval_aggregate(*kind, args, keys, *pos, input, out)?,
        }
        Ok(())
    }

    fn eval_block(&self, items: &[BlockItem], input: &FlowItem, out: &mut Vec<FlowItem>) -> EResult<()> {
        let entry_env = &input.env;
        // Each state carries the environment (and root) accumulated so far;
        // every element sees the block's original input value.
        let mut states = vec![(input.root.clone(), input.env.clone())];
        let feed = |root: &Option<Value>, env: &Env| FlowItem {
            value: input.value.clone(),
            root: root.clone(),
            env: env.clone(),
            cur: Some(input.value.clone()),
        };
        let last = items.len() - 1;
        for (i, item) in items.iter().enumerate() {
            let mut next = Vec::new();
            for (root, env) in &states {
                let f = feed(root, env);
                match item {
                    BlockItem::Path(p) => {
                        let outs = self.eval_item(p, &f)?;
                        if i == last {
                            for o in outs {
                                out.push(FlowItem {
                                    value: o.value,
                                    root: o.root,
                                    env: o.env.binds_over(entry_env),
                                    cur: input.cur.clone(),
                                });
                            }
                        } else {
                            next.extend(outs.into_iter().map(|o| (o.root, o.env)));
                        }
                    }
                    BlockItem::Var { name, value } => {
                        for o in self.eval_item(value, &f)? {
                            let env = o.env.with_var(name, Origin::Def, o.value);
                            next.push((f.root.clone(), env));
                        }
                    }
                    BlockItem::Coll {
                        name,
                        value,
                        required,
                    } => {
                        let vals: Vec<Value> =
                            self.eval_item(value, &f)?.into_iter().map(|o| o.value).collect();
                        if *required && vals.is_empty() {
                            continue;
                        }
                        next.push((f.root.clone(), env.with_coll(name, Origin::Def, vals)));
                    }
                }
            }
            if i == last {
                break;
            }
            if next.is_empty() {
                return Ok(());
            }
            states = next;
        }
        Ok(())
    }

    fn eval_record(&self, fields: &[RecordField], input: &FlowItem) -> EResult<Option<Record>> {
        let focused = input.focused();
        let mut rec = Record::new();
        for f in fields {
            let outs = self.eval_item(&f.value, &focused)?;
            if outs.is_empty() {
                if f.required {
                    return Ok(None);
                }
                continue;
            }
            match &f.name {
                Some(name) => {
                    for o in outs {
                        rec.push(name, o.value);
                    }
                }
                None => {
                    for o in outs {
                        match &o.value {
                            Value::Record(r) => rec.merge(r),
                            other => {
                                return Err(EvalError::at(
                                    f.pos,
                                    format!("@merge expects a Record, got {}", other.type_name()),
                                ))
                            }
                        }
                    }
                }
            }
        }
        Ok(if rec.is_empty() { None } else { Some(rec) })
    }

    #[allow(clippy::too_many_arguments)]
    fn eval_call(
        &self,
        callee: &Callee,
        collection_args: &[bool],
        params: &[String],
        args: &[Node],
        name: &str,
        pos: Pos,
        input: &FlowItem,
        out: &mut Vec<FlowItem>,
    ) -> EResult<()> {
        match callee {
            Callee::Builtin(b) => {
                if let Some(v) = b.apply(&input.value) {
                    out.push(input.with_value(v));
                }
                return Ok(());
            }
            Callee::Stub(full) => {
                return Err(EvalError::at(pos, format!("{full} is not implemented")));
            }
            _ => {}
        }

        let mut arg_values = Vec::with_capacity(args.len());
        for a in args {
            let vals: Vec<Value> = self.eval_item(a, input)?.into_iter().map(|o| o.value).collect();
            arg_values.push(vals);
        }
        // Variable parameters bind one value per invocation (cross product);
        // collection parameters bind the whole argument multiset.
        let mut combos: Vec<Vec<Vec<Value>>> = vec![Vec::with_capacity(args.len())];
        for (vals, &is_coll) in arg_values.into_iter().zip(collection_args) {
            if is_coll {
                for c in &mut combos {
                    c.push(vals.clone());
                }
            } else {
                let mut next = Vec::with_capacity(combos.len() * vals.len());
                for c in &combos {
                    for v in &vals {
                        let mut c2 = c.clone();
                        c2.push(vec![v.clone()]);
                        next.push(c2);
                    }
                }
                combos = next;
            }
        }

        for combo in combos {
            match callee {
                Callee::External {
                    implemented_by,
                    func,
                } => {
                    let vals = func(&combo).map_err(|m| {
                        EvalError::at(pos, format!("external '{implemented_by}' failed: {m}"))
                    })?;
                    out.extend(vals.into_iter().map(|v| input.with_value(v)));
                }
                Callee::Function(id) => {
                    self.invoke(*id, params, combo, collection_args, name, pos, input, out)?
                }
                Callee::Recursive(g) => {
                    let group = &self.program.groups[*g];
                    let depth = self.depths.borrow()[*g] + 1;
                    let id = if depth >= group.bound {
                        group.base
                    } else {
                        group.recur
                    };
                    self.depths.borrow_mut()[*g] = depth;
                    let r = self.invoke(id, params, combo, collection_args, name, pos, input, out);
                    self.depths.borrow_mut()[*g] = depth - 1;
                    r?
                }
                Callee::Builtin(_) | Callee::Stub(_) => unreachable!("handled above"),
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn invoke(
        &self,
        id: usize,
        params: &[String],
        args: Vec<Vec<Value>>,
        collection_args: &[bool],
        name: &str,
        pos: Pos,
        input: &FlowItem,
        out: &mut Vec<FlowItem>,
    ) -> EResult<()> {
        let depth = self.call_depth.get();
        if depth >= MAX_CALL_DEPTH {
            return Err(EvalError::at(
                pos,
                format!("call depth limit ({MAX_CALL_DEPTH}) exceeded in '{name}'"),
            ));
        }
        let mut env = Env::new();
        for ((p, vals), &is_coll) in params.iter().zip(args).zip(collection_args) {
            env = if is_coll {
                env.with_coll(p, Origin::Def, vals)
            } else {
                let v = vals.into_iter().next().expect("one value per variable argument");
                env.with_var(p, Origin::Def, v)
            };
        }
        let call_input = FlowItem {
            value: input.value.clone(),
            root: input.root.clone(),
            env,
            cur: None,
        };
        self.call_depth.set(depth + 1);
        let r = self.eval_item(&self.program.functions[id].body, &call_input);
        self.call_depth.set(depth);
        for o in r? {
            out.push(FlowItem {
                value: o.value,
                root: o.root,
                env: input.env.clone(),
                cur: input.cur.clone(),
            });
        }
        Ok(())
    }

    fn eval_aggregate(
        &self,
        kind: AggregateKind,
        args: &[Node],
        keys: &[(Node, bool)],
        pos: Pos,
        input: &FlowItem,
        out: &mut Vec<FlowItem>,
    ) -> EResult<()> {
        let items = self.eval_item(&args[0], input)?;
        let restore = |mut i: FlowItem| {
            i.cur = input.cur.clone();
            i
        };
        match kind {
            AggregateKind::Count => {
                out.push(input.with_value(Value::Int(items.len() as i64)));
            }
            AggregateKind::Sum => {
                if let Some(v) = sum(&items, pos)? {
                    out.push(input.with_value(v));
                }
            }
            AggregateKind::Min | AggregateKind::Max => {
                if items.is_empty() {
                    return Ok(());
                }
                let keyed = self.keyed(items, keys)?;
                let mut best = 0;
                for i in 1..keyed.len() {
                    let c = compare_keyed(&keyed[i], &keyed[best], keys);
                    let better = match kind {
                        AggregateKind::Min => c == Ordering::Less,
                        _ => c == Ordering::Greater,
                    };
                    if better {
                        best = i;
                    }
                }
                let chosen = keyed.into_iter().nth(best).expect("nonempty").0;
                out.push(restore(chosen));
            }
            AggregateKind::Sort | AggregateKind::Top | AggregateKind::Rtop => {
                let limit = match kind {
                    AggregateKind::Sort => None,
                    _ => Some(self.count_arg(&args[1], input, "Top", pos)?),
                };
                let mut keyed = self.keyed(items, keys)?;
                let reverse = kind == AggregateKind::Rtop;
                keyed.sort_by(|a, b| {
                    let c = compare_keyed(a, b, keys);
                    if reverse {
                        c.reverse()
                    } else {
                        c
                    }
                });
                if let Some(k) = limit {
                    keyed.truncate(k);
                }
                out.extend(keyed.into_iter().map(|(i, _)| restore(i)));
            }
            AggregateKind::Slice => {
                let len = self.count_arg(&args[1], input, "Slice", pos)?;
                let offset = match args.get(2) {
                    Some(a) => self.count_arg(a, input, "Slice", pos)?,
                    None => 0,
                };
                out.extend(items.into_iter().skip(offset).take(len).map(restore));
            }
            AggregateKind::Dedup => {
                let keyed = self.keyed(items, keys)?;
                let mut seen: HashSet<Vec<Vec<EqKey>>> = HashSet::new();
                for (item, key_vals) in keyed {
                    let key: Option<Vec<Vec<EqKey>>> = if keys.is_empty() {
                        item.value.eq_key().map(|k| vec![vec![k]])
                    } else {
                        key_vals
                            .iter()
                            .map(|vals| vals.iter().map(Value::eq_key).collect::<Option<Vec<_>>>())
                            .collect()
                    };
                    match key {
                        // NaN never equals anything, so it is never a duplicate.
                        None => out.push(restore(item)),
                        Some(k) => {
                            if seen.insert(k) {
                                out.push(restore(item));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Evaluates a count argument (`K`, `L`, `O`): exactly one Int ≥ 0.
    fn count_arg(&self, node: &Node, input: &FlowItem, what: &str, pos: Pos) -> EResult<usize> {
        let vals = self.eval_item(node, input)?;
        match vals.as_slice() {
            [FlowItem {
                value: Value::Int(n),
                ..
            }] if *n >= 0 => Ok(usize::try_from(*n).unwrap_or(usize::MAX)),
            [single] => Err(EvalError::at(
                pos,
                format!(
                    "{what} count must be a non-negative Int, got {}",
                    single.value.render_compact()
                ),
            )),
            _ => Err(EvalError::at(
                pos,
                format!("{what} count must be a single value, got {}", vals.len()),
            )),
        }
    }

    /// Pairs each item with its key values: one sorted list per key path,
    /// evaluated with the candidate as `?cur` in the candidate's scope.
    fn keyed(&self, items: Vec<FlowItem>, keys: &[(Node, bool)]) -> EResult<Vec<(FlowItem, Vec<Vec<Value>>)>> {
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            let mut kv = Vec::with_capacity(keys.len());
            let focused = item.focused();
            for (k, _) in keys {
                let mut vals: Vec<Value> =
                    self.eval_item(k, &focused)?.into_iter().map(|o| o.value).collect();
                vals.sort_by(Value::compare);
                kv.push(vals);
            }
            out.push((item, kv));
        }
        Ok(out)
    }
}

fn compare_keyed(
    a: &(FlowItem, Vec<Vec<Value>>),
    b: &(FlowItem, Vec<Vec<Value>>),
    keys: &[(Node, bool)],
) -> Ordering {
    if keys.is_empty() {
        return a.0.value.compare(&b.0.value);
    }
    for ((ka, kb), (_, desc)) in a.1.iter().zip(&b.1).zip(keys) {
        let c = compare_lists(ka, kb);
        let c = if *desc { c.reverse() } else { c };
        if c != Ordering::Equal {
            return c;
        }
    }
    Ordering::Equal
}

/// Lexicographic; a proper prefix (including the empty list) sorts first.
fn compare_lists(a: &[Value], b: &[Value]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = x.compare(y);
        if c != Ordering::Equal {
            return c;
        }
    }
    a.len().cmp(&b.len())
}

fn sum(items: &[FlowItem], pos: Pos) -> EResult<Option<Value>> {
    let mut int_total: i64 = 0;
    let mut double_total: Option<f64> = None;
    for i in items {
        match i.value {
            Value::Int(n) => {
                match double_total.as_mut() {
                    Some(d) => *d += n as f64,
                    None => {
                        int_total = int_total
                            .checked_add(n)
                            .ok_or_else(|| EvalError::at(pos, "Int overflow in Sum"))?
                    }
                }
            }
            Value::Double(d) => {
                let acc = double_total.get_or_insert(int_total as f64);
                *acc += d;
            }
            _ => return Ok(None),
        }
    }
    Ok(Some(match double_total {
        Some(d) => Value::Double(d),
        None => Value::Int(int_total),
    }))
}

fn arith(op: ArithOp, a: &Value, b: &Value, pos: Pos) -> EResult<Option<Value>> {
    let overflow = || EvalError::at(pos, format!("Int overflow in '{}'", op.symbol()));
    Ok(Some(match (a, b) {
        (Value::Int(x), Value::Int(y)) => match op {
            ArithOp::Add => Value::Int(x.checked_add(*y).ok_or_else(overflow)?),
            ArithOp::Sub => Value::Int(x.checked_sub(*y).ok_or_else(overflow)?),
            ArithOp::Mul => Value::Int(x.checked_mul(*y).ok_or_else(overflow)?),
            ArithOp::Div => {
                if *y == 0 {
                    return Ok(None);
                }
                Value::Double(*x as f64 / *y as f64)
            }
        },
        (Value::Int(_) | Value::Double(_), Value::Int(_) | Value::Double(_)) => {
            let x = as_f64(a);
            let y = as_f64(b);
            Value::Double(match op {
                ArithOp::Add => x + y,
                ArithOp::Sub => x - y,
                ArithOp::Mul => x * y,
                ArithOp::Div => x / y,
            })
        }
        _ => return Ok(None),
    }))
}

fn as_f64(v: &Value) -> f64 {
    match v {
        Value::Int(i) => *i as f64,
        Value::Double(d) => *d,
        _ => unreachable!("numeric"),
    }
}
