//! Variable and collection bindings carried by each flowing item.
//!
//! An environment is a persistent linked list, so items produced from the
//! same input share their common prefix.

use std::rc::Rc;

use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// `def ?x` / `def $c` inside a block: dropped when the block ends.
    Def,
    /// `.bind(?x)`: survives block exit, up to the enclosing function.
    Bind,
}

#[derive(Debug, Clone)]
pub enum Binding {
    Var(Value),
    Coll(Rc<[Value]>),
}

#[derive(Debug)]
struct Node {
    name: String,
    origin: Origin,
    binding: Binding,
    next: Env,
}

#[derive(Debug, Clone, Default)]
pub struct Env(Option<Rc<Node>>);

impl Env {
    pub fn new() -> Self {
        Env(None)
    }

    pub fn push(&self, name: &str, origin: Origin, binding: Binding) -> Env {
        Env(Some(Rc::new(Node {
            name: name.to_string(),
            origin,
            binding,
            next: self.clone(),
        })))
    }

    pub fn with_var(&self, name: &str, origin: Origin, v: Value) -> Env {
        self.push(name, origin, Binding::Var(v))
    }

    pub fn with_coll(&self, name: &str, origin: Origin, vals: Vec<Value>) -> Env {
        self.push(name, origin, Binding::Coll(vals.into()))
    }

    fn iter(&self) -> impl Iterator<Item = &Node> {
        let mut cur = self.0.as_deref();
        std::iter::from_fn(move || {
            let n = cur?;
            cur = n.next.0.as_deref();
            Some(n)
        })
    }

    pub fn var(&self, name: &str) -> Option<&Value> {
        self.iter().find_map(|n| match &n.binding {
            Binding::Var(v) if n.name == name => Some(v),
            _ => None,
        })
    }

    pub fn coll(&self, name: &str) -> Option<&Rc<[Value]>> {
        self.iter().find_map(|n| match &n.binding {
            Binding::Coll(c) if n.name == name => Some(c),
            _ => None,
        })
    }

    pub fn ptr_eq(&self, other: &Env) -> bool {
        match (&self.0, &other.0) {
            (None, None) => true,
            (Some(a), Some(b)) => Rc::ptr_eq(a, b),
            _ => false,
        }
    }

    /// `base` extended with the `Bind` entries this environment added on
    /// top of it, in their original order. Used when leaving a block.
    pub fn binds_over(&self, base: &Env) -> Env {
        let mut added = Vec::new();
        let mut cur = self;
        while let Some(node) = &cur.0 {
            if cur.ptr_eq(base) {
                break;
            }
            if node.origin == Origin::Bind {
                added.push((node.name.clone(), node.binding.clone()));
            }
            cur = &node.next;
        }
        if added.is_empty() {
            return base.clone();
        }
        let mut env = base.clone();
        for (name, binding) in added.into_iter().rev() {
            env = env.push(&name, Origin::Bind, binding);
        }
        env
    }
}
