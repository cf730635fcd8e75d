//! A naive set-comprehension evaluator for a small query fragment, written
//! directly over a list of triples with no indexes and its own notion of
//! equality.

use proptest::prelude::*;

use pathquery::graph::{Graph, Triple};
use pathquery::Value;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Id(u8),
    Int(i64),
    Bool(bool),
}

impl Node {
    pub fn literal(&self) -> String {
        match self {
            Node::Id(i) => format!("Id('/n{i}')"),
            Node::Int(i) => i.to_string(),
            Node::Bool(b) => b.to_string(),
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Node::Id(i) => Value::id(format!("/n{i}")),
            Node::Int(i) => Value::Int(*i),
            Node::Bool(b) => Value::Bool(*b),
        }
    }
}

pub const LABELS: [&str; 3] = ["/p", "/q", "/r"];

#[derive(Debug, Clone)]
pub struct TGraph {
    /// Distinct triples.
    pub triples: Vec<(Node, &'static str, Node)>,
}

impl TGraph {
    pub fn to_graph(&self) -> Graph {
        Graph::from_triples(
            self.triples
                .iter()
                .map(|(s, p, o)| Triple::new(s.to_value(), p, o.to_value())),
        )
        .unwrap()
    }

    pub fn entities(&self) -> Vec<Node> {
        let mut out: Vec<Node> = Vec::new();
        let mut add = |n: &Node| {
            if !out.contains(n) {
                out.push(n.clone());
            }
        };
        for (s, _, o) in &self.triples {
            add(s);
            if let Node::Id(_) = o {
                add(o);
            }
        }
        out
    }
}

fn node() -> impl Strategy<Value = Node> {
    prop_oneof![
        6 => (0u8..6).prop_map(Node::Id),
        2 => (0i64..3).prop_map(Node::Int),
        1 => any::<bool>().prop_map(Node::Bool),
    ]
}

pub fn graph_strategy(max_triples: usize) -> impl Strategy<Value = TGraph> {
    let subject = prop_oneof![6 => (0u8..6).prop_map(Node::Id), 1 => (0i64..3).prop_map(Node::Int)];
    proptest::collection::vec((subject, proptest::sample::select(&LABELS[..]), node()), 0..=max_triples)
        .prop_map(|ts| {
            let mut triples = Vec::new();
            for t in ts {
                if !triples.contains(&t) {
                    triples.push(t);
                }
            }
            TGraph { triples }
        })
}

#[derive(Debug, Clone)]
pub enum Q {
    Pred(&'static str, bool),
    Dot(Box<Q>, Box<Q>),
    /// `[P == (lits)]`
    WhereLit(Box<Q>, Vec<Node>),
    /// `[P == Q]`
    WherePath(Box<Q>, Box<Q>),
    /// `[P]`
    Where(Box<Q>),
    Require(Box<Q>),
    Prohibit(Box<Q>),
    Tuple(Vec<Q>),
}

impl Q {
    pub fn render(&self) -> String {
        match self {
            Q::Pred(l, true) => l.to_string(),
            Q::Pred(l, false) => format!("!{l}"),
            Q::Dot(a, b) => format!("{}.{}", a.render(), b.render()),
            Q::WhereLit(p, lits) => {
                let lits: Vec<String> = lits.iter().map(Node::literal).collect();
                format!("[{} == ({})]", p.render(), lits.join(", "))
            }
            Q::WherePath(a, b) => format!("[{} == {}]", a.render(), b.render()),
            Q::Where(p) => format!("[{}]", p.render()),
            Q::Require(p) => format!("require({})", p.render()),
            Q::Prohibit(p) => format!("prohibit({})", p.render()),
            Q::Tuple(ps) if ps.len() == 1 => format!("({},)", ps[0].render()),
            Q::Tuple(ps) => {
                let parts: Vec<String> = ps.iter().map(Q::render).collect();
                format!("({})", parts.join(", "))
            }
        }
    }
}

/// Random fragment queries of nesting depth at most `depth`.
pub fn query_strategy(depth: u32) -> impl Strategy<Value = Q> {
    let leaf = (proptest::sample::select(&LABELS[..]), prop_oneof![3 => Just(true), 1 => Just(false)])
        .prop_map(|(l, f)| Q::Pred(l, f));
    leaf.prop_recursive(depth, 24, 3, |inner| {
        prop_oneof![
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Q::Dot(Box::new(a), Box::new(b))),
            2 => (inner.clone(), proptest::collection::vec(node(), 1..3))
                .prop_map(|(p, l)| Q::WhereLit(Box::new(p), l)),
            1 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Q::WherePath(Box::new(a), Box::new(b))),
            1 => inner.clone().prop_map(|p| Q::Where(Box::new(p))),
            2 => inner.clone().prop_map(|p| Q::Require(Box::new(p))),
            2 => inner.clone().prop_map(|p| Q::Prohibit(Box::new(p))),
            2 => proptest::collection::vec(inner, 1..4).prop_map(Q::Tuple),
        ]
    })
}

pub fn eval(g: &TGraph, q: &Q, x: &Node) -> Vec<Node> {
    match q {
        Q::Pred(l, true) => g
            .triples
            .iter()
            .filter(|(s, p, _)| p == l && s == x)
            .map(|(_, _, o)| o.clone())
            .collect(),
        Q::Pred(l, false) => g
            .triples
            .iter()
            .filter(|(_, p, o)| p == l && o == x)
            .map(|(s, _, _)| s.clone())
            .collect(),
        Q::Dot(a, b) => eval(g, a, x).iter().flat_map(|y| eval(g, b, y)).collect(),
        Q::WhereLit(p, lits) => {
            let hit = eval(g, p, x).iter().any(|v| lits.contains(v));
            keep_if(hit, x)
        }
        Q::WherePath(a, b) => {
            let rs = eval(g, b, x);
            let hit = eval(g, a, x).iter().any(|v| rs.contains(v));
            keep_if(hit, x)
        }
        Q::Where(p) => keep_if(eval(g, p, x).iter().any(|v| *v != Node::Bool(false)), x),
        Q::Require(p) => keep_if(!eval(g, p, x).is_empty(), x),
        Q::Prohibit(p) => keep_if(eval(g, p, x).is_empty(), x),
        Q::Tuple(ps) => ps.iter().flat_map(|p| eval(g, p, x)).collect(),
    }
}

fn keep_if(b: bool, x: &Node) -> Vec<Node> {
    if b {
        vec![x.clone()]
    } else {
        vec![]
    }
}

/// `@entities.Q` as a sorted multiset of `(root, value)` literals.
pub fn run_oracle(g: &TGraph, q: &Q) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for e in g.entities() {
        for v in eval(g, q, &e) {
            out.push((e.literal(), v.literal()));
        }
    }
    out.sort();
    out
}
