//! Semantic laws as reusable checks. Each runs `cases` generated cases with
//! a fixed seed and reports the first (shrunk) counterexample.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Debug;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use pathquery::eval::{QueryInputs, QueryResult};
use pathquery::graph::Graph;
use pathquery::stdlib::ExternalRegistry;
use pathquery::syntax::parse_literal;
use pathquery::syntax::resolve::MemoryLoader;
use pathquery::{run_query, Value};

use super::canon;
use super::gen::{pooled_scalar, scalar, tuple_source, value};
use super::oracle::{graph_strategy, query_strategy, run_oracle, Q, TGraph};

pub fn check<S>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S: Strategy,
    S::Value: Debug,
{
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn eval(g: &Graph, src: &str) -> Result<QueryResult, TestCaseError> {
    run_query(
        src,
        g,
        &MemoryLoader::new(),
        &ExternalRegistry::new(),
        &QueryInputs::default(),
    )
    .map_err(|e| TestCaseError::fail(format!("{src}: {e}")))
}

fn per_root(r: &QueryResult) -> HashMap<String, usize> {
    let mut m = HashMap::new();
    for (root, _) in &r.pairs {
        *m.entry(root.render_compact()).or_default() += 1;
    }
    m
}

fn sorted(mut v: Vec<(String, String)>) -> Vec<(String, String)> {
    v.sort();
    v
}

fn graph_and_query() -> impl Strategy<Value = (TGraph, Q)> {
    (graph_strategy(12), query_strategy(3))
}

/// `require(P)` and `prohibit(P)` split their input exactly.
pub fn filter_partition(cases: u32) -> Result<(), String> {
    check(cases, graph_and_query(), |(tg, q)| {
        let g = tg.to_graph();
        let p = q.render();
        let mut both = canon(&eval(&g, &format!("@entities.require({p})"))?);
        both.extend(canon(&eval(&g, &format!("@entities.prohibit({p})"))?));
        prop_assert_eq!(sorted(both), canon(&eval(&g, "@entities")?));
        Ok(())
    })
}

/// A where clause only ever removes inputs.
pub fn where_subset(cases: u32) -> Result<(), String> {
    check(cases, graph_and_query(), |(tg, q)| {
        let g = tg.to_graph();
        let kept = canon(&eval(&g, &format!("@entities.[{}]", q.render()))?);
        let mut all = canon(&eval(&g, "@entities")?);
        for pair in kept {
            let i = all.iter().position(|x| *x == pair);
            prop_assert!(i.is_some(), "{:?} is not an input", pair);
            all.remove(i.unwrap());
        }
        Ok(())
    })
}

/// `(P, Q)` outputs the multiset union of `P` and `Q`.
pub fn tuple_distributive(cases: u32) -> Result<(), String> {
    let s = (graph_strategy(12), query_strategy(3), query_strategy(3));
    check(cases, s, |(tg, p, q)| {
        let g = tg.to_graph();
        let (p, q) = (p.render(), q.render());
        let mut sep = canon(&eval(&g, &format!("@entities.{p}"))?);
        sep.extend(canon(&eval(&g, &format!("@entities.{q}"))?));
        prop_assert_eq!(canon(&eval(&g, &format!("@entities.({p}, {q})"))?), sorted(sep));
        Ok(())
    })
}

/// `{P1; P2; P3}` yields |P1(x)|·|P2(x)|·|P3(x)| outputs per input.
pub fn block_cardinality(cases: u32) -> Result<(), String> {
    let s = (graph_strategy(12), proptest::collection::vec(query_strategy(2), 1..4));
    check(cases, s, |(tg, ps)| {
        let g = tg.to_graph();
        let srcs: Vec<String> = ps.iter().map(Q::render).collect();
        let block = per_root(&eval(&g, &format!("@entities.{{ {} }}", srcs.join("; ")))?);
        let counts = srcs
            .iter()
            .map(|p| eval(&g, &format!("@entities.{p}")).map(|r| per_root(&r)))
            .collect::<Result<Vec<_>, _>>()?;
        for e in g.all_entities() {
            let key = e.render_compact();
            let expected: usize = counts.iter().map(|c| c.get(&key).copied().unwrap_or(0)).product();
            prop_assert_eq!(block.get(&key).copied().unwrap_or(0), expected, "root {}", key);
        }
        Ok(())
    })
}

/// `Count(P)` emits exactly one Int per input, equal to |P(x)|.
pub fn count_exactly_one(cases: u32) -> Result<(), String> {
    check(cases, graph_and_query(), |(tg, q)| {
        let g = tg.to_graph();
        let p = q.render();
        let counted = eval(&g, &format!("@entities.Count({p})"))?;
        let direct = per_root(&eval(&g, &format!("@entities.{p}"))?);
        prop_assert_eq!(counted.len(), g.all_entities().len());
        let mut seen = HashMap::new();
        for (root, v) in &counted.pairs {
            let key = root.render_compact();
            *seen.entry(key.clone()).or_insert(0) += 1;
            let n = direct.get(&key).copied().unwrap_or(0) as i64;
            prop_assert_eq!(v, &Value::Int(n));
        }
        prop_assert!(seen.values().all(|&c| c == 1));
        Ok(())
    })
}

const KEYS: [&str; 3] = ["", ", ?cur", ", -?cur"];

fn render_multiset(r: &QueryResult) -> Vec<String> {
    let mut v = super::values(r);
    v.sort();
    v
}

/// `Top(P, K, keys)` is the first K of `Sort(P, keys)`.
pub fn top_is_sorted_prefix(cases: u32) -> Result<(), String> {
    let s = (
        proptest::collection::vec(prop_oneof![pooled_scalar(), scalar()], 1..12),
        0i64..15,
        0usize..3,
    );
    check(cases, s, |(vals, k, key)| {
        let g = Graph::new();
        let src = tuple_source(&vals);
        let key = KEYS[key];
        let top = eval(&g, &format!("Top({src}, {k}{key})"))?;
        let sorted = eval(&g, &format!("Sort({src}{key})"))?;
        let prefix: Vec<String> = super::values(&sorted).into_iter().take(k as usize).collect();
        let mut prefix_sorted = prefix.clone();
        prefix_sorted.sort();
        prop_assert_eq!(render_multiset(&top), prefix_sorted);
        // Both are stable, so the orders agree too.
        prop_assert_eq!(super::values(&top), prefix);
        Ok(())
    })
}

/// `Dedup(Dedup(P))` ≡ `Dedup(P)`, and no two outputs are equal.
pub fn dedup_idempotent(cases: u32) -> Result<(), String> {
    let s = (
        proptest::collection::vec(pooled_scalar(), 1..12),
        prop_oneof![Just(""), Just(", ?cur"), Just(", TextLang()")],
    );
    check(cases, s, |(vals, key)| {
        let g = Graph::new();
        let src = tuple_source(&vals);
        let once = eval(&g, &format!("Dedup({src}{key})"))?;
        let twice = eval(&g, &format!("Dedup(Dedup({src}{key}){key})"))?;
        prop_assert_eq!(super::values(&once), super::values(&twice));
        if key.is_empty() {
            let outs: Vec<&Value> = once.pairs.iter().map(|(_, v)| v).collect();
            for (i, a) in outs.iter().enumerate() {
                for b in &outs[i + 1..] {
                    prop_assert!(!a.equals(b), "{} and {} both kept", a, b);
                }
            }
        }
        Ok(())
    })
}

/// `compare` is a total preorder on non-Record values, consistent with
/// `equals`, and `Sort` orders by it.
pub fn sort_total_order(cases: u32) -> Result<(), String> {
    let s = (scalar(), scalar(), scalar(), proptest::collection::vec(scalar(), 1..10));
    check(cases, s, |(a, b, c, vals)| {
        prop_assert_eq!(a.compare(&b), b.compare(&a).reverse());
        if a.compare(&b) != Ordering::Greater && b.compare(&c) != Ordering::Greater {
            prop_assert!(a.compare(&c) != Ordering::Greater, "{} <= {} <= {}", a, b, c);
        }
        if a.equals(&b) {
            prop_assert_eq!(a.compare(&b), Ordering::Equal);
        }
        prop_assert_eq!(a.equals(&b), b.equals(&a));
        prop_assert_eq!(a.compare(&a), Ordering::Equal);

        let sorted = eval(&Graph::new(), &format!("Sort({})", tuple_source(&vals)))?;
        let outs: Vec<&Value> = sorted.pairs.iter().map(|(_, v)| v).collect();
        for w in outs.windows(2) {
            prop_assert!(w[0].compare(w[1]) != Ordering::Greater, "{} before {}", w[0], w[1]);
        }
        let mut input: Vec<String> = vals.iter().map(Value::render_compact).collect();
        input.sort();
        prop_assert_eq!(render_multiset(&sorted), input);
        Ok(())
    })
}

/// Literals read back as the value they were rendered from.
pub fn literal_round_trip(cases: u32) -> Result<(), String> {
    check(cases, value(), |v| {
        for text in [v.render_literal(), v.render_compact()] {
            let back = parse_literal(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
            prop_assert_eq!(back.render_compact(), v.render_compact());
            if v.eq_key().is_some() {
                prop_assert!(back.equals(&v), "{} read back as {}", text, back);
            }
        }
        Ok(())
    })
}

/// The evaluator agrees with the comprehension oracle.
pub fn oracle_equivalence(cases: u32) -> Result<(), String> {
    check(cases, (graph_strategy(30), query_strategy(4)), |(tg, q)| {
        let g = tg.to_graph();
        let got = canon(&eval(&g, &format!("@entities.{}", q.render()))?);
        prop_assert_eq!(got, run_oracle(&tg, &q), "query {}", q.render());
        Ok(())
    })
}
