mod common;

use std::collections::HashMap;

use proptest::prelude::*;

use pathquery::graph::load_graph;
use pathquery::stdlib::text_lang;
use pathquery::Value;

use common::gen::{scalar, scalar_no_nan, value};
use common::oracle::{graph_strategy, query_strategy};
use common::props::{self, eval};

const CASES: u32 = 1000;

#[test]
fn require_and_prohibit_partition_the_input() {
    props::filter_partition(CASES).unwrap();
}

#[test]
fn where_outputs_a_sub_multiset() {
    props::where_subset(CASES).unwrap();
}

#[test]
fn tuple_is_multiset_union() {
    props::tuple_distributive(CASES).unwrap();
}

#[test]
fn block_cardinality_is_multiplicative() {
    props::block_cardinality(CASES).unwrap();
}

#[test]
fn count_emits_exactly_one_per_input() {
    props::count_exactly_one(CASES).unwrap();
}

#[test]
fn top_is_a_prefix_of_sort() {
    props::top_is_sorted_prefix(CASES).unwrap();
}

#[test]
fn dedup_is_idempotent() {
    props::dedup_idempotent(CASES).unwrap();
}

#[test]
fn sort_respects_a_total_preorder() {
    props::sort_total_order(CASES).unwrap();
}

#[test]
fn literals_round_trip() {
    props::literal_round_trip(CASES).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn equality_is_reflexive_without_nan(v in scalar_no_nan()) {
        prop_assert!(v.equals(&v));
        prop_assert_eq!(v.eq_key(), v.eq_key());
    }

    #[test]
    fn eq_key_agrees_with_equals(a in scalar(), b in scalar()) {
        let keyed = matches!((a.eq_key(), b.eq_key()), (Some(x), Some(y)) if x == y);
        prop_assert_eq!(keyed, a.equals(&b));
    }

    #[test]
    fn only_false_is_falsy(v in value()) {
        prop_assert_eq!(v.is_truthy(), v != Value::Bool(false));
    }

    #[test]
    fn text_lang_only_for_text(v in value()) {
        let is_text = matches!(v, Value::Text { .. });
        prop_assert_eq!(text_lang(&v).is_some(), is_text);
    }

    #[test]
    fn indexes_match_the_triples(tg in graph_strategy(30)) {
        let g = tg.to_graph();
        prop_assert_eq!(g.len(), tg.triples.len());
        for t in g.triples() {
            prop_assert!(g.out_edges(&t.subject, &t.predicate).iter().any(|o| o.equals(&t.object)));
            prop_assert!(g.in_edges(&t.object, &t.predicate).iter().any(|s| s.equals(&t.subject)));
        }
        let out_total: usize = g
            .all_entities()
            .iter()
            .flat_map(|e| common::oracle::LABELS.iter().map(move |l| (e, l)))
            .map(|(e, l)| g.out_edges(e, l).len())
            .sum();
        prop_assert_eq!(out_total, g.len());
        for t in g.triples() {
            prop_assert!(g.all_entities().iter().any(|e| e.equals(&t.subject)));
        }
    }

    #[test]
    fn pqt_round_trip(tg in graph_strategy(30)) {
        let g = tg.to_graph();
        let again = load_graph(&g.to_pqt()).unwrap();
        prop_assert_eq!(g.triples(), again.triples());
    }

    #[test]
    fn optional_falls_back_to_its_input((tg, q) in (graph_strategy(12), query_strategy(3))) {
        let g = tg.to_graph();
        let p = q.render();
        let opt = eval(&g, &format!("@entities.optional({p})"))?;
        let direct = eval(&g, &format!("@entities.{p}"))?;
        let group = |r: &pathquery::eval::QueryResult| {
            let mut m: HashMap<String, Vec<String>> = HashMap::new();
            for (root, v) in &r.pairs {
                m.entry(root.render_compact()).or_default().push(v.render_compact());
            }
            m
        };
        let (opt, direct) = (group(&opt), group(&direct));
        for e in g.all_entities() {
            let key = e.render_compact();
            let expected = direct.get(&key).cloned().unwrap_or_else(|| vec![key.clone()]);
            prop_assert_eq!(opt.get(&key).cloned().unwrap_or_default(), expected);
        }
    }

    #[test]
    fn every_root_comes_from_the_source((tg, q) in (graph_strategy(12), query_strategy(3))) {
        let g = tg.to_graph();
        let r = eval(&g, &format!("@entities.{}", q.render()))?;
        for (root, _) in &r.pairs {
            prop_assert!(g.all_entities().iter().any(|e| e.equals(root)));
        }
    }

    #[test]
    fn literal_source_maps_only_itself(v in scalar_no_nan()) {
        let r = eval(&pathquery::graph::Graph::new(), &v.render_compact())?;
        prop_assert_eq!(r.pairs.len(), 1);
        prop_assert!(r.pairs[0].0.equals(&v) && r.pairs[0].1.equals(&v));
    }
}
