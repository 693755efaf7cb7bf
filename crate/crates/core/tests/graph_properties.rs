mod common;

use std::collections::{HashMap, HashSet};

use proptest::prelude::*;

use reciprocity_delay::analytics::delay::{delay_histogram, within_cutoff};
use reciprocity_delay::analytics::reciprocity::{extract_reciprocal_relations, growth_series, reciprocity_rate_series};
use reciprocity_delay::calendar::{day_of_week, Weekday};
use reciprocity_delay::temporal_graph::{read_edge_list, write_edge_list};
use reciprocity_delay::{Day, DynamicDigraph, TemporalEdge};

fn edge_stream() -> impl Strategy<Value = Vec<TemporalEdge>> {
    prop::collection::vec((0u8..12, 0u8..12, 0u32..30), 1..120).prop_map(|raw| {
        raw.into_iter()
            .filter(|(s, d, _)| s != d)
            .map(|(s, d, t)| TemporalEdge::new(format!("n{s}"), format!("n{d}"), t))
            .collect()
    })
}

/// First-seen day of every directed pair, keeping the earliest day.
fn dedup(edges: &[TemporalEdge]) -> HashMap<(String, String), Day> {
    let mut out: HashMap<(String, String), Day> = HashMap::new();
    for e in edges {
        let slot = out.entry((e.src.clone(), e.dst.clone())).or_insert(e.day);
        *slot = (*slot).min(e.day);
    }
    out
}

fn build(edges: &[TemporalEdge]) -> DynamicDigraph {
    DynamicDigraph::from_edges(edges).unwrap()
}

proptest! {
    #[test]
    fn degree_queries_match_scan(edges in edge_stream(), t in 0u32..32) {
        let g = build(&edges);
        let live = dedup(&edges);
        for v in g.nodes() {
            let name = g.name(v);
            let out: HashSet<&str> = live.iter().filter(|((s, _), &d)| s == name && d <= t).map(|((_, d), _)| d.as_str()).collect();
            let inc: HashSet<&str> = live.iter().filter(|((_, d), &day)| d == name && day <= t).map(|((s, _), _)| s.as_str()).collect();
            prop_assert_eq!(g.outdegree_at(v, t), out.len());
            prop_assert_eq!(g.indegree_at(v, t), inc.len());
            for u in g.nodes() {
                let uname = g.name(u);
                let u_out: HashSet<&str> = live.iter().filter(|((s, _), &d)| s == uname && d <= t).map(|((_, d), _)| d.as_str()).collect();
                let u_in: HashSet<&str> = live.iter().filter(|((_, d), &day)| d == uname && day <= t).map(|((s, _), _)| s.as_str()).collect();
                prop_assert_eq!(g.common_followees_at(u, v, t), u_out.intersection(&out).count());
                prop_assert_eq!(g.common_followers_at(u, v, t), u_in.intersection(&inc).count());
            }
        }
    }

    #[test]
    fn snapshot_counts_match_scan_and_grow(edges in edge_stream(), a in 0u32..32, b in 0u32..32) {
        let g = build(&edges);
        let live = dedup(&edges);
        let (lo, hi) = (a.min(b), a.max(b));
        let (n_lo, e_lo) = g.snapshot_counts(lo);
        let (n_hi, e_hi) = g.snapshot_counts(hi);
        prop_assert!(n_lo <= n_hi && e_lo <= e_hi);
        prop_assert_eq!(e_hi, live.values().filter(|&&d| d <= hi).count());
        let mut seen = HashSet::new();
        for ((s, d), &day) in &live {
            if day <= hi {
                seen.insert(s.as_str());
                seen.insert(d.as_str());
            }
        }
        prop_assert_eq!(n_hi, seen.len());
        for v in g.nodes() {
            prop_assert!(g.indegree_at(v, lo) <= g.indegree_at(v, hi));
            prop_assert!(g.outdegree_at(v, lo) <= g.outdegree_at(v, hi));
        }
        let indeg: usize = g.nodes().map(|v| g.indegree_at(v, hi)).sum();
        let outdeg: usize = g.nodes().map(|v| g.outdegree_at(v, hi)).sum();
        prop_assert_eq!(indeg, e_hi);
        prop_assert_eq!(outdeg, e_hi);
    }

    #[test]
    fn edge_list_round_trip(edges in edge_stream()) {
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &edges).unwrap();
        let back = read_edge_list(buf.as_slice()).unwrap();
        prop_assert_eq!(&back, &edges);
        let g = build(&edges);
        let h = DynamicDigraph::from_reader(buf.as_slice()).unwrap();
        prop_assert_eq!(g, h);
    }

    #[test]
    fn relations_are_unique_and_ordered(edges in edge_stream()) {
        let g = build(&edges);
        let rels = extract_reciprocal_relations(&g);
        let mut pairs = HashSet::new();
        for r in &rels {
            prop_assert!(pairs.insert((r.u.min(r.v), r.u.max(r.v))));
            prop_assert_eq!(g.edge(r.u, r.v).unwrap().day, r.t1);
            prop_assert_eq!(g.edge(r.v, r.u).unwrap().day, r.t2);
            prop_assert!(r.t1 <= r.t2);
            prop_assert_eq!(r.delay, r.t2 - r.t1);
        }
        let live = dedup(&edges);
        let mutual = live.keys().filter(|(s, d)| s < d && live.contains_key(&(d.clone(), s.clone()))).count();
        prop_assert_eq!(rels.len(), mutual);
    }

    #[test]
    fn reciprocity_rate_matches_pair_check(edges in edge_stream()) {
        let g = build(&edges);
        let live = dedup(&edges);
        let growth = growth_series(&g);
        for (row, (t, rate)) in growth.iter().zip(reciprocity_rate_series(&g)) {
            prop_assert_eq!(row.t, t);
            prop_assert!((0.0..=1.0).contains(&rate));
            let present: Vec<&(String, String)> = live.iter().filter(|(_, &d)| d <= t).map(|(k, _)| k).collect();
            let reciprocated = present
                .iter()
                .filter(|(s, d)| live.get(&(d.clone(), s.clone())).is_some_and(|&back| back <= t))
                .count();
            let expected = if present.is_empty() { 0.0 } else { reciprocated as f64 / present.len() as f64 };
            prop_assert!((rate - expected).abs() < 1e-12, "t={} rate={} expected={}", t, rate, expected);
        }
    }

    #[test]
    fn histogram_accounts_for_every_relation(edges in edge_stream(), cutoff in 1u32..40) {
        let rels = extract_reciprocal_relations(&build(&edges));
        let h = delay_histogram(&rels, cutoff);
        prop_assert_eq!(h.bins.iter().sum::<u64>() + h.overflow, h.total);
        prop_assert_eq!(h.total as usize, rels.len());
        prop_assert_eq!(h.overflow as usize, rels.len() - within_cutoff(&rels, cutoff).len());
        for (d, &c) in h.bins.iter().enumerate() {
            prop_assert_eq!(c as usize, rels.iter().filter(|r| r.delay as usize == d).count());
        }
    }

    #[test]
    fn weekdays_cycle_with_period_seven(start in 0u32..10_000, anchor in 0usize..7) {
        let anchor = Weekday::from_index(anchor).unwrap();
        let week: HashSet<usize> = (start..start + 7).map(|t| day_of_week(t, anchor).index()).collect();
        prop_assert_eq!(week.len(), 7);
        prop_assert_eq!(day_of_week(start, anchor), day_of_week(start + 7, anchor));
    }
}

#[test]
fn duplicate_follows_keep_earliest_day_regardless_of_order() {
    let late_first = common::graph(&[("a", "b", 9), ("a", "b", 2), ("b", "a", 5)]);
    let early_first = common::graph(&[("a", "b", 2), ("b", "a", 5), ("a", "b", 9)]);
    for g in [&late_first, &early_first] {
        let (a, b) = (g.node("a").unwrap(), g.node("b").unwrap());
        assert_eq!(g.edge(a, b).unwrap().day, 2);
        assert_eq!(g.edge_count(), 2);
        let rels = extract_reciprocal_relations(g);
        assert_eq!(rels.len(), 1);
        assert_eq!((rels[0].u, rels[0].t1, rels[0].t2, rels[0].delay), (a, 2, 5, 3));
    }
}

#[test]
fn calendar_lookups() {
    assert_eq!(day_of_week(0, Weekday::Wednesday), Weekday::Wednesday);
    assert!(!Weekday::Wednesday.is_weekend());
    assert_eq!(day_of_week(3, Weekday::Wednesday), Weekday::Saturday);
    assert!(Weekday::Saturday.is_weekend());
}
