//! Reciprocal-relation extraction and network evolution statistics.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::table::Table;
use crate::temporal_graph::{Day, DynamicDigraph, NodeId};

/// `<u, v, t1, t2, t2 - t1>`: `u` follows `v` on `t1`, `v` follows back on `t2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReciprocalRelation {
    pub u: NodeId,
    pub v: NodeId,
    pub t1: Day,
    pub t2: Day,
    pub delay: Day,
    /// Stream position of the follow-back edge; orders same-day completions.
    pub completion_position: u64,
}

/// Emits one relation per mutually connected pair, ordered by completion
/// `(t2, position)`.
///
/// The initiator is the endpoint whose edge is earlier; same-day ties go to
/// the edge seen first in the stream.
pub fn extract_reciprocal_relations(g: &DynamicDigraph) -> Vec<ReciprocalRelation> {
    let mut out = Vec::new();
    for (s, d, first) in g.edges() {
        let Some(back) = g.edge(d, s) else { continue };
        if (first.day, first.position) < (back.day, back.position) {
            out.push(ReciprocalRelation {
                u: s,
                v: d,
                t1: first.day,
                t2: back.day,
                delay: back.day - first.day,
                completion_position: back.position,
            });
        }
    }
    out.sort_by_key(|r| (r.t2, r.completion_position));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthRow {
    pub t: Day,
    pub nodes: usize,
    pub edges: usize,
    pub reciprocal: usize,
}

/// One row per day in `[0, t_max]`; reciprocal pairs count at completion time.
pub fn growth_series(g: &DynamicDigraph) -> Vec<GrowthRow> {
    let Some(t_max) = g.max_day() else {
        return Vec::new();
    };
    let completions: Vec<Day> = extract_reciprocal_relations(g)
        .iter()
        .map(|r| r.t2)
        .collect();
    (0..=t_max)
        .map(|t| {
            let (nodes, edges) = g.snapshot_counts(t);
            GrowthRow {
                t,
                nodes,
                edges,
                reciprocal: completions.partition_point(|&c| c <= t),
            }
        })
        .collect()
}

pub fn growth_table(rows: &[GrowthRow]) -> Table {
    let mut t = Table::new(&["t", "nodes", "edges", "reciprocal_pairs"]);
    for r in rows {
        t.push(vec![r.t.into(), r.nodes.into(), r.edges.into(), r.reciprocal.into()]);
    }
    t
}

/// `(t, rate)` with rate = fraction of existing directed edges whose reverse
/// also exists at `t`.
pub fn reciprocity_rate_series(g: &DynamicDigraph) -> Vec<(Day, f64)> {
    growth_series(g)
        .into_iter()
        .map(|r| {
            let rate = if r.edges == 0 {
                0.0
            } else {
                2.0 * r.reciprocal as f64 / r.edges as f64
            };
            (r.t, rate)
        })
        .collect()
}

pub fn reciprocity_rate_table(rows: &[(Day, f64)]) -> Table {
    let mut t = Table::new(&["t", "reciprocity_rate"]);
    for &(day, rate) in rows {
        t.push(vec![day.into(), rate.into()]);
    }
    t
}

/// Least-squares line through `(ln n(t), ln e(t))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensificationFit {
    pub slope: f64,
    pub intercept: f64,
    pub t_min: Day,
    pub t_max: Day,
    pub points: usize,
    pub residual_rms: f64,
}

impl DensificationFit {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["slope", "intercept", "t_min", "t_max", "points", "residual_rms"]);
        t.push(vec![
            self.slope.into(),
            self.intercept.into(),
            self.t_min.into(),
            self.t_max.into(),
            self.points.into(),
            self.residual_rms.into(),
        ]);
        t
    }
}

/// Fits the densification exponent over one snapshot per day in `t_range`,
/// keeping days with `n(t) >= 2` and `e(t) >= 1`.
pub fn densification_fit(g: &DynamicDigraph, t_range: RangeInclusive<Day>) -> Result<DensificationFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut days = Vec::new();
    for t in t_range {
        let (n, e) = g.snapshot_counts(t);
        if n >= 2 && e >= 1 {
            xs.push((n as f64).ln());
            ys.push((e as f64).ln());
            days.push(t);
        }
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientSnapshots(xs.len()));
    }
    let (slope, intercept, residual_rms) = ols_line(&xs, &ys)
        .ok_or_else(|| Error::Numeric("degenerate log n(t): all snapshots share one node count".into()))?;
    Ok(DensificationFit {
        slope,
        intercept,
        t_min: days[0],
        t_max: *days.last().unwrap(),
        points: xs.len(),
        residual_rms,
    })
}

/// Simple linear regression; `None` when `x` has zero spread.
pub(crate) fn ols_line(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Some((slope, intercept, (ss / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal_graph::TemporalEdge;

    fn graph(edges: &[(&str, &str, Day)]) -> DynamicDigraph {
        let edges: Vec<_> = edges
            .iter()
            .map(|&(s, d, t)| TemporalEdge::new(s, d, t))
            .collect();
        DynamicDigraph::from_edges(&edges).unwrap()
    }

    #[test]
    fn relation_from_follow_back() {
        let g = graph(&[("u", "v", 5), ("v", "u", 12)]);
        let rel = extract_reciprocal_relations(&g);
        assert_eq!(rel.len(), 1);
        let r = rel[0];
        assert_eq!((g.name(r.u), g.name(r.v), r.t1, r.t2, r.delay), ("u", "v", 5, 12, 7));
    }

    #[test]
    fn one_way_follow_is_not_a_relation() {
        let g = graph(&[("u", "v", 5)]);
        assert!(extract_reciprocal_relations(&g).is_empty());
    }

    #[test]
    fn same_day_tie_uses_stream_order() {
        let g = graph(&[("u", "v", 5), ("v", "u", 5)]);
        let r = extract_reciprocal_relations(&g)[0];
        assert_eq!((g.name(r.u), r.delay), ("u", 0));
        let g = graph(&[("v", "u", 5), ("u", "v", 5)]);
        let r = extract_reciprocal_relations(&g)[0];
        assert_eq!(g.name(r.u), "v");
    }

    #[test]
    fn growth_counts_completion() {
        assert!(growth_series(&DynamicDigraph::new()).is_empty());
        let g = graph(&[("a", "b", 5), ("b", "a", 12)]);
        let rows = growth_series(&g);
        assert_eq!(rows.len(), 13);
        assert_eq!(rows[11].reciprocal, 0);
        assert_eq!(rows[12].reciprocal, 1);
        assert_eq!(rows[4], GrowthRow { t: 4, nodes: 0, edges: 0, reciprocal: 0 });
    }

    #[test]
    fn reciprocity_rate_extremes() {
        let g = graph(&[("a", "b", 0), ("b", "a", 0), ("c", "a", 1), ("a", "c", 1)]);
        assert!(reciprocity_rate_series(&g).iter().all(|&(_, r)| r == 1.0));
        let g = graph(&[("a", "b", 0), ("c", "b", 1)]);
        assert!(reciprocity_rate_series(&g).iter().all(|&(_, r)| r == 0.0));
    }

    #[test]
    fn densification_needs_points() {
        let g = graph(&[("a", "b", 0), ("b", "c", 1)]);
        assert!(matches!(
            densification_fit(&g, 0..=1),
            Err(Error::InsufficientSnapshots(2))
        ));
    }
}
