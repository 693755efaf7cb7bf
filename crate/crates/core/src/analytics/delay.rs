//! Delay distribution and temporal delay patterns.

use std::collections::HashMap;

use crate::analytics::reciprocity::{ols_line, ReciprocalRelation};
use crate::calendar::{day_of_week, Weekday};
use crate::eval::metrics::{mae, rmse};
use crate::table::Table;
use crate::temporal_graph::{Day, DynamicDigraph, NodeId};

/// Delay filter used by the delay analyses (days).
pub const DEFAULT_DELAY_CUTOFF: Day = 50;

/// Endpoint of a relation an analysis is keyed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Source,
    Target,
}

impl Role {
    pub fn pick(self, r: &ReciprocalRelation) -> NodeId {
        match self {
            Role::Source => r.u,
            Role::Target => r.v,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Role::Source => "source",
            Role::Target => "target",
        }
    }
}

/// Keeps relations with `delay <= cutoff`.
pub fn within_cutoff(relations: &[ReciprocalRelation], cutoff: Day) -> Vec<ReciprocalRelation> {
    relations.iter().copied().filter(|r| r.delay <= cutoff).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelayHistogram {
    /// `bins[d]` counts relations with delay `d`, for `d` in `0..=cutoff`.
    pub bins: Vec<u64>,
    pub overflow: u64,
    pub total: u64,
}

pub fn delay_histogram(relations: &[ReciprocalRelation], cutoff: Day) -> DelayHistogram {
    let cutoff = cutoff.max(1);
    let mut bins = vec![0u64; cutoff as usize + 1];
    let mut overflow = 0;
    for r in relations {
        match bins.get_mut(r.delay as usize) {
            Some(b) => *b += 1,
            None => overflow += 1,
        }
    }
    DelayHistogram {
        bins,
        overflow,
        total: relations.len() as u64,
    }
}

impl DelayHistogram {
    /// Slope of `ln count` against `ln delay` over nonempty bins with delay >= 1.
    pub fn log_log_slope(&self) -> Option<f64> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .bins
            .iter()
            .enumerate()
            .skip(1)
            .filter(|&(_, &c)| c > 0)
            .map(|(d, &c)| ((d as f64).ln(), (c as f64).ln()))
            .unzip();
        if xs.len() < 2 {
            return None;
        }
        ols_line(&xs, &ys).map(|(slope, _, _)| slope)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["delay", "count", "fraction"]);
        let total = self.total.max(1) as f64;
        for (d, &c) in self.bins.iter().enumerate() {
            t.push(vec![d.into(), (c as usize).into(), (c as f64 / total).into()]);
        }
        t.push(vec![
            "overflow".into(),
            (self.overflow as usize).into(),
            (self.overflow as f64 / total).into(),
        ]);
        t
    }
}

/// Mean delay of one group of relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BucketMean {
    pub bucket_start: Day,
    pub mean_delay: f64,
    pub count: usize,
}

/// Average delay grouped by `floor(join_day / bucket_width)` of the chosen
/// endpoint. Empty buckets are omitted.
pub fn avg_delay_by_join_time(
    relations: &[ReciprocalRelation],
    g: &DynamicDigraph,
    role: Role,
    bucket_width: Day,
) -> Vec<BucketMean> {
    let width = bucket_width.max(1);
    let mut acc: HashMap<Day, (u64, usize)> = HashMap::new();
    for r in relations {
        let bucket = g.join_day(role.pick(r)) / width;
        let e = acc.entry(bucket).or_default();
        e.0 += r.delay as u64;
        e.1 += 1;
    }
    let mut rows: Vec<BucketMean> = acc
        .into_iter()
        .map(|(b, (sum, count))| BucketMean {
            bucket_start: b * width,
            mean_delay: sum as f64 / count as f64,
            count,
        })
        .collect();
    rows.sort_by_key(|r| r.bucket_start);
    rows
}

pub fn bucket_mean_table(rows: &[BucketMean]) -> Table {
    let mut t = Table::new(&["bucket_start", "mean_delay", "count"]);
    for r in rows {
        t.push(vec![r.bucket_start.into(), r.mean_delay.into(), r.count.into()]);
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeeklyPatterns {
    /// Mean delay by weekday of `t1` (Monday first); `None` for empty days.
    pub avg_delay_by_initiation: [Option<f64>; 7],
    pub initiation_counts: [usize; 7],
    /// Number of relations completed on each weekday of `t2`.
    pub completions_by_weekday: [usize; 7],
}

pub fn weekly_patterns(relations: &[ReciprocalRelation], anchor: Weekday) -> WeeklyPatterns {
    let mut sums = [0u64; 7];
    let mut counts = [0usize; 7];
    let mut completions = [0usize; 7];
    for r in relations {
        let w = day_of_week(r.t1, anchor).index();
        sums[w] += r.delay as u64;
        counts[w] += 1;
        completions[day_of_week(r.t2, anchor).index()] += 1;
    }
    let avg = std::array::from_fn(|i| (counts[i] > 0).then(|| sums[i] as f64 / counts[i] as f64));
    WeeklyPatterns {
        avg_delay_by_initiation: avg,
        initiation_counts: counts,
        completions_by_weekday: completions,
    }
}

impl WeeklyPatterns {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["weekday", "mean_delay_by_initiation", "initiated", "completed"]);
        for day in Weekday::ALL {
            let i = day.index();
            t.push(vec![
                day.short_name().into(),
                self.avg_delay_by_initiation[i].into(),
                self.initiation_counts[i].into(),
                self.completions_by_weekday[i].into(),
            ]);
        }
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PkError {
    pub k: usize,
    pub mae: f64,
    pub rmse: f64,
    pub predictions: usize,
}

/// Chronological (by completion) delay sequence of each target user.
pub fn delay_sequences(relations: &[ReciprocalRelation]) -> Vec<Vec<f64>> {
    let mut sorted: Vec<&ReciprocalRelation> = relations.iter().collect();
    sorted.sort_by_key(|r| (r.v, r.t2, r.completion_position));
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut last = None;
    for r in sorted {
        if last != Some(r.v) {
            out.push(Vec::new());
            last = Some(r.v);
        }
        out.last_mut().unwrap().push(r.delay as f64);
    }
    out
}

/// Pooled error of predicting each delay in a target user's sequence by the
/// mean of the previous `k` delays. Relations above `delay_cutoff` are dropped
/// first. `k` with no predictions yields NaN errors.
pub fn sequential_pk_error(
    relations: &[ReciprocalRelation],
    k_values: &[usize],
    delay_cutoff: Day,
) -> Vec<PkError> {
    let kept = within_cutoff(relations, delay_cutoff);
    let sequences = delay_sequences(&kept);
    k_values
        .iter()
        .map(|&k| {
            let k = k.max(1);
            let mut actual = Vec::new();
            let mut predicted = Vec::new();
            for seq in &sequences {
                for i in k..seq.len() {
                    actual.push(seq[i]);
                    predicted.push(seq[i - k..i].iter().sum::<f64>() / k as f64);
                }
            }
            let (mae, rmse) = if actual.is_empty() {
                (f64::NAN, f64::NAN)
            } else {
                (mae(&actual, &predicted).unwrap(), rmse(&actual, &predicted).unwrap())
            };
            PkError {
                k,
                mae,
                rmse,
                predictions: actual.len(),
            }
        })
        .collect()
}

pub fn pk_table(rows: &[PkError]) -> Table {
    let mut t = Table::new(&["k", "mae", "rmse", "predictions"]);
    for r in rows {
        t.push(vec![r.k.into(), r.mae.into(), r.rmse.into(), r.predictions.into()]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::reciprocity::extract_reciprocal_relations;
    use crate::temporal_graph::TemporalEdge;

    fn rel(v: u32, t1: Day, t2: Day) -> ReciprocalRelation {
        ReciprocalRelation {
            u: NodeId(100 + t1),
            v: NodeId(v),
            t1,
            t2,
            delay: t2 - t1,
            completion_position: t2 as u64,
        }
    }

    #[test]
    fn histogram_bins_and_overflow() {
        let h = delay_histogram(&[rel(0, 0, 0), rel(0, 1, 1), rel(0, 0, 7)], 50);
        assert_eq!((h.bins[0], h.bins[7], h.overflow, h.total), (2, 1, 0, 3));
        let h = delay_histogram(&[rel(0, 0, 60)], 50);
        assert_eq!(h.overflow, 1);
        assert_eq!(h.bins.iter().sum::<u64>() + h.overflow, h.total);
    }

    #[test]
    fn join_time_buckets() {
        let edges = vec![
            TemporalEdge::new("a", "b", 3),
            TemporalEdge::new("b", "a", 5),
            TemporalEdge::new("a", "c", 4),
            TemporalEdge::new("c", "a", 8),
        ];
        let g = DynamicDigraph::from_edges(&edges).unwrap();
        let rels = extract_reciprocal_relations(&g);
        let rows = avg_delay_by_join_time(&rels, &g, Role::Source, 10);
        assert_eq!(rows, vec![BucketMean { bucket_start: 0, mean_delay: 3.0, count: 2 }]);
    }

    #[test]
    fn weekday_grouping() {
        use crate::calendar::DEFAULT_ANCHOR;
        let w = weekly_patterns(&[rel(0, 0, 2), rel(0, 3, 3)], DEFAULT_ANCHOR);
        assert_eq!(w.avg_delay_by_initiation[Weekday::Wednesday.index()], Some(2.0));
        assert_eq!(w.avg_delay_by_initiation[Weekday::Saturday.index()], Some(0.0));
        assert_eq!(w.completions_by_weekday[Weekday::Friday.index()], 1);
        assert_eq!(w.avg_delay_by_initiation[Weekday::Monday.index()], None);
    }

    #[test]
    fn pk_constant_and_two_point_sequences() {
        let r = sequential_pk_error(&[rel(0, 0, 4), rel(0, 10, 14), rel(0, 20, 24)], &[1], 50);
        assert_eq!((r[0].mae, r[0].predictions), (0.0, 2));
        let r = sequential_pk_error(&[rel(0, 0, 2), rel(0, 10, 16)], &[1], 50);
        assert_eq!(r[0].mae, 4.0);
        let r = sequential_pk_error(&[rel(0, 0, 2)], &[3], 50);
        assert!(r[0].mae.is_nan());
    }
}
