//! Delay versus degree and shared-neighborhood size, evaluated at initiation.

use crate::analytics::delay::Role;
use crate::analytics::reciprocity::ReciprocalRelation;
use crate::table::Table;
use crate::temporal_graph::DynamicDigraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeKind {
    In,
    Out,
}

impl DegreeKind {
    pub fn label(self) -> &'static str {
        match self {
            DegreeKind::In => "in",
            DegreeKind::Out => "out",
        }
    }
}

/// `low` and `high` degree boundaries; both comparisons are strict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeThresholds {
    pub low: usize,
    pub high: usize,
}

impl Default for DegreeThresholds {
    fn default() -> Self {
        Self { low: 10, high: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeBucket {
    Low,
    Normal,
    High,
}

impl DegreeBucket {
    pub const ALL: [DegreeBucket; 3] = [DegreeBucket::Low, DegreeBucket::Normal, DegreeBucket::High];

    pub fn classify(degree: usize, th: DegreeThresholds) -> Self {
        if degree < th.low {
            DegreeBucket::Low
        } else if degree > th.high {
            DegreeBucket::High
        } else {
            DegreeBucket::Normal
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DegreeBucket::Low => "low",
            DegreeBucket::Normal => "normal",
            DegreeBucket::High => "high",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupMean {
    pub mean_delay: Option<f64>,
    pub count: usize,
}

fn finish(sum: u64, count: usize) -> GroupMean {
    GroupMean {
        mean_delay: (count > 0).then(|| sum as f64 / count as f64),
        count,
    }
}

/// Mean delay in the low / normal / high buckets of the chosen endpoint's
/// degree at `t1`.
pub fn avg_delay_by_degree_bucket(
    relations: &[ReciprocalRelation],
    g: &DynamicDigraph,
    kind: DegreeKind,
    role: Role,
    thresholds: DegreeThresholds,
) -> [GroupMean; 3] {
    let mut sums = [0u64; 3];
    let mut counts = [0usize; 3];
    for r in relations {
        let node = role.pick(r);
        let degree = match kind {
            DegreeKind::In => g.indegree_at(node, r.t1),
            DegreeKind::Out => g.outdegree_at(node, r.t1),
        };
        let b = DegreeBucket::classify(degree, thresholds) as usize;
        sums[b] += r.delay as u64;
        counts[b] += 1;
    }
    std::array::from_fn(|i| finish(sums[i], counts[i]))
}

pub fn degree_bucket_table(rows: &[GroupMean; 3]) -> Table {
    let mut t = Table::new(&["bucket", "mean_delay", "count"]);
    for (b, r) in DegreeBucket::ALL.iter().zip(rows) {
        t.push(vec![b.label().into(), r.mean_delay.into(), r.count.into()]);
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeighborKind {
    Followees,
    Followers,
}

impl NeighborKind {
    pub fn label(self) -> &'static str {
        match self {
            NeighborKind::Followees => "followees",
            NeighborKind::Followers => "followers",
        }
    }
}

/// Lower bounds of the common-neighbor ranges; the last range is open.
pub const COMMON_NEIGHBOR_RANGES: [usize; 6] = [0, 20, 40, 60, 80, 100];

pub fn common_neighbor_range(count: usize) -> usize {
    COMMON_NEIGHBOR_RANGES.partition_point(|&lo| lo <= count) - 1
}

pub fn avg_delay_by_common_neighbors(
    relations: &[ReciprocalRelation],
    g: &DynamicDigraph,
    kind: NeighborKind,
) -> [GroupMean; 6] {
    let mut sums = [0u64; 6];
    let mut counts = [0usize; 6];
    for r in relations {
        let c = match kind {
            NeighborKind::Followees => g.common_followees_at(r.u, r.v, r.t1),
            NeighborKind::Followers => g.common_followers_at(r.u, r.v, r.t1),
        };
        let b = common_neighbor_range(c);
        sums[b] += r.delay as u64;
        counts[b] += 1;
    }
    std::array::from_fn(|i| finish(sums[i], counts[i]))
}

pub fn common_neighbor_table(rows: &[GroupMean; 6]) -> Table {
    let mut t = Table::new(&["range", "mean_delay", "count"]);
    for (i, r) in rows.iter().enumerate() {
        let label = match COMMON_NEIGHBOR_RANGES.get(i + 1) {
            Some(hi) => format!("[{};{})", COMMON_NEIGHBOR_RANGES[i], hi),
            None => format!("[{};inf)", COMMON_NEIGHBOR_RANGES[i]),
        };
        t.push(vec![label.into(), r.mean_delay.into(), r.count.into()]);
    }
    t
}
