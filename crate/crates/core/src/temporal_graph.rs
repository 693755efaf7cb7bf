//! Timestamped directed follow graph with time-indexed structural queries.
//!
//! Edges carry a day index (one-day granularity). Each ordered pair is stored
//! once, at the earliest day it was observed. Per-node adjacency lists are kept
//! sorted by day so that "as of day `t`" degree queries are a binary search.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Day index, `0` being the first day of the observation window.
pub type Day = u32;

/// Dense node handle, valid only for the graph that issued it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One follow event as it appears in an edge-list file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalEdge {
    pub src: String,
    pub dst: String,
    pub day: Day,
}

impl TemporalEdge {
    pub fn new(src: impl Into<String>, dst: impl Into<String>, day: Day) -> Self {
        Self {
            src: src.into(),
            dst: dst.into(),
            day,
        }
    }
}

/// Stored edge data: creation day and the stream position of the kept record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeInfo {
    pub day: Day,
    pub position: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DynamicDigraph {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: HashMap<(NodeId, NodeId), EdgeInfo>,
    // (day, neighbor), sorted
    out_adj: Vec<Vec<(Day, NodeId)>>,
    in_adj: Vec<Vec<(Day, NodeId)>>,
    join: Vec<Day>,
    join_days_sorted: Vec<Day>,
    edge_days_sorted: Vec<Day>,
    next_position: u64,
}

fn sorted_insert<T: Ord>(v: &mut Vec<T>, item: T) {
    let at = v.partition_point(|x| *x <= item);
    v.insert(at, item);
}

fn sorted_remove<T: Ord>(v: &mut Vec<T>, item: &T) {
    let at = v.partition_point(|x| x < item);
    debug_assert!(at < v.len() && v[at] == *item);
    v.remove(at);
}

impl DynamicDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from a stream of edges. Self-follows are rejected.
    pub fn from_edges<'a, I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a TemporalEdge>,
    {
        let mut g = Self::new();
        for e in edges {
            g.insert(&e.src, &e.dst, e.day)?;
        }
        Ok(g)
    }

    /// Parses an edge-list file and ingests it.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let edges = read_edge_list(reader)?;
        Self::from_edges(&edges)
    }

    fn intern(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = NodeId(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        self.join.push(Day::MAX);
        id
    }

    fn lower_join(&mut self, v: NodeId, day: Day) {
        let old = self.join[v.index()];
        if day < old {
            if old != Day::MAX {
                sorted_remove(&mut self.join_days_sorted, &old);
            }
            sorted_insert(&mut self.join_days_sorted, day);
            self.join[v.index()] = day;
        }
    }

    /// Ingests one follow event. Returns `true` if the graph changed.
    ///
    /// Duplicates keep the earliest day; among same-day duplicates the first
    /// stream position wins.
    pub fn insert(&mut self, src: &str, dst: &str, day: Day) -> Result<bool> {
        if src == dst {
            return Err(Error::InvalidEdge {
                src: src.to_owned(),
                dst: dst.to_owned(),
                message: "self-follow".into(),
            });
        }
        if src.is_empty() || dst.is_empty() {
            return Err(Error::InvalidEdge {
                src: src.to_owned(),
                dst: dst.to_owned(),
                message: "empty node identifier".into(),
            });
        }
        let position = self.next_position;
        self.next_position += 1;
        let s = self.intern(src);
        let d = self.intern(dst);
        match self.edges.get(&(s, d)).copied() {
            Some(old) if old.day <= day => return Ok(false),
            Some(old) => {
                sorted_remove(&mut self.out_adj[s.index()], &(old.day, d));
                sorted_remove(&mut self.in_adj[d.index()], &(old.day, s));
                sorted_remove(&mut self.edge_days_sorted, &old.day);
            }
            None => {}
        }
        self.edges.insert((s, d), EdgeInfo { day, position });
        sorted_insert(&mut self.out_adj[s.index()], (day, d));
        sorted_insert(&mut self.in_adj[d.index()], (day, s));
        sorted_insert(&mut self.edge_days_sorted, day);
        self.lower_join(s, day);
        self.lower_join(d, day);
        Ok(true)
    }

    pub fn node(&self, name: &str) -> Result<NodeId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownNode(name.to_owned()))
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v.index()]
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Largest edge day, or `None` for an empty graph.
    pub fn max_day(&self) -> Option<Day> {
        self.edge_days_sorted.last().copied()
    }

    pub fn join_day(&self, v: NodeId) -> Day {
        self.join[v.index()]
    }

    pub fn edge(&self, src: NodeId, dst: NodeId) -> Option<EdgeInfo> {
        self.edges.get(&(src, dst)).copied()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.names.len() as u32).map(NodeId)
    }

    /// All edges as `(src, dst, info)`, ordered by stream position.
    pub fn edges(&self) -> Vec<(NodeId, NodeId, EdgeInfo)> {
        let mut all: Vec<_> = self.edges.iter().map(|(&(s, d), &i)| (s, d, i)).collect();
        all.sort_by_key(|&(_, _, i)| i.position);
        all
    }

    pub fn indegree_at(&self, v: NodeId, t: Day) -> usize {
        self.in_adj[v.index()].partition_point(|&(d, _)| d <= t)
    }

    pub fn outdegree_at(&self, v: NodeId, t: Day) -> usize {
        self.out_adj[v.index()].partition_point(|&(d, _)| d <= t)
    }

    /// Out-neighbors of `v` whose edge exists by day `t`.
    pub fn followees_at(&self, v: NodeId, t: Day) -> impl Iterator<Item = NodeId> + '_ {
        let adj = &self.out_adj[v.index()];
        adj[..adj.partition_point(|&(d, _)| d <= t)].iter().map(|&(_, w)| w)
    }

    /// In-neighbors of `v` whose edge exists by day `t`.
    pub fn followers_at(&self, v: NodeId, t: Day) -> impl Iterator<Item = NodeId> + '_ {
        let adj = &self.in_adj[v.index()];
        adj[..adj.partition_point(|&(d, _)| d <= t)].iter().map(|&(_, w)| w)
    }

    /// Number of nodes followed by both `u` and `v` as of day `t`.
    pub fn common_followees_at(&self, u: NodeId, v: NodeId, t: Day) -> usize {
        if u == v {
            return self.outdegree_at(u, t);
        }
        let (small, other) = if self.outdegree_at(u, t) <= self.outdegree_at(v, t) {
            (u, v)
        } else {
            (v, u)
        };
        self.followees_at(small, t)
            .filter(|&w| self.edge(other, w).is_some_and(|e| e.day <= t))
            .count()
    }

    /// Number of nodes following both `u` and `v` as of day `t`.
    pub fn common_followers_at(&self, u: NodeId, v: NodeId, t: Day) -> usize {
        if u == v {
            return self.indegree_at(u, t);
        }
        let (small, other) = if self.indegree_at(u, t) <= self.indegree_at(v, t) {
            (u, v)
        } else {
            (v, u)
        };
        self.followers_at(small, t)
            .filter(|&w| self.edge(w, other).is_some_and(|e| e.day <= t))
            .count()
    }

    /// `(n(t), e(t))`: nodes joined and edges created by day `t`.
    pub fn snapshot_counts(&self, t: Day) -> (usize, usize) {
        (
            self.join_days_sorted.partition_point(|&d| d <= t),
            self.edge_days_sorted.partition_point(|&d| d <= t),
        )
    }
}

/// Reads `src<TAB>dst<TAB>day` records. Blank lines and `#` comments are skipped.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Vec<TemporalEdge>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 3 tab-separated fields, found {}", fields.len()),
            });
        }
        let (src, dst) = (fields[0], fields[1]);
        for id in [src, dst] {
            if id.is_empty() || id.chars().any(char::is_whitespace) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("invalid node identifier `{id}`"),
                });
            }
        }
        let day: i64 = fields[2].trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("invalid day `{}`", fields[2]),
        })?;
        if day < 0 {
            return Err(Error::InvalidEdge {
                src: src.to_owned(),
                dst: dst.to_owned(),
                message: format!("negative day {day} on line {line_no}"),
            });
        }
        let day = Day::try_from(day).map_err(|_| Error::Parse {
            line: line_no,
            message: format!("day {day} out of range"),
        })?;
        out.push(TemporalEdge::new(src, dst, day));
    }
    Ok(out)
}

pub fn write_edge_list<W: Write>(mut w: W, edges: &[TemporalEdge]) -> Result<()> {
    for e in edges {
        writeln!(w, "{}\t{}\t{}", e.src, e.dst, e.day)?;
    }
    Ok(())
}
