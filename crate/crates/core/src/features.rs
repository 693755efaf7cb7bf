//! Per-relation feature vectors and the training dataset built from them.
//!
//! Thirteen temporal and structural features are extracted for every relation,
//! all observed as of the initiation day `t1`, followed by a constant bias
//! column. Target-history features only use follow-backs completed strictly
//! before `t1`.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::reciprocity::ReciprocalRelation;
use crate::calendar::{is_weekend, Weekday, DEFAULT_ANCHOR};
use crate::error::{Error, Result};
use crate::temporal_graph::{Day, DynamicDigraph, NodeId};

/// Number of extracted features.
pub const FEATURE_COUNT: usize = 13;
/// Feature dimension including the bias column.
pub const DIM: usize = FEATURE_COUNT + 1;
/// Column index of the bias feature.
pub const BIAS: usize = FEATURE_COUNT;
/// Columns holding target-history averages (filled on cold start).
pub const HISTORY_COLUMNS: [usize; 2] = [5, 6];

pub const FEATURE_NAMES: [&str; DIM] = [
    "source_join_day",
    "target_join_day",
    "source_tenure",
    "target_tenure",
    "weekend",
    "target_prev_k_mean",
    "target_prev_all_mean",
    "source_indegree",
    "target_indegree",
    "source_outdegree",
    "target_outdegree",
    "common_followees",
    "common_followers",
    "bias",
];

pub const STANDARDIZER_FORMAT: &str = "reciprocity-delay/standardizer/1";

/// A relation to describe: `u` followed `v` on day `t1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationQuery {
    pub u: NodeId,
    pub v: NodeId,
    pub t1: Day,
}

impl From<&ReciprocalRelation> for RelationQuery {
    fn from(r: &ReciprocalRelation) -> Self {
        Self { u: r.u, v: r.v, t1: r.t1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector(pub [f64; DIM]);

impl FeatureVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Completed follow-back delays of every target user, in completion order.
#[derive(Debug, Clone, Default)]
pub struct DelayHistory {
    per_target: HashMap<NodeId, (Vec<Day>, Vec<f64>)>,
}

impl DelayHistory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Indexes relations; they need not be sorted.
    pub fn from_relations(relations: &[ReciprocalRelation]) -> Self {
        let mut sorted: Vec<&ReciprocalRelation> = relations.iter().collect();
        sorted.sort_by_key(|r| (r.t2, r.completion_position));
        let mut h = Self::new();
        for r in sorted {
            h.record(r.v, r.t2, r.delay as f64);
        }
        h
    }

    /// Appends a completion. Completions must arrive in nondecreasing `t2`.
    pub fn record(&mut self, target: NodeId, t2: Day, delay: f64) {
        let (days, delays) = self.per_target.entry(target).or_default();
        debug_assert!(days.last().is_none_or(|&d| d <= t2));
        days.push(t2);
        delays.push(delay);
    }

    /// Delays of `target` completed strictly before `t`, oldest first.
    pub fn before(&self, target: NodeId, t: Day) -> &[f64] {
        match self.per_target.get(&target) {
            Some((days, delays)) => &delays[..days.partition_point(|&d| d < t)],
            None => &[],
        }
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Extracts the feature vector of `q` from the graph as of `q.t1`.
///
/// `fill` replaces both history averages when the target has no completed
/// follow-backs before `t1`.
pub fn extract_features(
    g: &DynamicDigraph,
    history: &DelayHistory,
    q: RelationQuery,
    k: usize,
    fill: f64,
    anchor: Weekday,
) -> Result<FeatureVector> {
    if q.u.index() >= g.node_count() {
        return Err(Error::UnknownNode(format!("#{}", q.u.0)));
    }
    if q.v.index() >= g.node_count() {
        return Err(Error::UnknownNode(format!("#{}", q.v.0)));
    }
    let t1 = q.t1;
    let (tu, tv) = (g.join_day(q.u), g.join_day(q.v));
    let prior = history.before(q.v, t1);
    let (prev_k, prev_all) = if prior.is_empty() {
        (fill, fill)
    } else {
        let k = k.max(1).min(prior.len());
        (mean(&prior[prior.len() - k..]), mean(prior))
    };
    let f = [
        tu as f64,
        tv as f64,
        t1.saturating_sub(tu) as f64,
        t1.saturating_sub(tv) as f64,
        if is_weekend(t1, anchor) { 1.0 } else { 0.0 },
        prev_k,
        prev_all,
        g.indegree_at(q.u, t1) as f64,
        g.indegree_at(q.v, t1) as f64,
        g.outdegree_at(q.u, t1) as f64,
        g.outdegree_at(q.v, t1) as f64,
        g.common_followees_at(q.u, q.v, t1) as f64,
        g.common_followers_at(q.u, q.v, t1) as f64,
        1.0,
    ];
    Ok(FeatureVector(f))
}

/// Cold-start value for the history features.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FillPolicy {
    /// Mean delay over the dataset's own rows.
    TrainMean,
    Constant(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureConfig {
    /// Window of the "previous k delays" feature.
    pub k: usize,
    pub anchor: Weekday,
    /// Rows with a longer delay are dropped.
    pub delay_cutoff: Day,
    pub standardize: bool,
    pub fill: FillPolicy,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            k: 4,
            anchor: DEFAULT_ANCHOR,
            delay_cutoff: 50,
            standardize: true,
            fill: FillPolicy::TrainMean,
        }
    }
}

/// Per-column z-scoring, optionally leaving the last (bias) column untouched.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub exclude_last: bool,
}

impl Standardizer {
    /// Columns with zero spread are centered only.
    pub fn fit(rows: &[Vec<f64>], exclude_last: bool) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty("standardizer rows"));
        }
        let d = rows[0].len();
        let mut mean = vec![0.0; d];
        let mut std = vec![1.0; d];
        let active = if exclude_last { d.saturating_sub(1) } else { d };
        for j in 0..active {
            let m = rows.iter().map(|r| r[j]).sum::<f64>() / n as f64;
            let var = rows.iter().map(|r| (r[j] - m) * (r[j] - m)).sum::<f64>() / n as f64;
            mean[j] = m;
            std[j] = if var > 0.0 { var.sqrt() } else { 1.0 };
        }
        Ok(Self { mean, std, exclude_last })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn apply_row(&self, row: &mut [f64]) {
        for ((x, m), s) in row.iter_mut().zip(&self.mean).zip(&self.std) {
            *x = (*x - m) / s;
        }
    }

    pub fn invert_row(&self, row: &mut [f64]) {
        for ((x, m), s) in row.iter_mut().zip(&self.mean).zip(&self.std) {
            *x = *x * s + m;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowMeta {
    pub u: String,
    pub v: String,
    pub t1: Day,
    /// Target-user group; rows with equal `group` share a target.
    pub group: usize,
    /// No completed target history at `t1`; history columns hold the fill.
    pub cold_start: bool,
}

/// Feature matrix, delays, and row provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub x: Vec<Vec<f64>>,
    pub y: Option<Vec<f64>>,
    pub meta: Vec<RowMeta>,
    /// Each row's prior target delays, oldest first (not serialized).
    pub histories: Vec<Vec<f64>>,
    pub standardizer: Option<Standardizer>,
    pub fill_value: f64,
}

impl Dataset {
    /// Plain in-memory dataset; every row is its own group unless `groups` is given.
    pub fn from_parts(x: Vec<Vec<f64>>, y: Vec<f64>, groups: Option<Vec<usize>>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
        }
        let d = x.first().map_or(0, Vec::len);
        if let Some(bad) = x.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, actual: bad.len() });
        }
        let groups = groups.unwrap_or_else(|| (0..x.len()).collect());
        if groups.len() != x.len() {
            return Err(Error::LengthMismatch { left: x.len(), right: groups.len() });
        }
        let meta = groups
            .iter()
            .enumerate()
            .map(|(i, &g)| RowMeta {
                u: format!("r{i}"),
                v: format!("g{g}"),
                t1: 0,
                group: g,
                cold_start: false,
            })
            .collect();
        Ok(Self {
            histories: vec![Vec::new(); x.len()],
            x,
            y: Some(y),
            meta,
            standardizer: None,
            fill_value: 0.0,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }

    pub fn targets(&self) -> Result<&[f64]> {
        self.y
            .as_deref()
            .ok_or_else(|| Error::Dataset("dataset has no delay column".into()))
    }

    pub fn groups(&self) -> Vec<usize> {
        self.meta.iter().map(|m| m.group).collect()
    }

    /// Rows at `idx`, in that order.
    pub fn subset(&self, idx: &[usize]) -> Self {
        Self {
            x: idx.iter().map(|&i| self.x[i].clone()).collect(),
            y: self.y.as_ref().map(|y| idx.iter().map(|&i| y[i]).collect()),
            meta: idx.iter().map(|&i| self.meta[i].clone()).collect(),
            histories: idx.iter().map(|&i| self.histories[i].clone()).collect(),
            standardizer: self.standardizer.clone(),
            fill_value: self.fill_value,
        }
    }

    /// Overwrites history columns of cold-start rows. Only valid on raw features.
    pub fn apply_cold_start_fill(&mut self, value: f64) {
        for (row, m) in self.x.iter_mut().zip(&self.meta) {
            if m.cold_start {
                for c in HISTORY_COLUMNS {
                    row[c] = value;
                }
            }
        }
        self.fill_value = value;
    }

    /// Fits a standardizer on these rows (bias column excluded) and applies it.
    pub fn standardize(&mut self) -> Result<()> {
        if self.standardizer.is_some() {
            return Err(Error::Dataset("dataset is already standardized".into()));
        }
        let s = Standardizer::fit(&self.x, true)?;
        self.apply_standardizer(&s)
    }

    /// Applies stored statistics from another dataset, e.g. training rows.
    pub fn apply_standardizer(&mut self, s: &Standardizer) -> Result<()> {
        if self.standardizer.is_some() {
            return Err(Error::Dataset("dataset is already standardized".into()));
        }
        if !self.is_empty() && s.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: s.dim(), actual: self.dim() });
        }
        for row in &mut self.x {
            s.apply_row(row);
        }
        self.standardizer = Some(s.clone());
        Ok(())
    }

    pub fn destandardize(&mut self) {
        if let Some(s) = self.standardizer.take() {
            for row in &mut self.x {
                s.invert_row(row);
            }
        }
    }
}

/// Builds the dataset for `relations`; delays above the cutoff are dropped.
///
/// Group ids number target users in order of first appearance.
pub fn build_dataset(
    g: &DynamicDigraph,
    relations: &[ReciprocalRelation],
    cfg: &FeatureConfig,
) -> Result<Dataset> {
    let history = DelayHistory::from_relations(relations);
    let kept: Vec<&ReciprocalRelation> = relations.iter().filter(|r| r.delay <= cfg.delay_cutoff).collect();
    if kept.is_empty() {
        return Err(Error::Dataset(format!(
            "no relations with delay <= {} days",
            cfg.delay_cutoff
        )));
    }
    let y: Vec<f64> = kept.iter().map(|r| r.delay as f64).collect();
    let fill = match cfg.fill {
        FillPolicy::TrainMean => mean(&y),
        FillPolicy::Constant(c) => c,
    };
    let x: Vec<Vec<f64>> = kept
        .par_iter()
        .map(|r| extract_features(g, &history, RelationQuery::from(*r), cfg.k, fill, cfg.anchor).map(|f| f.0.to_vec()))
        .collect::<Result<_>>()?;
    let mut group_of: HashMap<NodeId, usize> = HashMap::new();
    let mut meta = Vec::with_capacity(kept.len());
    let mut histories = Vec::with_capacity(kept.len());
    for r in &kept {
        let next = group_of.len();
        let group = *group_of.entry(r.v).or_insert(next);
        let prior = history.before(r.v, r.t1);
        meta.push(RowMeta {
            u: g.name(r.u).to_owned(),
            v: g.name(r.v).to_owned(),
            t1: r.t1,
            group,
            cold_start: prior.is_empty(),
        });
        histories.push(prior.to_vec());
    }
    let mut ds = Dataset {
        x,
        y: Some(y),
        meta,
        histories,
        standardizer: None,
        fill_value: fill,
    };
    if cfg.standardize {
        ds.standardize()?;
    }
    Ok(ds)
}

/// Writes `u,v,t1,group,f1..fd[,y]` with round-trip float formatting.
pub fn write_dataset_csv<W: Write>(w: W, ds: &Dataset) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let d = ds.dim();
    let mut header: Vec<String> = ["u", "v", "t1", "group"].iter().map(|s| s.to_string()).collect();
    header.extend((1..=d).map(|j| format!("f{j}")));
    if ds.y.is_some() {
        header.push("y".into());
    }
    out.write_record(&header)?;
    for i in 0..ds.len() {
        let m = &ds.meta[i];
        let mut rec = vec![m.u.clone(), m.v.clone(), m.t1.to_string(), m.group.to_string()];
        rec.extend(ds.x[i].iter().map(|v| v.to_string()));
        if let Some(y) = &ds.y {
            rec.push(y[i].to_string());
        }
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_dataset_csv<R: std::io::Read>(r: R) -> Result<Dataset> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers()?.clone();
    let cols: Vec<&str> = header.iter().collect();
    if cols.len() < 5 || cols[..4] != ["u", "v", "t1", "group"] {
        return Err(Error::Format("dataset header must start with u,v,t1,group".into()));
    }
    let has_y = cols.last() == Some(&"y");
    let d = cols.len() - 4 - usize::from(has_y);
    for (j, c) in cols[4..4 + d].iter().enumerate() {
        if *c != format!("f{}", j + 1) {
            return Err(Error::Format(format!("unexpected column `{c}`")));
        }
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut meta = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let num = |j: usize| -> Result<f64> {
            rec[j].parse().map_err(|_| Error::Parse {
                line,
                message: format!("invalid number `{}`", &rec[j]),
            })
        };
        let int = |j: usize| -> Result<u64> {
            rec[j].parse().map_err(|_| Error::Parse {
                line,
                message: format!("invalid integer `{}`", &rec[j]),
            })
        };
        meta.push(RowMeta {
            u: rec[0].to_owned(),
            v: rec[1].to_owned(),
            t1: int(2)? as Day,
            group: int(3)? as usize,
            cold_start: false,
        });
        x.push((4..4 + d).map(num).collect::<Result<Vec<f64>>>()?);
        if has_y {
            y.push(num(4 + d)?);
        }
    }
    Ok(Dataset {
        histories: vec![Vec::new(); x.len()],
        x,
        y: has_y.then_some(y),
        meta,
        standardizer: None,
        fill_value: 0.0,
    })
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

/// Key-value sidecar holding the standardization statistics and cold-start fill.
pub fn write_standardizer<W: Write>(mut w: W, s: Option<&Standardizer>, fill: f64) -> Result<()> {
    writeln!(w, "format={STANDARDIZER_FORMAT}")?;
    writeln!(w, "fill={fill}")?;
    match s {
        Some(s) => {
            writeln!(w, "standardized=true")?;
            writeln!(w, "columns={}", s.dim())?;
            writeln!(w, "exclude_last={}", s.exclude_last)?;
            writeln!(w, "mean={}", join(&s.mean))?;
            writeln!(w, "std={}", join(&s.std))?;
        }
        None => writeln!(w, "standardized=false")?,
    }
    Ok(())
}

pub fn read_standardizer<R: BufRead>(r: R) -> Result<(Option<Standardizer>, f64)> {
    let mut kv = HashMap::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("expected key=value, got `{line}`")))?;
        kv.insert(k.trim().to_owned(), v.trim().to_owned());
    }
    let get = |k: &str| kv.get(k).ok_or_else(|| Error::Format(format!("missing key `{k}`")));
    if get("format")? != STANDARDIZER_FORMAT {
        return Err(Error::Format(format!("unsupported format `{}`", get("format")?)));
    }
    let bad = |k: &str| Error::Format(format!("invalid value for `{k}`"));
    let fill: f64 = get("fill")?.parse().map_err(|_| bad("fill"))?;
    if get("standardized")? != "true" {
        return Ok((None, fill));
    }
    let floats = |k: &str| -> Result<Vec<f64>> {
        get(k)?
            .split(',')
            .map(|s| s.parse().map_err(|_| bad(k)))
            .collect()
    };
    let s = Standardizer {
        mean: floats("mean")?,
        std: floats("std")?,
        exclude_last: get("exclude_last")?.parse().map_err(|_| bad("exclude_last"))?,
    };
    let columns: usize = get("columns")?.parse().map_err(|_| bad("columns"))?;
    if s.mean.len() != columns || s.std.len() != columns {
        return Err(Error::Format("column count does not match statistics".into()));
    }
    Ok((Some(s), fill))
}
