//! Seeded synthetic follow networks with planted reciprocation delays.
//!
//! Users arrive day by day, follow by preferential attachment on indegree,
//! and each follow is reciprocated with a fixed probability after
//! `round(max(1, x.w* + offset(v) + eps))` days, where `x` is the feature
//! vector of the follow computed by [`extract_features`] at the end of the
//! initiation day. Delays are at least one day so that the follow-back never
//! shows up in the features of its own initiation.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};

use crate::calendar::{Weekday, DEFAULT_ANCHOR};
use crate::error::{Error, Result};
use crate::features::{extract_features, DelayHistory, RelationQuery, DIM};
use crate::linalg::dot;
use crate::table::{Cell, Table};
use crate::temporal_graph::{Day, DynamicDigraph, TemporalEdge};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub users: usize,
    /// Days simulated; days run `0..horizon`.
    pub horizon: Day,
    /// Ratio between consecutive days' arrival rates (1 = uniform arrivals).
    pub growth: f64,
    /// Follows made by a newcomer on arrival.
    pub initial_follows: usize,
    /// Expected follows per existing user per day.
    pub activity: f64,
    /// Probability that a follow target is drawn proportionally to
    /// `indegree + 1` rather than uniformly.
    pub attachment: f64,
    pub reciprocation: f64,
    /// Planted coefficients over the raw feature vector, bias last.
    pub w_star: Vec<f64>,
    pub sigma_u: f64,
    pub sigma_eps: f64,
    /// Follow-backs due after this day are dropped.
    pub censor_day: Day,
    /// Window of the previous-k history feature used during planting.
    pub k: usize,
    /// History feature value for targets without completed follow-backs.
    pub fill: f64,
    pub anchor: Weekday,
    pub seed: u64,
}

impl Default for SynthConfig {
    /// A small network with a few dominant targets, each carrying its own
    /// delay offset.
    fn default() -> Self {
        let mut w_star = vec![0.0; DIM];
        w_star[4] = 2.0; // weekend
        w_star[8] = 0.02; // target indegree
        w_star[12] = -0.5; // common followers
        w_star[DIM - 1] = 20.0;
        Self {
            users: 600,
            horizon: 220,
            growth: 1.02,
            initial_follows: 3,
            activity: 0.5,
            attachment: 0.95,
            reciprocation: 0.9,
            w_star,
            sigma_u: 6.0,
            sigma_eps: 1.0,
            censor_day: 219,
            k: 4,
            fill: 20.0,
            anchor: DEFAULT_ANCHOR,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must lie in [0, 1], got {p}")))
            }
        };
        prob("attachment", self.attachment)?;
        prob("reciprocation", self.reciprocation)?;
        for (name, v) in [
            ("sigma_u", self.sigma_u),
            ("sigma_eps", self.sigma_eps),
            ("activity", self.activity),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !(self.growth > 0.0 && self.growth.is_finite()) {
            return Err(Error::Config(format!("growth must be > 0, got {}", self.growth)));
        }
        if self.w_star.len() != DIM {
            return Err(Error::DimensionMismatch {
                expected: DIM,
                actual: self.w_star.len(),
            });
        }
        if self.w_star.iter().any(|v| !v.is_finite()) || !self.fill.is_finite() {
            return Err(Error::Config("planted coefficients must be finite".into()));
        }
        if self.users < 2 || self.horizon == 0 {
            return Err(Error::Config("need at least 2 users and 1 day".into()));
        }
        Ok(())
    }
}

/// One emitted follow-back and the quantities that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedDelay {
    pub u: String,
    pub v: String,
    pub t1: Day,
    pub t2: Day,
    pub planted_delay: Day,
    pub offset_v: f64,
    /// Feature vector used for planting.
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOutput {
    pub edges: Vec<TemporalEdge>,
    pub truth: Vec<PlantedDelay>,
}

impl SynthOutput {
    /// `u,v,t1,t2,planted_delay,offset_v`
    pub fn truth_table(&self) -> Table {
        let mut t = Table::new(&["u", "v", "t1", "t2", "planted_delay", "offset_v"]);
        for r in &self.truth {
            t.push(vec![
                Cell::from(r.u.as_str()),
                Cell::from(r.v.as_str()),
                r.t1.into(),
                r.t2.into(),
                r.planted_delay.into(),
                r.offset_v.into(),
            ]);
        }
        t
    }
}

/// `round(max(1, raw))` with halves rounded up.
pub fn planted_delay(raw: f64) -> Day {
    (raw.max(1.0) + 0.5).floor().min(Day::MAX as f64) as Day
}

/// Cumulative arrivals by the end of each day.
fn arrival_schedule(users: usize, horizon: Day, growth: f64) -> Vec<usize> {
    let t = horizon as f64;
    (0..horizon)
        .map(|d| {
            let frac = if (growth - 1.0).abs() < 1e-12 {
                (d as f64 + 1.0) / t
            } else {
                (growth.powf(d as f64 + 1.0) - 1.0) / (growth.powf(t) - 1.0)
            };
            ((users as f64 * frac).round() as usize).clamp(2.min(users), users)
        })
        .collect()
}

struct Sim {
    rng: ChaCha8Rng,
    graph: DynamicDigraph,
    edges: Vec<TemporalEdge>,
    // one entry per user plus one per received follow
    attachment_pool: Vec<usize>,
    linked: HashSet<(usize, usize)>,
}

impl Sim {
    fn pick_target(&mut self, arrived: usize, attachment: f64) -> usize {
        if self.rng.random::<f64>() < attachment {
            self.attachment_pool[self.rng.random_range(0..self.attachment_pool.len())]
        } else {
            self.rng.random_range(0..arrived)
        }
    }

    fn follow(&mut self, u: usize, v: usize, day: Day) -> Result<bool> {
        if u == v || self.linked.contains(&(u.min(v), u.max(v))) {
            return Ok(false);
        }
        self.linked.insert((u.min(v), u.max(v)));
        self.link(u, v, day)?;
        Ok(true)
    }

    fn link(&mut self, u: usize, v: usize, day: Day) -> Result<()> {
        let e = TemporalEdge::new(user_name(u), user_name(v), day);
        self.graph.insert(&e.src, &e.dst, day)?;
        self.edges.push(e);
        self.attachment_pool.push(v);
        Ok(())
    }
}

pub fn user_name(i: usize) -> String {
    format!("user{i}")
}

/// Runs the generator. Identical configurations give identical output.
pub fn generate(cfg: &SynthConfig) -> Result<SynthOutput> {
    cfg.validate()?;
    let mut sim = Sim {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        graph: DynamicDigraph::new(),
        edges: Vec::new(),
        attachment_pool: Vec::new(),
        linked: HashSet::new(),
    };
    let offset_dist = Normal::new(0.0, cfg.sigma_u).map_err(|e| Error::Config(e.to_string()))?;
    let noise = Normal::new(0.0, cfg.sigma_eps).map_err(|e| Error::Config(e.to_string()))?;
    let offsets: Vec<f64> = (0..cfg.users).map(|_| offset_dist.sample(&mut sim.rng)).collect();
    let schedule = arrival_schedule(cfg.users, cfg.horizon, cfg.growth);

    let mut history = DelayHistory::new();
    // due[t] holds (u, v, t1, delay, x) for follow-backs landing on day t
    let mut due: Vec<Vec<(usize, usize, Day, Day, Vec<f64>)>> = vec![Vec::new(); cfg.horizon as usize];
    let mut truth = Vec::new();
    let mut arrived = 0usize;

    for day in 0..cfg.horizon {
        for (u, v, t1, delay, x) in std::mem::take(&mut due[day as usize]) {
            sim.link(v, u, day)?;
            let target = sim.graph.node(&user_name(v))?;
            history.record(target, day, delay as f64);
            truth.push(PlantedDelay {
                u: user_name(u),
                v: user_name(v),
                t1,
                t2: day,
                planted_delay: delay,
                offset_v: offsets[v],
                x,
            });
        }

        let mut initiated: Vec<(usize, usize)> = Vec::new();
        let existing = arrived;
        if existing >= 2 && cfg.activity > 0.0 {
            let count = Poisson::new(cfg.activity * existing as f64)
                .map_err(|e| Error::Config(e.to_string()))?
                .sample(&mut sim.rng) as usize;
            for _ in 0..count {
                let u = sim.rng.random_range(0..existing);
                let v = sim.pick_target(existing, cfg.attachment);
                if sim.follow(u, v, day)? {
                    initiated.push((u, v));
                }
            }
        }
        let target_arrivals = schedule[day as usize];
        while arrived < target_arrivals {
            let u = arrived;
            arrived += 1;
            sim.attachment_pool.push(u);
            if u == 0 {
                continue;
            }
            for _ in 0..cfg.initial_follows {
                let v = sim.pick_target(u, cfg.attachment);
                if sim.follow(u, v, day)? {
                    initiated.push((u, v));
                }
            }
        }

        for (u, v) in initiated {
            if sim.rng.random::<f64>() >= cfg.reciprocation {
                continue;
            }
            let eps = noise.sample(&mut sim.rng);
            let q = RelationQuery {
                u: sim.graph.node(&user_name(u))?,
                v: sim.graph.node(&user_name(v))?,
                t1: day,
            };
            let x = extract_features(&sim.graph, &history, q, cfg.k, cfg.fill, cfg.anchor)?.0.to_vec();
            let delay = planted_delay(dot(&x, &cfg.w_star) + offsets[v] + eps);
            let t2 = day as u64 + delay as u64;
            if t2 <= cfg.censor_day as u64 && t2 < cfg.horizon as u64 {
                due[t2 as usize].push((u, v, day, delay, x));
            }
        }
    }
    Ok(SynthOutput { edges: sim.edges, truth })
}

/// Settings of the densification generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawConfig {
    /// Planted exponent `a` of `e(t) = c n(t)^a`.
    pub exponent: f64,
    pub coefficient: f64,
    pub initial_nodes: usize,
    pub final_nodes: usize,
    pub days: Day,
    pub seed: u64,
}

impl Default for PowerLawConfig {
    fn default() -> Self {
        Self {
            exponent: 1.3367,
            coefficient: 2.0,
            initial_nodes: 20,
            final_nodes: 3000,
            days: 60,
            seed: 0,
        }
    }
}

/// Edge stream whose daily snapshots follow `e(t) = c n(t)^a`.
///
/// Nodes grow geometrically from `initial_nodes` to `final_nodes`; every new
/// node follows someone on its arrival day and the remaining daily edge
/// budget is spent on uniformly random new pairs.
pub fn plant_power_law_growth(cfg: &PowerLawConfig) -> Result<Vec<TemporalEdge>> {
    let a = cfg.exponent;
    if !(1.0..=2.0).contains(&a) {
        return Err(Error::Config(format!("exponent must lie in [1, 2], got {a}")));
    }
    if cfg.initial_nodes < 2 || cfg.final_nodes < cfg.initial_nodes || cfg.days < 2 {
        return Err(Error::Config("need 2 <= initial_nodes <= final_nodes and days >= 2".into()));
    }
    if !(cfg.coefficient * a >= 1.0) {
        return Err(Error::Config("coefficient * exponent must be >= 1".into()));
    }
    let max_edges = cfg.final_nodes as f64 * (cfg.final_nodes as f64 - 1.0);
    if cfg.coefficient * (cfg.final_nodes as f64).powf(a) > 0.5 * max_edges {
        return Err(Error::Config("edge target too dense for the node count".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ratio = cfg.final_nodes as f64 / cfg.initial_nodes as f64;
    let mut edges = Vec::new();
    let mut present: HashSet<(usize, usize)> = HashSet::new();
    let mut n = 0usize;
    for day in 0..cfg.days {
        let target_n = (cfg.initial_nodes as f64 * ratio.powf(day as f64 / (cfg.days - 1) as f64)).round() as usize;
        while n < target_n {
            let u = n;
            n += 1;
            let v = if u == 0 { 1 } else { rng.random_range(0..u) };
            present.insert((u, v));
            edges.push(TemporalEdge::new(user_name(u), user_name(v), day));
        }
        let target_e = (cfg.coefficient * (n as f64).powf(a)).round() as usize;
        while present.len() < target_e {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v && present.insert((u, v)) {
                edges.push(TemporalEdge::new(user_name(u), user_name(v), day));
            }
        }
    }
    Ok(edges)
}
