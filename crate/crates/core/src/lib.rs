//! Reciprocity-delay analysis and prediction on timestamped follow graphs.
//!
//! The crate covers the whole pipeline: ingesting a day-granular follow
//! stream ([`temporal_graph`]), measuring reciprocity and delay patterns
//! ([`analytics`]), turning reciprocal relations into feature rows
//! ([`features`]), fitting the network-lasso delay model ([`dprr`]) and its
//! comparison predictors ([`baselines`]), benchmarking them ([`eval`]) and
//! generating seeded synthetic networks with planted delays ([`synth`]).

pub mod analytics;
pub mod baselines;
pub mod calendar;
pub mod dprr;
pub mod error;
pub mod eval;
pub mod features;
pub mod linalg;
pub mod persist;
pub mod synth;
pub mod table;
pub mod temporal_graph;

pub use error::{Error, Result};
pub use temporal_graph::{Day, DynamicDigraph, NodeId, TemporalEdge};
