//! Measurements over reciprocal relations: extraction, network evolution,
//! delay distribution, and temporal/structural delay patterns.

pub mod delay;
pub mod reciprocity;
pub mod structure;

pub use delay::{
    avg_delay_by_join_time, delay_histogram, delay_sequences, sequential_pk_error, weekly_patterns,
    within_cutoff, BucketMean, DelayHistogram, PkError, Role, WeeklyPatterns, DEFAULT_DELAY_CUTOFF,
};
pub use reciprocity::{
    densification_fit, extract_reciprocal_relations, growth_series, reciprocity_rate_series,
    DensificationFit, GrowthRow, ReciprocalRelation,
};
pub use structure::{
    avg_delay_by_common_neighbors, avg_delay_by_degree_bucket, DegreeBucket, DegreeKind,
    DegreeThresholds, GroupMean, NeighborKind,
};
