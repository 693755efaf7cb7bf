//! Delay distribution and its temporal and structural breakdowns.

use reciprocity_delay::analytics::delay::bucket_mean_table;
use reciprocity_delay::analytics::structure::{common_neighbor_table, degree_bucket_table};
use reciprocity_delay::analytics::{
    avg_delay_by_common_neighbors, avg_delay_by_degree_bucket, avg_delay_by_join_time, delay_histogram,
    extract_reciprocal_relations, weekly_patterns, within_cutoff, DegreeKind, DegreeThresholds, NeighborKind,
    Role, DEFAULT_DELAY_CUTOFF,
};
use reciprocity_delay::calendar::DEFAULT_ANCHOR;
use reciprocity_delay::synth::{generate, SynthConfig};
use reciprocity_delay::{DynamicDigraph, Result};

fn main() -> Result<()> {
    let g = DynamicDigraph::from_edges(&generate(&SynthConfig { seed: 3, ..Default::default() })?.edges)?;
    let all = extract_reciprocal_relations(&g);
    let relations = within_cutoff(&all, DEFAULT_DELAY_CUTOFF);

    let hist = delay_histogram(&all, DEFAULT_DELAY_CUTOFF);
    println!("{} relations, {} beyond the cutoff, log-log slope {:?}", hist.total, hist.overflow, hist.log_log_slope());

    println!("\nby target join time");
    print!("{}", bucket_mean_table(&avg_delay_by_join_time(&relations, &g, Role::Target, 30)).to_csv());

    println!("\nby weekday");
    print!("{}", weekly_patterns(&relations, DEFAULT_ANCHOR).to_table().to_csv());

    let th = DegreeThresholds { low: 10, high: 100 };
    println!("\nby target indegree (low < 10, high > 100)");
    print!("{}", degree_bucket_table(&avg_delay_by_degree_bucket(&relations, &g, DegreeKind::In, Role::Target, th)).to_csv());

    println!("\nby common followers");
    print!("{}", common_neighbor_table(&avg_delay_by_common_neighbors(&relations, &g, NeighborKind::Followers)).to_csv());
    Ok(())
}
