//! Plant a densification law and recover its exponent.

use reciprocity_delay::analytics::densification_fit;
use reciprocity_delay::synth::{plant_power_law_growth, PowerLawConfig};
use reciprocity_delay::{DynamicDigraph, Result};

fn main() -> Result<()> {
    for exponent in [1.0, 1.3367, 1.5] {
        let cfg = PowerLawConfig { exponent, ..Default::default() };
        let g = DynamicDigraph::from_edges(&plant_power_law_growth(&cfg)?)?;
        let fit = densification_fit(&g, 0..=cfg.days - 1)?;
        println!(
            "planted a={exponent:.4} fitted a={:.4} (c={:.3}, {} days, rms {:.2e})",
            fit.slope,
            fit.intercept.exp(),
            fit.points,
            fit.residual_rms
        );
    }
    Ok(())
}
