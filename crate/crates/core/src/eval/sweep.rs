//! Sensitivity of the network-lasso model to the coupling weight.

use crate::dprr::{self, DprrConfig};
use crate::error::{Error, Result};
use crate::eval::benchmark::prepare_split;
use crate::eval::metrics::{mae, rmse};
use crate::eval::split::sample_split_indices;
use crate::features::Dataset;
use crate::table::Table;

pub const DEFAULT_BETA_GRID: [f64; 9] = [0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 10.0, 100.0, 1000.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub beta: f64,
    pub mae: f64,
    pub rmse: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// One fit per `beta` on `train`, scored on `test`.
pub fn beta_sweep(train: &Dataset, test: &Dataset, cfg: &DprrConfig, beta_grid: &[f64]) -> Result<Vec<SweepRow>> {
    if beta_grid.is_empty() {
        return Err(Error::Config("empty beta grid".into()));
    }
    let groups = dprr::groups_for(train, cfg);
    let actual = test.targets()?;
    beta_grid
        .iter()
        .map(|&beta| {
            let c = DprrConfig { beta, ..*cfg };
            let model = dprr::fit(train, &groups, &c)?;
            let pred = model.predict_dataset(test)?;
            Ok(SweepRow {
                beta,
                mae: mae(actual, &pred)?,
                rmse: rmse(actual, &pred)?,
                iterations: model.diagnostics.iterations,
                converged: model.diagnostics.converged,
            })
        })
        .collect()
}

/// Draws one seeded split from a raw pool and sweeps it.
pub fn beta_sweep_split(
    pool: &Dataset,
    train_size: usize,
    test_ratio_percent: u32,
    seed: u64,
    cfg: &DprrConfig,
    beta_grid: &[f64],
) -> Result<Vec<SweepRow>> {
    let (tr, te) = sample_split_indices(pool.len(), train_size, test_ratio_percent, seed)?;
    let (train, test) = prepare_split(pool, &tr, &te, true)?;
    beta_sweep(&train, &test, cfg, beta_grid)
}

pub fn sweep_table(rows: &[SweepRow]) -> Table {
    let mut t = Table::new(&["beta", "mae", "rmse", "iterations", "converged"]);
    for r in rows {
        t.push(vec![
            r.beta.into(),
            r.mae.into(),
            r.rmse.into(),
            r.iterations.into(),
            (if r.converged { "true" } else { "false" }).into(),
        ]);
    }
    t
}
