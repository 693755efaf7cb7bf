//! Repeated train/test comparison of all delay predictors.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{fit_lasso, fit_pd, fit_ridge, predict_p1, predict_pk};
use crate::dprr::{self, DprrConfig};
use crate::error::{Error, Result};
use crate::eval::metrics::{mae, rmse};
use crate::eval::split::{derive_seed, kfold, sample_split_indices};
use crate::eval::ttest::{paired_t_test, TTest};
use crate::features::Dataset;
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    P1,
    Pk,
    Rg,
    Ls,
    Pd,
    Dprr,
}

impl Method {
    pub const ALL: [Method; 6] = [Method::P1, Method::Pk, Method::Rg, Method::Ls, Method::Pd, Method::Dprr];

    pub fn name(self) -> &'static str {
        match self {
            Method::P1 => "p1",
            Method::Pk => "pk",
            Method::Rg => "rg",
            Method::Ls => "ls",
            Method::Pd => "pd",
            Method::Dprr => "dprr",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown method `{s}`")))
    }
}

/// Logarithmic grid `1e-3 .. 1e3`, one point per decade.
pub const REGULARIZATION_GRID: [f64; 7] = [1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3];

/// Grid value with the lowest mean validation MAE over `folds` folds.
/// Ties go to the smallest value.
pub fn cross_validate<F>(ds: &Dataset, grid: &[f64], folds: usize, seed: u64, fit_predict: F) -> Result<f64>
where
    F: Fn(&Dataset, &Dataset, f64) -> Result<Vec<f64>>,
{
    if grid.is_empty() {
        return Err(Error::Config("empty parameter grid".into()));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.len() == 1 {
        return Ok(sorted[0]);
    }
    let parts = kfold(ds.len(), folds, seed)?;
    let y = ds.targets()?;
    let mut best = (f64::INFINITY, sorted[0]);
    for &param in &sorted {
        let mut total = 0.0;
        for (f, val_idx) in parts.iter().enumerate() {
            let train_idx: Vec<usize> = parts
                .iter()
                .enumerate()
                .filter(|&(g, _)| g != f)
                .flat_map(|(_, p)| p.iter().copied())
                .collect();
            let pred = fit_predict(&ds.subset(&train_idx), &ds.subset(val_idx), param)?;
            let actual: Vec<f64> = val_idx.iter().map(|&i| y[i]).collect();
            total += mae(&actual, &pred)?;
        }
        let score = total / parts.len() as f64;
        if score < best.0 {
            best = (score, param);
        }
    }
    Ok(best.1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub methods: Vec<Method>,
    pub train_size: usize,
    /// Test sizes as percentages of the train size.
    pub ratios: Vec<u32>,
    pub trials: usize,
    pub seed: u64,
    pub dprr: DprrConfig,
    pub cv_folds: usize,
    pub ridge_grid: Vec<f64>,
    pub lasso_grid: Vec<f64>,
    /// `k` range searched by the previous-k predictor.
    pub pk_max: usize,
    pub standardize: bool,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            train_size: 2000,
            ratios: vec![50, 70, 90],
            trials: 10,
            seed: 0,
            dprr: DprrConfig::default(),
            cv_folds: 5,
            ridge_grid: REGULARIZATION_GRID.to_vec(),
            lasso_grid: REGULARIZATION_GRID.to_vec(),
            pk_max: 8,
            standardize: true,
        }
    }
}

/// Scores of one method on one split.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub ratio: u32,
    pub trial: usize,
    pub method: Method,
    pub mae: f64,
    pub rmse: f64,
    /// Selected hyper-parameter, when the method has one.
    pub parameter: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub ratio: u32,
    pub method: Method,
    pub mean_mae: f64,
    pub mean_rmse: f64,
    pub trials_ok: usize,
    /// Paired tests against the reference method on per-trial MAE and RMSE.
    pub vs_reference_mae: Option<TTest>,
    pub vs_reference_rmse: Option<TTest>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub config: BenchmarkConfig,
    pub trials: Vec<TrialResult>,
    pub summary: Vec<MethodSummary>,
}

impl EvalReport {
    pub fn get(&self, ratio: u32, method: Method) -> Option<&MethodSummary> {
        self.summary.iter().find(|s| s.ratio == ratio && s.method == method)
    }

    pub fn trials_table(&self) -> Table {
        let mut t = Table::new(&["ratio", "trial", "method", "mae", "rmse", "parameter", "status"]);
        for r in &self.trials {
            t.push(vec![
                r.ratio.into(),
                r.trial.into(),
                r.method.name().into(),
                r.mae.into(),
                r.rmse.into(),
                r.parameter.into(),
                r.error.clone().map_or(Cell::from("ok"), |e| Cell::from(format!("failed: {}", e.replace(',', ";")))),
            ]);
        }
        t
    }

    pub fn summary_table(&self) -> Table {
        let mut t = Table::new(&[
            "ratio", "method", "mean_mae", "mean_rmse", "trials_ok", "t_mae", "p_mae", "t_rmse", "p_rmse",
        ]);
        for s in &self.summary {
            t.push(vec![
                s.ratio.into(),
                s.method.name().into(),
                s.mean_mae.into(),
                s.mean_rmse.into(),
                s.trials_ok.into(),
                s.vs_reference_mae.map(|r| r.t).into(),
                s.vs_reference_mae.map(|r| r.p).into(),
                s.vs_reference_rmse.map(|r| r.t).into(),
                s.vs_reference_rmse.map(|r| r.p).into(),
            ]);
        }
        t
    }
}

/// Train and test subsets of a raw pool, cold-start filled with the training
/// mean delay and standardized with training statistics.
pub fn prepare_split(pool: &Dataset, train_idx: &[usize], test_idx: &[usize], standardize: bool) -> Result<(Dataset, Dataset)> {
    if pool.standardizer.is_some() {
        return Err(Error::Dataset("benchmark pool must hold raw features".into()));
    }
    let mut train = pool.subset(train_idx);
    let mut test = pool.subset(test_idx);
    let y = train.targets()?;
    let fill = y.iter().sum::<f64>() / y.len() as f64;
    train.apply_cold_start_fill(fill);
    test.apply_cold_start_fill(fill);
    if standardize {
        train.standardize()?;
        let s = train.standardizer.clone().expect("just standardized");
        test.apply_standardizer(&s)?;
    }
    Ok((train, test))
}

/// Predictions of `method` for `test` after fitting on `train`, plus the
/// selected hyper-parameter.
pub fn fit_and_predict(
    method: Method,
    train: &Dataset,
    test: &Dataset,
    cfg: &BenchmarkConfig,
    seed: u64,
) -> Result<(Vec<f64>, Option<f64>)> {
    let fill = train.fill_value;
    match method {
        Method::P1 => Ok((test.histories.iter().map(|h| predict_p1(h, fill)).collect(), None)),
        Method::Pk => {
            let y = train.targets()?;
            let mut best = (f64::INFINITY, 1usize);
            for k in 1..=cfg.pk_max.max(1) {
                let pred: Vec<f64> = train.histories.iter().map(|h| predict_pk(h, k, fill)).collect();
                let score = mae(y, &pred)?;
                if score < best.0 {
                    best = (score, k);
                }
            }
            let k = best.1;
            Ok((
                test.histories.iter().map(|h| predict_pk(h, k, fill)).collect(),
                Some(k as f64),
            ))
        }
        Method::Rg => {
            let alpha = cross_validate(train, &cfg.ridge_grid, cfg.cv_folds, seed, |tr, va, a| {
                fit_ridge(tr, a)?.predict_dataset(va)
            })?;
            Ok((fit_ridge(train, alpha)?.predict_dataset(test)?, Some(alpha)))
        }
        Method::Ls => {
            let lambda = cross_validate(train, &cfg.lasso_grid, cfg.cv_folds, seed, |tr, va, l| {
                fit_lasso(tr, l)?.predict_dataset(va)
            })?;
            Ok((fit_lasso(train, lambda)?.predict_dataset(test)?, Some(lambda)))
        }
        Method::Pd => {
            let groups = dprr::groups_for(train, &cfg.dprr);
            Ok((fit_pd(train, &groups, &cfg.dprr)?.predict_dataset(test)?, Some(cfg.dprr.beta)))
        }
        Method::Dprr => {
            let groups = dprr::groups_for(train, &cfg.dprr);
            Ok((dprr::fit(train, &groups, &cfg.dprr)?.predict_dataset(test)?, Some(cfg.dprr.beta)))
        }
    }
}

fn run_trial(pool: &Dataset, cfg: &BenchmarkConfig, ratio: u32, trial: usize, seed: u64) -> Result<Vec<TrialResult>> {
    let (tr, te) = sample_split_indices(pool.len(), cfg.train_size, ratio, seed)?;
    let (train, test) = prepare_split(pool, &tr, &te, cfg.standardize)?;
    let actual = test.targets()?;
    Ok(cfg
        .methods
        .iter()
        .map(|&method| {
            let scored = fit_and_predict(method, &train, &test, cfg, derive_seed(seed, 1))
                .and_then(|(pred, param)| Ok((mae(actual, &pred)?, rmse(actual, &pred)?, param)));
            match scored {
                Ok((mae, rmse, parameter)) => TrialResult {
                    ratio,
                    trial,
                    method,
                    mae,
                    rmse,
                    parameter,
                    error: None,
                },
                Err(e) => TrialResult {
                    ratio,
                    trial,
                    method,
                    mae: f64::NAN,
                    rmse: f64::NAN,
                    parameter: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect())
}

/// Runs `trials` independent splits per ratio; every method sees the same
/// rows in a trial. Failed fits are recorded and left out of the means.
///
/// `pool` must hold raw (unstandardized) features.
pub fn run_benchmark(pool: &Dataset, cfg: &BenchmarkConfig) -> Result<EvalReport> {
    if cfg.methods.is_empty() {
        return Err(Error::Config("no methods selected".into()));
    }
    if cfg.trials == 0 || cfg.ratios.is_empty() {
        return Err(Error::Config("need at least one ratio and one trial".into()));
    }
    let jobs: Vec<(usize, u32, usize)> = cfg
        .ratios
        .iter()
        .enumerate()
        .flat_map(|(ri, &r)| (0..cfg.trials).map(move |t| (ri, r, t)))
        .collect();
    let results: Vec<Vec<TrialResult>> = jobs
        .par_iter()
        .map(|&(ri, ratio, trial)| {
            let seed = derive_seed(cfg.seed, (ri * cfg.trials + trial) as u64);
            run_trial(pool, cfg, ratio, trial, seed)
        })
        .collect::<Result<_>>()?;
    let trials: Vec<TrialResult> = results.into_iter().flatten().collect();

    let reference = if cfg.methods.contains(&Method::Dprr) { Some(Method::Dprr) } else { None };
    let mut summary = Vec::new();
    for &ratio in &cfg.ratios {
        let rows = |m: Method| -> Vec<&TrialResult> {
            trials.iter().filter(|r| r.ratio == ratio && r.method == m).collect()
        };
        for &method in &cfg.methods {
            let ok: Vec<&TrialResult> = rows(method).into_iter().filter(|r| r.error.is_none()).collect();
            let mean = |f: fn(&TrialResult) -> f64| {
                if ok.is_empty() {
                    f64::NAN
                } else {
                    ok.iter().map(|r| f(r)).sum::<f64>() / ok.len() as f64
                }
            };
            let (vs_mae, vs_rmse) = match reference {
                Some(reference) if reference != method => {
                    // pair only trials where both fits succeeded
                    let base = rows(reference);
                    let pairs: Vec<(&TrialResult, &TrialResult)> = base
                        .iter()
                        .zip(rows(method))
                        .filter(|(a, b)| a.error.is_none() && b.error.is_none())
                        .map(|(a, b)| (*a, b))
                        .collect();
                    let test = |f: fn(&TrialResult) -> f64| {
                        let a: Vec<f64> = pairs.iter().map(|(r, _)| f(r)).collect();
                        let b: Vec<f64> = pairs.iter().map(|(_, m)| f(m)).collect();
                        paired_t_test(&a, &b).ok()
                    };
                    (test(|r| r.mae), test(|r| r.rmse))
                }
                _ => (None, None),
            };
            summary.push(MethodSummary {
                ratio,
                method,
                mean_mae: mean(|r| r.mae),
                mean_rmse: mean(|r| r.rmse),
                trials_ok: ok.len(),
                vs_reference_mae: vs_mae,
                vs_reference_rmse: vs_rmse,
            });
        }
    }
    Ok(EvalReport {
        config: cfg.clone(),
        trials,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("xx".parse::<Method>().is_err());
    }

    #[test]
    fn single_grid_point_is_returned() {
        let ds = Dataset::from_parts(vec![vec![1.0]; 3], vec![1.0; 3], None).unwrap();
        let v = cross_validate(&ds, &[0.7], 5, 0, |_, _, _| unreachable!()).unwrap();
        assert_eq!(v, 0.7);
    }

    #[test]
    fn ties_pick_smallest() {
        let ds = Dataset::from_parts(vec![vec![1.0]; 10], vec![1.0; 10], None).unwrap();
        let v = cross_validate(&ds, &[10.0, 1.0, 0.1], 5, 0, |_, va, _| Ok(vec![1.0; va.len()])).unwrap();
        assert_eq!(v, 0.1);
    }
}
