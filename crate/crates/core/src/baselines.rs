//! Comparison predictors: previous-delay heuristics, ridge, lasso, and the
//! localized-only variant of the network-lasso model.

use serde::{Deserialize, Serialize};

use crate::dprr::{self, DprrConfig, DprrModel, SameTargetGroups};
use crate::error::{Error, Result};
use crate::features::{Dataset, Standardizer};
use crate::linalg::{dot, ridge_solve};

/// Last completed delay, or `fallback` without history.
pub fn predict_p1(history: &[f64], fallback: f64) -> f64 {
    history.last().copied().unwrap_or(fallback)
}

/// Mean of the last `min(k, len)` delays, or `fallback` without history.
pub fn predict_pk(history: &[f64], k: usize, fallback: f64) -> f64 {
    if history.is_empty() {
        return fallback;
    }
    let k = k.max(1).min(history.len());
    history[history.len() - k..].iter().sum::<f64>() / k as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearKind {
    Ridge,
    Lasso,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub kind: LinearKind,
    pub w: Vec<f64>,
    /// `alpha` for ridge, `lambda` for lasso.
    pub regularization: f64,
    pub standardizer: Option<Standardizer>,
    pub fill_value: f64,
}

impl LinearModel {
    pub fn predict_raw(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.w.len() {
            return Err(Error::DimensionMismatch {
                expected: self.w.len(),
                actual: x.len(),
            });
        }
        Ok(dot(x, &self.w))
    }

    /// Clamped at zero, like every delay estimate.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        self.predict_raw(x).map(|p| p.max(0.0))
    }

    pub fn predict_dataset(&self, ds: &Dataset) -> Result<Vec<f64>> {
        ds.x.iter().map(|x| self.predict(x)).collect()
    }
}

/// Exact ridge solution of `min ||X w - y||^2 + alpha ||w||^2`.
pub fn fit_ridge(ds: &Dataset, alpha: f64) -> Result<LinearModel> {
    if ds.is_empty() {
        return Err(Error::Empty("training rows"));
    }
    if !(alpha >= 0.0) {
        return Err(Error::Config("alpha must be >= 0".into()));
    }
    Ok(LinearModel {
        kind: LinearKind::Ridge,
        w: ridge_solve(&ds.x, ds.targets()?, alpha),
        regularization: alpha,
        standardizer: ds.standardizer.clone(),
        fill_value: ds.fill_value,
    })
}

/// Relative duality gap at which coordinate descent stops.
pub const LASSO_GAP_TOL: f64 = 1e-6;
/// Largest optimality violation `|2 x_j^T r - lambda sign(w_j)|` tolerated at
/// the stop, relative to `max(1, lambda)`.
pub const LASSO_KKT_TOL: f64 = 1e-8;
const LASSO_MAX_SWEEPS: usize = 100_000;

fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

fn kkt_violation(w: &[f64], corr: &[f64], lambda: f64) -> f64 {
    w.iter()
        .zip(corr)
        .map(|(&wj, &c)| {
            if wj == 0.0 {
                (2.0 * c).abs() - lambda
            } else {
                (2.0 * c - lambda * wj.signum()).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// Primal objective and duality gap of `||X w - y||^2 + lambda ||w||_1`,
/// from the residual `r = y - X w` and the correlations `X^T r`.
fn lasso_gap(r: &[f64], y: &[f64], w: &[f64], corr: &[f64], lambda: f64) -> (f64, f64) {
    let rr = dot(r, r);
    let primal = rr + lambda * w.iter().map(|v| v.abs()).sum::<f64>();
    let corr_max = corr.iter().fold(0.0f64, |m, c| m.max((2.0 * c).abs()));
    let s = if corr_max > lambda { lambda / corr_max } else { 1.0 };
    // dual point nu = -2 s r
    let dual = -s * s * rr + 2.0 * s * dot(r, y);
    (primal, primal - dual)
}

/// Cyclic coordinate descent on `||X w - y||^2 + lambda ||w||_1`.
///
/// Sweeps run on the Gram matrix; the residual is recomputed exactly from
/// the rows whenever the duality gap is checked.
pub fn fit_lasso(ds: &Dataset, lambda: f64) -> Result<LinearModel> {
    if ds.is_empty() {
        return Err(Error::Empty("training rows"));
    }
    if !(lambda >= 0.0) {
        return Err(Error::Config("lambda must be >= 0".into()));
    }
    let x = &ds.x;
    let y = ds.targets()?;
    let d = ds.dim();
    let mut gram = vec![vec![0.0; d]; d];
    let mut xty = vec![0.0; d];
    for (row, yi) in x.iter().zip(y) {
        for j in 0..d {
            xty[j] += row[j] * yi;
            for k in j..d {
                gram[j][k] += row[j] * row[k];
            }
        }
    }
    for j in 0..d {
        for k in 0..j {
            gram[j][k] = gram[k][j];
        }
    }
    let mut w = vec![0.0; d];
    // X^T r maintained incrementally
    let mut corr = xty.clone();
    let mut r = vec![0.0; y.len()];
    for sweep in 0..LASSO_MAX_SWEEPS {
        for j in 0..d {
            if gram[j][j] == 0.0 {
                continue;
            }
            let rho = corr[j] + gram[j][j] * w[j];
            let next = soft_threshold(rho, lambda / 2.0) / gram[j][j];
            let delta = next - w[j];
            if delta != 0.0 {
                for k in 0..d {
                    corr[k] -= gram[k][j] * delta;
                }
                w[j] = next;
            }
        }
        if sweep % 10 == 9 || sweep + 1 == LASSO_MAX_SWEEPS {
            for ((ri, row), yi) in r.iter_mut().zip(x).zip(y) {
                *ri = yi - dot(row, &w);
            }
            for (j, c) in corr.iter_mut().enumerate() {
                *c = x.iter().zip(&r).map(|(row, ri)| row[j] * ri).sum();
            }
            let (primal, gap) = lasso_gap(&r, y, &w, &corr, lambda);
            let scale = lambda.max(1.0);
            if gap <= LASSO_GAP_TOL * primal.max(f64::MIN_POSITIVE) && kkt_violation(&w, &corr, lambda) <= LASSO_KKT_TOL * scale {
                break;
            }
        }
    }
    Ok(LinearModel {
        kind: LinearKind::Lasso,
        w,
        regularization: lambda,
        standardizer: ds.standardizer.clone(),
        fill_value: ds.fill_value,
    })
}

/// Localized-only model: the network-lasso fit without the global parameter.
pub fn fit_pd(ds: &Dataset, groups: &SameTargetGroups, cfg: &DprrConfig) -> Result<DprrModel> {
    dprr::fit_personal_only(ds, groups, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn previous_delay_heuristics() {
        assert_eq!(predict_p1(&[2.0, 4.0, 6.0], 3.2), 6.0);
        assert_eq!(predict_p1(&[], 3.2), 3.2);
        assert_eq!(predict_pk(&[2.0, 4.0, 6.0], 2, 0.0), 5.0);
        assert_eq!(predict_pk(&[7.0], 5, 0.0), 7.0);
        assert_eq!(predict_pk(&[], 3, 1.5), 1.5);
    }

    #[test]
    fn ridge_hand_value_and_interpolation() {
        let ds = Dataset::from_parts(vec![vec![1.0]], vec![2.0], None).unwrap();
        assert!((fit_ridge(&ds, 1.0).unwrap().w[0] - 1.0).abs() < 1e-12);
        let ds = Dataset::from_parts(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![5.0, 10.0], None).unwrap();
        let w = fit_ridge(&ds, 0.0).unwrap().w;
        assert!((w[0] - 1.0).abs() < 1e-10 && (w[1] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn lasso_zero_above_threshold() {
        let x = vec![vec![1.0, 0.5], vec![-0.3, 2.0], vec![0.7, -1.0]];
        let y = vec![1.0, 2.0, -0.5];
        let ds = Dataset::from_parts(x.clone(), y.clone(), None).unwrap();
        let mut inf: f64 = 0.0;
        for j in 0..2 {
            inf = inf.max(x.iter().zip(&y).map(|(r, yi)| r[j] * yi).sum::<f64>().abs());
        }
        assert!(fit_lasso(&ds, 2.0 * inf).unwrap().w.iter().all(|&v| v == 0.0));
        assert!(fit_lasso(&ds, 2.0 * inf * 0.9).unwrap().w.iter().any(|&v| v != 0.0));
    }

    #[test]
    fn negative_predictions_clamp() {
        let m = LinearModel {
            kind: LinearKind::Ridge,
            w: vec![-1.0],
            regularization: 0.0,
            standardizer: None,
            fill_value: 0.0,
        };
        assert_eq!(m.predict(&[0.3]).unwrap(), 0.0);
        assert_eq!(m.predict_raw(&[0.3]).unwrap(), -0.3);
        assert!(m.predict(&[0.3, 1.0]).is_err());
    }
}
