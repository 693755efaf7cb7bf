//! Delay regression with a shared global parameter and per-relation localized
//! parameters coupled by a network-lasso penalty over same-target relations.
//!
//! The fitted objective is
//!
//! ```text
//! sum_i (x_i . (w + w~_i) - y_i)^2 + alpha ||w||^2 + beta sum_(i,j) A_ij ||w~_i - w~_j||
//! ```
//!
//! where `A_ij = 1` when rows `i != j` share a target user and the last sum
//! runs over ordered pairs. It is minimized by ADMM ([`admm`]). A new relation
//! is scored with `x . (w + b)`, `b` being the Weber point of the localized
//! parameters of its target's training relations, or with `x . w` for an
//! unseen target.

pub mod admm;
pub mod groups;
pub mod weber;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{Dataset, Standardizer};
use crate::linalg::{dist, dot, ridge_solve};

pub use admm::{AdmmState, Residuals};
pub use groups::{build_same_target_groups, SameTargetGroups, DEFAULT_GROUP_CAP};
pub use weber::{weber_cost, weber_point};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DprrConfig {
    /// Ridge weight on the global parameter.
    pub alpha: f64,
    /// Network-lasso weight.
    pub beta: f64,
    /// ADMM penalty.
    pub rho: f64,
    pub max_iterations: usize,
    /// Relative primal tolerance, scaled by `sqrt(pairs * d)`.
    pub eps_primal: f64,
    /// Relative dual tolerance, scaled by `sqrt(pairs * d)`.
    pub eps_dual: f64,
    pub group_cap: usize,
    pub seed: u64,
    /// Start the global parameter at the ridge solution instead of zero.
    pub warm_start: bool,
}

impl Default for DprrConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.5,
            rho: 1.0,
            max_iterations: 500,
            eps_primal: 1e-4,
            eps_dual: 1e-4,
            group_cap: DEFAULT_GROUP_CAP,
            seed: 0,
            warm_start: true,
        }
    }
}

impl DprrConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_owned()));
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad("alpha must be finite and >= 0");
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad("beta must be finite and >= 0");
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return bad("rho must be > 0");
        }
        if !(self.eps_primal > 0.0 && self.eps_dual > 0.0) {
            return bad("tolerances must be > 0");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be >= 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Global plus localized parameters.
    Dprr,
    /// Localized parameters only (global parameter pinned at zero).
    PersonalOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    /// Objective after the first iteration.
    pub initial_objective: f64,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DprrModel {
    pub kind: ModelKind,
    pub d: usize,
    pub w: Vec<f64>,
    /// Localized parameter of every training row (not persisted).
    #[serde(skip)]
    pub local: Vec<Vec<f64>>,
    /// Weber point of each training target's localized parameters.
    pub target_points: BTreeMap<String, Vec<f64>>,
    pub standardizer: Option<Standardizer>,
    pub fill_value: f64,
    pub config: DprrConfig,
    pub diagnostics: FitDiagnostics,
}

impl DprrModel {
    /// Unclamped score of a standardized feature vector.
    pub fn predict_raw(&self, x: &[f64], target: &str) -> Result<f64> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                actual: x.len(),
            });
        }
        let global = dot(x, &self.w);
        Ok(match self.target_points.get(target) {
            Some(b) => global + dot(x, b),
            None => global,
        })
    }

    /// Delay estimate in days, clamped at zero.
    pub fn predict(&self, x: &[f64], target: &str) -> Result<f64> {
        self.predict_raw(x, target).map(|p| p.max(0.0))
    }

    /// Predictions for every row of `ds`, keyed by each row's target.
    pub fn predict_dataset(&self, ds: &Dataset) -> Result<Vec<f64>> {
        ds.x.iter()
            .zip(&ds.meta)
            .map(|(x, m)| self.predict(x, &m.v))
            .collect()
    }
}

/// Objective value at `(w, local)`; `local[i]` is row `i`'s localized parameter.
pub fn objective(
    ds: &Dataset,
    groups: &SameTargetGroups,
    w: &[f64],
    local: &[Vec<f64>],
    alpha: f64,
    beta: f64,
) -> Result<f64> {
    let y = ds.targets()?;
    let d = ds.dim();
    if w.len() != d {
        return Err(Error::DimensionMismatch { expected: d, actual: w.len() });
    }
    if local.len() != ds.len() {
        return Err(Error::LengthMismatch { left: ds.len(), right: local.len() });
    }
    if let Some(bad) = local.iter().find(|l| l.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, actual: bad.len() });
    }
    let mut loss = 0.0;
    for ((x, l), yi) in ds.x.iter().zip(local).zip(y) {
        let r = dot(x, w) + dot(x, l) - yi;
        loss += r * r;
    }
    let coupling: f64 = groups
        .pairs
        .iter()
        .map(|&(i, j)| dist(&local[i], &local[j]))
        .sum();
    Ok(loss + alpha * dot(w, w) + beta * coupling)
}

fn check_inputs(ds: &Dataset, groups: &SameTargetGroups) -> Result<()> {
    if ds.is_empty() {
        return Err(Error::Empty("training rows"));
    }
    if ds.dim() == 0 {
        return Err(Error::Dataset("feature dimension is zero".into()));
    }
    if groups.n_rows() != ds.len() {
        return Err(Error::LengthMismatch {
            left: ds.len(),
            right: groups.n_rows(),
        });
    }
    ds.targets().map(|_| ())
}

/// Localized parameters recovered from the iterates: the mean of a row's
/// `z` copies, or the exact residual fit for rows without partners.
pub fn recover_local(state: &AdmmState, ds: &Dataset, groups: &SameTargetGroups) -> Result<Vec<Vec<f64>>> {
    let y = ds.targets()?;
    let d = state.d;
    Ok((0..ds.len())
        .map(|i| {
            let pairs = &groups.row_pairs[i];
            if pairs.is_empty() {
                return admm::isolated_local(&ds.x[i], y[i], &state.w);
            }
            let mut m = vec![0.0; d];
            for &p in pairs {
                for k in 0..d {
                    m[k] += state.z[p * d + k];
                }
            }
            m.iter_mut().for_each(|v| *v /= pairs.len() as f64);
            m
        })
        .collect())
}

fn fit_impl(ds: &Dataset, groups: &SameTargetGroups, cfg: &DprrConfig, kind: ModelKind) -> Result<DprrModel> {
    cfg.validate()?;
    check_inputs(ds, groups)?;
    let y = ds.targets()?;
    let (n, d) = (ds.len(), ds.dim());
    let mut state = AdmmState::zeros(n, groups.n_pairs(), d);
    if kind == ModelKind::Dprr && cfg.warm_start {
        state.w = ridge_solve(&ds.x, y, cfg.alpha);
        for row in state.a.chunks_mut(d) {
            row.copy_from_slice(&state.w);
        }
    }
    let scale = ((groups.n_pairs() * d) as f64).sqrt();
    let alpha = if kind == ModelKind::Dprr { cfg.alpha } else { 0.0 };

    let mut initial_objective = f64::NAN;
    let mut converged = false;
    let mut last = Residuals { primal: 0.0, dual: 0.0 };
    for it in 1..=cfg.max_iterations {
        let Residuals { primal, dual } = admm::iterate(
            &mut state,
            &ds.x,
            y,
            groups,
            cfg.alpha,
            cfg.beta,
            cfg.rho,
            kind == ModelKind::Dprr,
        );
        state.iteration = it;
        last = Residuals { primal, dual };
        state.history.push(last);
        if !state.is_finite() || !primal.is_finite() || !dual.is_finite() {
            return Err(Error::Numeric(format!("non-finite ADMM iterate at iteration {it}")));
        }
        if it == 1 {
            let local = recover_local(&state, ds, groups)?;
            initial_objective = objective(ds, groups, &state.w, &local, alpha, cfg.beta)?;
        }
        if groups.n_pairs() == 0 || (primal < cfg.eps_primal * scale && dual < cfg.eps_dual * scale) {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!(
            "ADMM stopped at {} iterations (primal {:.3e}, dual {:.3e})",
            cfg.max_iterations,
            last.primal,
            last.dual
        );
    }

    let local = recover_local(&state, ds, groups)?;
    let final_objective = objective(ds, groups, &state.w, &local, alpha, cfg.beta)?;
    let mut target_points = BTreeMap::new();
    for rows in &groups.members {
        let points: Vec<&[f64]> = rows.iter().map(|&i| local[i].as_slice()).collect();
        target_points.insert(ds.meta[rows[0]].v.clone(), weber_point(&points));
    }
    Ok(DprrModel {
        kind,
        d,
        w: state.w,
        local,
        target_points,
        standardizer: ds.standardizer.clone(),
        fill_value: ds.fill_value,
        config: *cfg,
        diagnostics: FitDiagnostics {
            initial_objective,
            objective: final_objective,
            iterations: state.iteration,
            converged,
            primal_residual: last.primal,
            dual_residual: last.dual,
        },
    })
}

/// Fits global and localized parameters by ADMM.
pub fn fit(ds: &Dataset, groups: &SameTargetGroups, cfg: &DprrConfig) -> Result<DprrModel> {
    fit_impl(ds, groups, cfg, ModelKind::Dprr)
}

/// Same model with the global parameter pinned at zero; `alpha` is ignored.
pub fn fit_personal_only(ds: &Dataset, groups: &SameTargetGroups, cfg: &DprrConfig) -> Result<DprrModel> {
    fit_impl(ds, groups, cfg, ModelKind::PersonalOnly)
}

/// Groups `ds` by its row targets using the config's cap and seed.
pub fn groups_for(ds: &Dataset, cfg: &DprrConfig) -> SameTargetGroups {
    build_same_target_groups(&ds.groups(), cfg.group_cap, cfg.seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Dataset {
        let x = vec![vec![1.0, 0.5], vec![1.0, -1.0], vec![1.0, 2.0], vec![1.0, 0.0]];
        Dataset::from_parts(x, vec![3.0, 1.0, 4.0, 2.0], Some(vec![0, 0, 0, 1])).unwrap()
    }

    #[test]
    fn objective_zero_at_origin() {
        let ds = Dataset::from_parts(vec![vec![1.0], vec![2.0]], vec![0.0, 0.0], Some(vec![0, 0])).unwrap();
        let g = groups_for(&ds, &DprrConfig::default());
        let v = objective(&ds, &g, &[0.0], &[vec![0.0], vec![0.0]], 1.0, 1.0).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn coincident_locals_have_no_coupling_cost() {
        let ds = tiny();
        let g = groups_for(&ds, &DprrConfig::default());
        let local = vec![vec![0.3, 0.1]; 4];
        let with = objective(&ds, &g, &[0.1, 0.2], &local, 1.0, 100.0).unwrap();
        let without = objective(&ds, &g, &[0.1, 0.2], &local, 1.0, 0.0).unwrap();
        assert_eq!(with, without);
    }

    #[test]
    fn objective_dimension_mismatch() {
        let ds = tiny();
        let g = groups_for(&ds, &DprrConfig::default());
        assert!(matches!(
            objective(&ds, &g, &[0.0], &vec![vec![0.0, 0.0]; 4], 1.0, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn fit_records_weber_points_and_clamps() {
        let ds = tiny();
        let cfg = DprrConfig::default();
        let m = fit(&ds, &groups_for(&ds, &cfg), &cfg).unwrap();
        assert_eq!(m.target_points.len(), 2);
        // single-row target: Weber point is that row's localized parameter
        assert_eq!(m.target_points["g1"], m.local[3]);
        assert!(m.diagnostics.objective <= m.diagnostics.initial_objective);
        let mut neg = m.clone();
        neg.w = vec![-10.0, 0.0];
        neg.target_points.clear();
        assert_eq!(neg.predict(&[1.0, 0.0], "nobody").unwrap(), 0.0);
        assert!(m.predict(&[1.0], "g0").is_err());
    }

    #[test]
    fn unseen_target_uses_global_only() {
        let ds = tiny();
        let cfg = DprrConfig::default();
        let mut m = fit(&ds, &groups_for(&ds, &cfg), &cfg).unwrap();
        m.w = vec![2.5, 0.0];
        assert_eq!(m.predict(&[1.0, 7.0], "unseen").unwrap(), 2.5);
    }

    #[test]
    fn invalid_config() {
        let ds = tiny();
        let cfg = DprrConfig { rho: 0.0, ..Default::default() };
        assert!(matches!(fit(&ds, &groups_for(&ds, &cfg), &cfg), Err(Error::Config(_))));
    }
}
