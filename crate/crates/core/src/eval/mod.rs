//! Error metrics, sampling protocol, significance tests, model selection and
//! the repeated-split benchmark.

pub mod benchmark;
pub mod metrics;
pub mod split;
pub mod sweep;
pub mod ttest;

pub use benchmark::{
    cross_validate, fit_and_predict, prepare_split, run_benchmark, BenchmarkConfig, EvalReport, Method,
    MethodSummary, TrialResult, REGULARIZATION_GRID,
};
pub use metrics::{mae, rmse};
pub use split::{kfold, sample_split, sample_split_indices};
pub use sweep::{beta_sweep, beta_sweep_split, SweepRow, DEFAULT_BETA_GRID};
pub use ttest::{paired_t_test, two_sided_p, TTest};
