//! Absolute and squared error summaries.

use crate::error::{Error, Result};

fn check(actual: &[f64], predicted: &[f64]) -> Result<()> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: actual.len(),
            right: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::Empty("error vectors"));
    }
    Ok(())
}

/// Mean absolute error.
pub fn mae(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check(actual, predicted)?;
    let sum: f64 = actual.iter().zip(predicted).map(|(d, p)| (d - p).abs()).sum();
    Ok(sum / actual.len() as f64)
}

/// Root mean squared error.
pub fn rmse(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check(actual, predicted)?;
    let sum: f64 = actual.iter().zip(predicted).map(|(d, p)| (d - p) * (d - p)).sum();
    Ok((sum / actual.len() as f64).sqrt())
}
