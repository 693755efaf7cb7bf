//! Paired two-sided Student t-test.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTest {
    pub t: f64,
    pub p: f64,
    pub df: usize,
    /// Differences had zero variance; `p` is 0 if their mean is nonzero, else 1.
    pub degenerate: bool,
}

/// Two-sided p-value of a t statistic with `df` degrees of freedom.
pub fn two_sided_p(t: f64, df: usize) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df >= 1");
    (2.0 * dist.cdf(-t.abs())).min(1.0)
}

/// Tests whether paired samples `a` and `b` have equal means.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<TTest> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::Empty("paired t-test needs at least two pairs"));
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1) as f64;
    let df = n - 1;
    if var == 0.0 {
        let (t, p) = if mean == 0.0 {
            (0.0, 1.0)
        } else {
            (mean.signum() * f64::INFINITY, 0.0)
        };
        return Ok(TTest { t, p, df, degenerate: true });
    }
    let t = mean / (var / n as f64).sqrt();
    Ok(TTest {
        t,
        p: two_sided_p(t, df),
        df,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples() {
        let r = paired_t_test(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((r.t, r.p, r.degenerate), (0.0, 1.0, true));
    }

    #[test]
    fn constant_nonzero_difference() {
        let r = paired_t_test(&[2.0, 3.0, 4.0, 5.0], &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.p, 0.0);
    }

    #[test]
    fn table_critical_values() {
        // two-sided 5% critical values from standard t tables
        assert!((two_sided_p(2.776, 4) - 0.05).abs() < 1e-3);
        assert!((two_sided_p(2.262, 9) - 0.05).abs() < 1e-3);
        assert!((two_sided_p(4.604, 4) - 0.01).abs() < 1e-3);
    }

    #[test]
    fn argument_errors() {
        assert!(paired_t_test(&[1.0], &[2.0]).is_err());
        assert!(paired_t_test(&[1.0, 2.0], &[2.0]).is_err());
    }
}
