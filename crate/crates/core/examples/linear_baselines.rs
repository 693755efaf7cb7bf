//! Ridge and lasso with cross-validated weights.

use reciprocity_delay::baselines::{fit_lasso, fit_ridge};
use reciprocity_delay::eval::{cross_validate, mae, REGULARIZATION_GRID};
use reciprocity_delay::features::Dataset;
use reciprocity_delay::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let w_true = [3.0, 0.0, -2.0, 0.0, 1.0, 6.0];
    let x: Vec<Vec<f64>> = (0..300)
        .map(|_| (0..5).map(|_| rng.random_range(-1.0..1.0)).chain([1.0]).collect())
        .collect();
    let y: Vec<f64> = x
        .iter()
        .map(|r| r.iter().zip(&w_true).map(|(a, b)| a * b).sum::<f64>() + 0.3 * rng.random_range(-1.0..1.0))
        .collect();
    let ds = Dataset::from_parts(x, y, None)?;

    let alpha = cross_validate(&ds, &REGULARIZATION_GRID, 5, 0, |tr, te, a| fit_ridge(tr, a)?.predict_dataset(te))?;
    let lambda = cross_validate(&ds, &REGULARIZATION_GRID, 5, 0, |tr, te, l| fit_lasso(tr, l)?.predict_dataset(te))?;
    let ridge = fit_ridge(&ds, alpha)?;
    let lasso = fit_lasso(&ds, lambda)?;
    let y = ds.targets()?;
    println!("ridge alpha={alpha}: w={:.3?} train MAE {:.4}", ridge.w, mae(y, &ridge.predict_dataset(&ds)?)?);
    println!("lasso lambda={lambda}: w={:.3?} train MAE {:.4}", lasso.w, mae(y, &lasso.predict_dataset(&ds)?)?);
    Ok(())
}
