//! Error metrics and the paired t-test used to compare predictors.

use reciprocity_delay::eval::{mae, paired_t_test, rmse};
use reciprocity_delay::Result;

fn main() -> Result<()> {
    let actual = [1.0, 3.0];
    let predicted = [2.0, 5.0];
    println!("MAE {} RMSE {}", mae(&actual, &predicted)?, rmse(&actual, &predicted)?);

    let model_a = [1.41, 1.52, 1.47, 1.39, 1.50, 1.44];
    let model_b = [1.73, 1.70, 1.81, 1.69, 1.77, 1.74];
    let t = paired_t_test(&model_a, &model_b)?;
    println!("paired t = {:.3}, df = {}, p = {:.2e}", t.t, t.df, t.p);
    Ok(())
}
