//! Geometric median of localized parameters.

use reciprocity_delay::dprr::{weber_cost, weber_point};

fn main() {
    let square = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
    println!("square: {:?}", weber_point(&square));

    // an outlier barely moves the median, unlike the mean
    let points = [[0.0, 0.0], [1.0, 0.2], [0.4, 1.0], [0.6, 0.5], [50.0, 50.0]];
    let b = weber_point(&points);
    let mean = [points.iter().map(|p| p[0]).sum::<f64>() / 5.0, points.iter().map(|p| p[1]).sum::<f64>() / 5.0];
    println!("median {b:?} cost {:.4}", weber_cost(&b, &points));
    println!("mean   {mean:?} cost {:.4}", weber_cost(&mean, &points));
}
