//! Geometric median (Weber point) by Weiszfeld iteration.
//!
//! When an iterate lands on an anchor, the step follows the Vardi–Zhang
//! modification: the anchor is returned if the pull of the other anchors does
//! not exceed its weight, otherwise the iterate moves off it.

use crate::linalg::{dist, norm};

const TOLERANCE: f64 = 1e-8;
const MAX_ITERATIONS: usize = 100_000;

/// `sum_i ||b - p_i||`
pub fn weber_cost<P: AsRef<[f64]>>(b: &[f64], points: &[P]) -> f64 {
    points.iter().map(|p| dist(b, p.as_ref())).sum()
}

/// Point minimizing the sum of Euclidean distances to `points`.
///
/// One point returns itself; two points return their midpoint.
///
/// # Panics
/// If `points` is empty.
pub fn weber_point<P: AsRef<[f64]>>(points: &[P]) -> Vec<f64> {
    assert!(!points.is_empty(), "weber_point needs at least one point");
    let d = points[0].as_ref().len();
    let n = points.len();
    if n == 1 {
        return points[0].as_ref().to_vec();
    }
    if n == 2 {
        let (a, b) = (points[0].as_ref(), points[1].as_ref());
        return a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
    }

    let mut y = vec![0.0; d];
    for p in points {
        for (yi, pi) in y.iter_mut().zip(p.as_ref()) {
            *yi += pi / n as f64;
        }
    }
    let scale = points
        .iter()
        .map(|p| dist(p.as_ref(), &y))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return y;
    }
    let coincide = scale * 1e-14;

    let mut t = vec![0.0; d];
    let mut pull = vec![0.0; d];
    for _ in 0..MAX_ITERATIONS {
        t.iter_mut().for_each(|v| *v = 0.0);
        pull.iter_mut().for_each(|v| *v = 0.0);
        let mut inv_sum = 0.0;
        let mut on_anchor = 0.0;
        for p in points {
            let p = p.as_ref();
            let r = dist(p, &y);
            if r <= coincide {
                on_anchor += 1.0;
                continue;
            }
            let inv = 1.0 / r;
            inv_sum += inv;
            for k in 0..d {
                t[k] += p[k] * inv;
                pull[k] += (p[k] - y[k]) * inv;
            }
        }
        if inv_sum == 0.0 {
            return y;
        }
        t.iter_mut().for_each(|v| *v /= inv_sum);
        let next: Vec<f64> = if on_anchor == 0.0 {
            t.clone()
        } else {
            let r = norm(&pull);
            if r <= on_anchor {
                return y;
            }
            let keep = on_anchor / r;
            t.iter()
                .zip(&y)
                .map(|(ti, yi)| (1.0 - keep) * ti + keep * yi)
                .collect()
        };
        let step = dist(&next, &y);
        y = next;
        if step <= TOLERANCE * 1e-2 * (1.0 + norm(&y)) {
            break;
        }
    }
    y
}
