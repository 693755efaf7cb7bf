#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use reciprocity_delay::features::Dataset;
use reciprocity_delay::{DynamicDigraph, TemporalEdge};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| normal(rng)).collect()
}

/// Value, gradient and Hessian of a smooth objective.
pub type Eval = (f64, Vec<f64>, DMatrix<f64>);

/// Damped Newton with Armijo backtracking; a tiny ridge keeps flat
/// directions solvable.
pub fn newton<F>(x0: Vec<f64>, mut eval: F, max_iter: usize) -> Vec<f64>
where
    F: FnMut(&[f64]) -> Eval,
{
    let n = x0.len();
    let mut x = x0;
    for _ in 0..max_iter {
        let (f, g, mut h) = eval(&x);
        let scale = (0..n).map(|i| h[(i, i)].abs()).fold(1.0, f64::max);
        for i in 0..n {
            h[(i, i)] += 1e-13 * scale;
        }
        let rhs = -DVector::from_vec(g.clone());
        let step = match h.clone().cholesky() {
            Some(c) => c.solve(&rhs),
            None => match h.lu().solve(&rhs) {
                Some(s) => s,
                None => break,
            },
        };
        let slope: f64 = g.iter().zip(step.iter()).map(|(a, b)| a * b).sum();
        if slope >= 0.0 || -slope <= 1e-26 + 1e-22 * f.abs() {
            break;
        }
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-14 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + t * s).collect();
            if eval(&trial).0 <= f + 1e-4 * t * slope {
                x = trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    x
}

/// `sqrt(|v|^2 + eps^2)` with its gradient and Hessian.
pub fn smooth_norm(v: &[f64], eps: f64) -> (f64, Vec<f64>, DMatrix<f64>) {
    let d = v.len();
    let phi = (v.iter().map(|x| x * x).sum::<f64>() + eps * eps).sqrt();
    let g: Vec<f64> = v.iter().map(|x| x / phi).collect();
    let mut h = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            h[(i, j)] = -v[i] * v[j] / (phi * phi * phi);
        }
        h[(i, i)] += 1.0 / phi;
    }
    (phi, g, h)
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Small regression instance: rows, targets and a group label per row.
#[derive(Debug, Clone)]
pub struct Instance {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub groups: Vec<usize>,
}

impl Instance {
    pub fn random(rng: &mut ChaCha8Rng, n: usize, d: usize, n_groups: usize) -> Self {
        let x: Vec<Vec<f64>> = (0..n)
            .map(|_| loop {
                let row = normals(rng, d);
                if norm(&row) > 0.1 {
                    break row;
                }
            })
            .collect();
        let y = (0..n).map(|_| 3.0 * normal(rng)).collect();
        let groups = (0..n).map(|_| rng.random_range(0..n_groups)).collect();
        Self { x, y, groups }
    }

    pub fn dataset(&self) -> Dataset {
        Dataset::from_parts(self.x.clone(), self.y.clone(), Some(self.groups.clone())).unwrap()
    }

    pub fn ordered_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.y.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.groups[i] == self.groups[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Exact objective at `(w, local)` recomputed from scratch.
    pub fn objective(&self, w: &[f64], local: &[Vec<f64>], alpha: f64, beta: f64) -> f64 {
        let mut f = alpha * w.iter().map(|v| v * v).sum::<f64>();
        for i in 0..self.y.len() {
            let r: f64 = self.x[i].iter().zip(w.iter().zip(&local[i])).map(|(x, (a, b))| x * (a + b)).sum::<f64>() - self.y[i];
            f += r * r;
        }
        for (i, j) in self.ordered_pairs() {
            f += beta * dist(&local[i], &local[j]);
        }
        f
    }

    /// Minimizer of the smoothed objective by Newton continuation on the
    /// smoothing width; returns `(w, local)`.
    pub fn oracle(&self, alpha: f64, beta: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
        let n = self.y.len();
        let d = self.x[0].len();
        let dim = d * (n + 1);
        let pairs = self.ordered_pairs();
        let mut v = vec![0.0; dim];
        for eps in [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10] {
            v = newton(
                v,
                |v| {
                    let mut f = 0.0;
                    let mut g = vec![0.0; dim];
                    let mut h = DMatrix::zeros(dim, dim);
                    for k in 0..d {
                        f += alpha * v[k] * v[k];
                        g[k] += 2.0 * alpha * v[k];
                        h[(k, k)] += 2.0 * alpha;
                    }
                    for i in 0..n {
                        let o = d * (i + 1);
                        let x = &self.x[i];
                        let r: f64 = (0..d).map(|k| x[k] * (v[k] + v[o + k])).sum::<f64>() - self.y[i];
                        f += r * r;
                        for a in 0..d {
                            g[a] += 2.0 * r * x[a];
                            g[o + a] += 2.0 * r * x[a];
                            for b in 0..d {
                                let c = 2.0 * x[a] * x[b];
                                h[(a, b)] += c;
                                h[(o + a, o + b)] += c;
                                h[(a, o + b)] += c;
                                h[(o + a, b)] += c;
                            }
                        }
                    }
                    for &(i, j) in &pairs {
                        let (oi, oj) = (d * (i + 1), d * (j + 1));
                        let diff: Vec<f64> = (0..d).map(|k| v[oi + k] - v[oj + k]).collect();
                        let (phi, pg, ph) = smooth_norm(&diff, eps);
                        f += beta * phi;
                        for a in 0..d {
                            g[oi + a] += beta * pg[a];
                            g[oj + a] -= beta * pg[a];
                            for b in 0..d {
                                let c = beta * ph[(a, b)];
                                h[(oi + a, oi + b)] += c;
                                h[(oj + a, oj + b)] += c;
                                h[(oi + a, oj + b)] -= c;
                                h[(oj + a, oi + b)] -= c;
                            }
                        }
                    }
                    (f, g, h)
                },
                200,
            );
        }
        let w = v[..d].to_vec();
        let local = (0..n).map(|i| v[d * (i + 1)..d * (i + 2)].to_vec()).collect();
        (w, local)
    }
}

pub fn graph(edges: &[(&str, &str, u32)]) -> DynamicDigraph {
    let edges: Vec<TemporalEdge> = edges.iter().map(|&(s, d, t)| TemporalEdge::new(s, d, t)).collect();
    DynamicDigraph::from_edges(&edges).unwrap()
}
