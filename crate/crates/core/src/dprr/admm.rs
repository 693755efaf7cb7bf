//! Scaled-form ADMM iterates and their closed-form block updates.
//!
//! Splitting: each row keeps a copy `a_i` of its effective parameter
//! `w + w~_i`, and every coupled ordered pair `(i, j)` keeps `z_ij`, a copy of
//! `w~_i`, tied by `a_i = w + z_ij`. The augmented term is `rho/2` per ordered
//! pair and the coupling penalty on `||z_ij - z_ji||` appears once for each
//! orientation, so an unordered pair carries weight `2 beta`.

use rayon::prelude::*;

use crate::dprr::groups::SameTargetGroups;
use crate::linalg::{dot, ridge_solve};

/// Below this many scalar updates a block runs sequentially.
const PARALLEL_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    pub primal: f64,
    pub dual: f64,
}

/// All ADMM variables, row-major with `d` values per row or pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub d: usize,
    pub a: Vec<f64>,
    pub w: Vec<f64>,
    pub z: Vec<f64>,
    pub u: Vec<f64>,
    pub iteration: usize,
    pub history: Vec<Residuals>,
}

impl AdmmState {
    pub fn zeros(n: usize, n_pairs: usize, d: usize) -> Self {
        Self {
            d,
            a: vec![0.0; n * d],
            w: vec![0.0; d],
            z: vec![0.0; n_pairs * d],
            u: vec![0.0; n_pairs * d],
            iteration: 0,
            history: Vec::new(),
        }
    }

    pub fn a_row(&self, i: usize) -> &[f64] {
        &self.a[i * self.d..(i + 1) * self.d]
    }

    pub fn z_pair(&self, p: usize) -> &[f64] {
        &self.z[p * self.d..(p + 1) * self.d]
    }

    pub fn u_pair(&self, p: usize) -> &[f64] {
        &self.u[p * self.d..(p + 1) * self.d]
    }

    pub fn is_finite(&self) -> bool {
        self.a
            .iter()
            .chain(&self.w)
            .chain(&self.z)
            .chain(&self.u)
            .all(|v| v.is_finite())
    }

    /// `sqrt(sum over pairs ||a_i - w - z_ij||^2)`
    pub fn primal_residual(&self, groups: &SameTargetGroups) -> f64 {
        let d = self.d;
        let mut s = 0.0;
        for (p, &(i, _)) in groups.pairs.iter().enumerate() {
            for k in 0..d {
                let r = self.a[i * d + k] - self.w[k] - self.z[p * d + k];
                s += r * r;
            }
        }
        s.sqrt()
    }
}

/// Minimum-norm localized parameter that zeroes row `i`'s residual given `w`.
pub fn isolated_local(x: &[f64], y: f64, w: &[f64]) -> Vec<f64> {
    let xx = dot(x, x);
    if xx == 0.0 {
        return vec![0.0; x.len()];
    }
    let s = (y - dot(x, w)) / xx;
    x.iter().map(|xi| s * xi).collect()
}

#[allow(clippy::too_many_arguments)]
fn a_row_update(
    out: &mut [f64],
    partners: &[usize],
    w: &[f64],
    z: &[f64],
    u: &[f64],
    x: &[f64],
    y: f64,
    rho: f64,
) {
    let d = w.len();
    if partners.is_empty() {
        let local = isolated_local(x, y, w);
        for ((o, wk), lk) in out.iter_mut().zip(w).zip(&local) {
            *o = wk + lk;
        }
        return;
    }
    // (2 x x^T + c I) a = b,  c = rho * m
    let m = partners.len() as f64;
    let c = rho * m;
    out.iter_mut().zip(w).for_each(|(o, wk)| *o = m * wk);
    for &p in partners {
        let zp = &z[p * d..(p + 1) * d];
        let up = &u[p * d..(p + 1) * d];
        for ((o, zk), uk) in out.iter_mut().zip(zp).zip(up) {
            *o += zk - uk;
        }
    }
    for (o, xk) in out.iter_mut().zip(x) {
        *o = rho * *o + 2.0 * y * xk;
    }
    // Sherman–Morrison
    let s = 2.0 * dot(x, out) / (c + 2.0 * dot(x, x));
    for (o, xk) in out.iter_mut().zip(x) {
        *o = (*o - s * xk) / c;
    }
}

/// Row block: `a_i = argmin (x_i.a - y_i)^2 + rho/2 sum_j ||a - z_ij - w + u_ij||^2`.
///
/// Rows without partners take `w + w~_i` with the minimum-norm `w~_i` that
/// fits the row exactly.
pub fn update_a(state: &mut AdmmState, x: &[Vec<f64>], y: &[f64], groups: &SameTargetGroups, rho: f64) {
    let AdmmState { d, a, w, z, u, .. } = state;
    let d = *d;
    let (w, z, u) = (&*w, &*z, &*u);
    let row = |(i, out): (usize, &mut [f64])| a_row_update(out, &groups.row_pairs[i], w, z, u, &x[i], y[i], rho);
    if z.len() + a.len() >= PARALLEL_THRESHOLD {
        a.par_chunks_mut(d).enumerate().for_each(row);
    } else {
        a.chunks_mut(d).enumerate().for_each(row);
    }
}

/// Global block: `w = rho sum_(i,j) (a_i - z_ij + u_ij) / (2 alpha + rho P)`.
///
/// With no coupled pairs the global parameter is the ridge solution on all rows.
/// The sum runs in pair order so results do not depend on thread count.
pub fn update_w(state: &mut AdmmState, x: &[Vec<f64>], y: &[f64], groups: &SameTargetGroups, alpha: f64, rho: f64) {
    let d = state.d;
    if groups.n_pairs() == 0 {
        state.w = ridge_solve(x, y, alpha);
        return;
    }
    let mut sum = vec![0.0; d];
    for (p, &(i, _)) in groups.pairs.iter().enumerate() {
        let ai = &state.a[i * d..(i + 1) * d];
        let zp = &state.z[p * d..(p + 1) * d];
        let up = &state.u[p * d..(p + 1) * d];
        for (((s, ak), zk), uk) in sum.iter_mut().zip(ai).zip(zp).zip(up) {
            *s += ak - zk + uk;
        }
    }
    let denom = 2.0 * alpha + rho * groups.n_pairs() as f64;
    for (wk, s) in state.w.iter_mut().zip(&sum) {
        *wk = rho * s / denom;
    }
}

/// Closed-form minimizer of
/// `2 beta ||z1 - z2|| + rho/2 (||z1 - c1||^2 + ||z2 - c2||^2)`.
pub fn pair_prox(c1: &[f64], c2: &[f64], beta: f64, rho: f64, z1: &mut [f64], z2: &mut [f64]) {
    z1.copy_from_slice(c1);
    z2.copy_from_slice(c2);
    pair_prox_in_place(z1, z2, beta, rho);
}

/// [`pair_prox`] with `c1`, `c2` passed in the output buffers.
fn pair_prox_in_place(z1: &mut [f64], z2: &mut [f64], beta: f64, rho: f64) {
    let gap = z1
        .iter()
        .zip(&*z2)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let theta = if gap > 0.0 {
        (1.0 - 4.0 * beta / (rho * gap)).max(0.0)
    } else {
        0.0
    };
    for (a, b) in z1.iter_mut().zip(z2.iter_mut()) {
        let m = 0.5 * (*a + *b);
        *a = theta * *a + (1.0 - theta) * m;
        *b = theta * *b + (1.0 - theta) * m;
    }
}

/// Pair block: each unordered pair solves [`pair_prox`] with
/// `c_i = a_i - w + u_ij`, `c_j = a_j - w + u_ji`. Returns the dual residual
/// `rho ||z_new - z_old||`.
pub fn update_z(state: &mut AdmmState, groups: &SameTargetGroups, beta: f64, rho: f64) -> f64 {
    let AdmmState { d, a, w, z, u, .. } = state;
    let d = *d;
    let (a, w, u) = (&*a, &*w, &*u);
    let n_unordered = groups.n_pairs() / 2;
    // squared step of every unordered pair, summed in pair order afterwards
    let mut steps = vec![0.0; n_unordered];
    let solve = |((q, chunk), step): ((usize, &mut [f64]), &mut f64)| {
        let (i, j) = groups.pairs[2 * q];
        let mut stack = [0.0; 64];
        let mut heap = Vec::new();
        let old: &mut [f64] = if 2 * d <= stack.len() {
            &mut stack[..2 * d]
        } else {
            heap.resize(2 * d, 0.0);
            &mut heap
        };
        old.copy_from_slice(chunk);
        let (z1, z2) = chunk.split_at_mut(d);
        let (u1, u2) = u[2 * q * d..(2 * q + 2) * d].split_at(d);
        let (ai, aj) = (&a[i * d..(i + 1) * d], &a[j * d..(j + 1) * d]);
        for k in 0..d {
            z1[k] = ai[k] - w[k] + u1[k];
            z2[k] = aj[k] - w[k] + u2[k];
        }
        pair_prox_in_place(z1, z2, beta, rho);
        *step = chunk.iter().zip(&*old).map(|(n, o)| (n - o) * (n - o)).sum();
    };
    if z.len() >= PARALLEL_THRESHOLD {
        z.par_chunks_mut(2 * d).enumerate().zip(steps.par_iter_mut()).for_each(solve);
    } else {
        z.chunks_mut(2 * d).enumerate().zip(steps.iter_mut()).for_each(solve);
    }
    rho * steps.iter().sum::<f64>().sqrt()
}

/// Dual ascent: `u_ij += a_i - w - z_ij`. Returns the primal residual
/// `||a - w - z||` over all pairs.
pub fn update_u(state: &mut AdmmState, groups: &SameTargetGroups) -> f64 {
    let d = state.d;
    let mut s = 0.0;
    for (p, &(i, _)) in groups.pairs.iter().enumerate() {
        for k in 0..d {
            let r = state.a[i * d + k] - state.w[k] - state.z[p * d + k];
            state.u[p * d + k] += r;
            s += r * r;
        }
    }
    s.sqrt()
}

/// One full iteration (row, global, pair and dual blocks) in two passes over
/// the pair variables. Equivalent to calling [`update_a`], [`update_w`] (when
/// `update_global`), [`update_z`] and [`update_u`] in turn, up to summation
/// order.
#[allow(clippy::too_many_arguments)]
pub fn iterate(
    state: &mut AdmmState,
    x: &[Vec<f64>],
    y: &[f64],
    groups: &SameTargetGroups,
    alpha: f64,
    beta: f64,
    rho: f64,
    update_global: bool,
) -> Residuals {
    let AdmmState { d, a, w, z, u, .. } = state;
    let d = *d;
    let n_pairs = groups.n_pairs();
    let parallel = z.len() + a.len() >= PARALLEL_THRESHOLD;

    // rows, keeping s_i = sum_j (z_ij - u_ij) for the global block
    let mut sums = vec![0.0; a.len()];
    {
        let (wr, zr, ur) = (&*w, &*z, &*u);
        let row = |((i, out), s): ((usize, &mut [f64]), &mut [f64])| {
            let partners = &groups.row_pairs[i];
            for &p in partners {
                for ((sk, zk), uk) in s.iter_mut().zip(&zr[p * d..(p + 1) * d]).zip(&ur[p * d..(p + 1) * d]) {
                    *sk += zk - uk;
                }
            }
            if partners.is_empty() {
                let local = isolated_local(&x[i], y[i], wr);
                for ((o, wk), lk) in out.iter_mut().zip(wr).zip(&local) {
                    *o = wk + lk;
                }
                return;
            }
            let m = partners.len() as f64;
            let c = rho * m;
            for (((o, wk), sk), xk) in out.iter_mut().zip(wr).zip(&*s).zip(&x[i]) {
                *o = rho * (m * wk + sk) + 2.0 * y[i] * xk;
            }
            let sm = 2.0 * dot(&x[i], out) / (c + 2.0 * dot(&x[i], &x[i]));
            for (o, xk) in out.iter_mut().zip(&x[i]) {
                *o = (*o - sm * xk) / c;
            }
        };
        if parallel {
            a.par_chunks_mut(d).enumerate().zip(sums.par_chunks_mut(d)).for_each(row);
        } else {
            a.chunks_mut(d).enumerate().zip(sums.chunks_mut(d)).for_each(row);
        }
    }

    if update_global {
        if n_pairs == 0 {
            *w = ridge_solve(x, y, alpha);
        } else {
            let mut total = vec![0.0; d];
            for (i, s) in sums.chunks(d).enumerate() {
                let m = groups.row_pairs[i].len() as f64;
                if m == 0.0 {
                    continue;
                }
                for ((t, ak), sk) in total.iter_mut().zip(&a[i * d..(i + 1) * d]).zip(s) {
                    *t += m * ak - sk;
                }
            }
            let denom = 2.0 * alpha + rho * n_pairs as f64;
            for (wk, t) in w.iter_mut().zip(&total) {
                *wk = rho * t / denom;
            }
        }
    }

    // pairs and duals; per-pair (dual step^2, primal^2)
    let mut norms = vec![[0.0; 2]; n_pairs / 2];
    {
        let (ar, wr) = (&*a, &*w);
        let pair = |((q, (zc, uc)), out): ((usize, (&mut [f64], &mut [f64])), &mut [f64; 2])| {
            let (i, j) = groups.pairs[2 * q];
            let mut stack = [0.0; 64];
            let mut heap = Vec::new();
            let old: &mut [f64] = if 2 * d <= stack.len() {
                &mut stack[..2 * d]
            } else {
                heap.resize(2 * d, 0.0);
                &mut heap
            };
            old.copy_from_slice(zc);
            let (ai, aj) = (&ar[i * d..(i + 1) * d], &ar[j * d..(j + 1) * d]);
            {
                let (z1, z2) = zc.split_at_mut(d);
                let (u1, u2) = uc.split_at(d);
                for k in 0..d {
                    z1[k] = ai[k] - wr[k] + u1[k];
                    z2[k] = aj[k] - wr[k] + u2[k];
                }
                pair_prox_in_place(z1, z2, beta, rho);
            }
            out[0] = zc.iter().zip(&*old).map(|(n, o)| (n - o) * (n - o)).sum();
            let (z1, z2) = zc.split_at(d);
            let (u1, u2) = uc.split_at_mut(d);
            let mut r2 = 0.0;
            for k in 0..d {
                let r1 = ai[k] - wr[k] - z1[k];
                let r2k = aj[k] - wr[k] - z2[k];
                u1[k] += r1;
                u2[k] += r2k;
                r2 += r1 * r1 + r2k * r2k;
            }
            out[1] = r2;
        };
        if parallel {
            z.par_chunks_mut(2 * d)
                .zip(u.par_chunks_mut(2 * d))
                .enumerate()
                .zip(norms.par_iter_mut())
                .for_each(pair);
        } else {
            z.chunks_mut(2 * d)
                .zip(u.chunks_mut(2 * d))
                .enumerate()
                .zip(norms.iter_mut())
                .for_each(pair);
        }
    }
    let (mut dual, mut primal) = (0.0, 0.0);
    for [s, r] in &norms {
        dual += s;
        primal += r;
    }
    Residuals {
        primal: primal.sqrt(),
        dual: rho * dual.sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dprr::groups::build_same_target_groups;

    #[test]
    fn a_update_single_partner() {
        // minimize (a - 2)^2 + (a - 0)^2 -> a = 1
        let groups = build_same_target_groups(&[0, 0], 200, 0);
        let mut s = AdmmState::zeros(2, groups.n_pairs(), 1);
        update_a(&mut s, &[vec![1.0], vec![1.0]], &[2.0, 2.0], &groups, 2.0);
        assert!((s.a[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn w_update_hand_value() {
        let groups = build_same_target_groups(&[0, 0], 200, 0);
        let mut s = AdmmState::zeros(2, 2, 1);
        // c_01 = a_0 - z_01 + u_01 = 3, c_10 = 1
        s.a = vec![3.0, 1.0];
        update_w(&mut s, &[vec![1.0], vec![1.0]], &[0.0, 0.0], &groups, 1.0, 2.0);
        assert!((s.w[0] - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn pair_prox_limits() {
        let (c1, c2) = ([1.0, 2.0], [3.0, -1.0]);
        let (mut z1, mut z2) = ([0.0; 2], [0.0; 2]);
        pair_prox(&c1, &c2, 0.0, 1.0, &mut z1, &mut z2);
        assert_eq!((z1, z2), (c1, c2));
        pair_prox(&c1, &c1, 5.0, 1.0, &mut z1, &mut z2);
        assert_eq!((z1, z2), (c1, c1));
        pair_prox(&c1, &c2, 1e3, 1.0, &mut z1, &mut z2);
        assert_eq!(z1, [2.0, 0.5]);
        assert_eq!(z1, z2);
    }

    #[test]
    fn fused_iteration_matches_block_updates() {
        let groups = build_same_target_groups(&[0, 0, 0, 1, 1, 2], 200, 0);
        let x: Vec<Vec<f64>> = (0..6).map(|i| vec![1.0, (i as f64).sin(), (i as f64 * 0.7).cos()]).collect();
        let y = [1.0, 2.0, 0.5, -1.0, 3.0, 0.2];
        let mut a = AdmmState::zeros(6, groups.n_pairs(), 3);
        a.w = vec![0.3, -0.1, 0.2];
        let mut b = a.clone();
        for _ in 0..5 {
            update_a(&mut a, &x, &y, &groups, 1.3);
            update_w(&mut a, &x, &y, &groups, 0.7, 1.3);
            let dual = update_z(&mut a, &groups, 0.4, 1.3);
            let primal = update_u(&mut a, &groups);
            let r = iterate(&mut b, &x, &y, &groups, 0.7, 0.4, 1.3, true);
            assert!((r.dual - dual).abs() < 1e-12 && (r.primal - primal).abs() < 1e-12);
        }
        for (p, q) in a.a.iter().chain(&a.w).chain(&a.z).chain(&a.u).zip(b.a.iter().chain(&b.w).chain(&b.z).chain(&b.u)) {
            assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn u_update_accumulates_residual() {
        let groups = build_same_target_groups(&[0, 0], 200, 0);
        let mut s = AdmmState::zeros(2, 2, 1);
        s.a = vec![1.0, 1.0];
        s.w = vec![0.25];
        s.z = vec![0.75, 0.75];
        update_u(&mut s, &groups);
        assert_eq!(s.u, vec![0.0, 0.0]);
        s.z = vec![0.5, 0.0];
        update_u(&mut s, &groups);
        assert_eq!(s.u, vec![0.25, 0.75]);
    }
}
