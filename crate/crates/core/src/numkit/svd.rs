//! One-sided (Hestenes) Jacobi SVD for complex matrices.

use super::cmat::{inner, norm, CMat, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U·diag(sigma)·Vᴴ` with `k = min(rows, cols)` columns in `U` and `V`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMat,
    pub sigma: Vec<f64>,
    pub v: CMat,
}

impl Svd {
    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `rank_tol · σ_max`.
    pub fn rank(&self, rank_tol: f64) -> usize {
        let thr = rank_tol * self.sigma_max();
        self.sigma.iter().filter(|&&s| s > thr && s > 0.0).count()
    }
}

pub fn svd(a: &CMat) -> Result<Svd> {
    if a.rows() >= a.cols() {
        tall_svd(a)
    } else {
        let t = tall_svd(&a.adjoint())?;
        Ok(Svd { u: t.v, sigma: t.sigma, v: t.u })
    }
}

fn tall_svd(a: &CMat) -> Result<Svd> {
    let m = a.rows();
    let n = a.cols();
    let mut w: Vec<Vec<C64>> = (0..n).map(|j| a.col(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n).map(|j| super::eig::unit(n, j)).collect();

    // Rounding in an m-term inner product is about m·ε; pairs coupled below
    // ε² of the total energy are noise.
    let rel = m as f64 * f64::EPSILON;
    let floor = f64::EPSILON * f64::EPSILON * w.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                // γ = w_pᴴ w_q
                let gamma = inner(&w[q], &w[p]);
                let g = gamma.norm();
                if g <= floor || g <= rel * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase_conj = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 { 1.0 } else { zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt()) };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s, phase_conj);
                rotate_pair(&mut v, p, q, c, s, phase_conj);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence("one-sided Jacobi SVD"));
    }

    let sig: Vec<f64> = w.iter().map(|c| norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sig[j].total_cmp(&sig[i]).then(i.cmp(&j)));
    let sigma: Vec<f64> = order.iter().map(|&i| sig[i]).collect();
    let smax = sigma.first().copied().unwrap_or(0.0);
    let tiny = f64::EPSILON * smax * m as f64;

    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut deferred = Vec::new();
    for (slot, &i) in order.iter().enumerate() {
        if sig[i] > tiny && sig[i] > 0.0 {
            u_cols.push(w[i].iter().map(|&z| z / sig[i]).collect());
        } else {
            u_cols.push(vec![ZERO; m]);
            deferred.push(slot);
        }
    }
    // Left vectors of negligible singular values: orthonormal completion from
    // the standard basis vector with the largest component outside the span
    // of the others. The squared components sum to at least 1, so the best
    // one keeps a norm of at least 1/√m.
    for slot in deferred {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for candidate in 0..m {
            let mut x = super::eig::unit(m, candidate);
            for _ in 0..2 {
                for (k, col) in u_cols.iter().enumerate() {
                    if k == slot {
                        continue;
                    }
                    let proj = inner(&x, col);
                    for (xi, &ci) in x.iter_mut().zip(col) {
                        *xi -= proj * ci;
                    }
                }
            }
            let nx = norm(&x);
            if best.as_ref().is_none_or(|(b, _)| nx > *b) {
                best = Some((nx, x));
            }
        }
        let (nx, x) = best.expect("m ≥ 1");
        u_cols[slot] = x.iter().map(|&z| z / nx).collect();
    }

    let u = CMat::from_columns(m, &u_cols)?;
    let v_sorted: Vec<Vec<C64>> = order.iter().map(|&i| v[i].clone()).collect();
    let v = CMat::from_columns(n, &v_sorted)?;
    Ok(Svd { u, sigma, v })
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase_conj: C64) {
    let (lo, hi) = cols.split_at_mut(q);
    let xp = &mut lo[p];
    let xq = &mut hi[0];
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bp = *b * phase_conj;
        let na = *a * c - bp * s;
        let nb = *a * s + bp * c;
        *a = na;
        *b = nb;
    }
}
