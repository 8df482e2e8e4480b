//! Cyclic complex Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real Jacobi rotation. The sweep order
//! is fixed, so the output is a deterministic function of the input bytes.

use super::cmat::{CMat, C64, ONE, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermEig {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Spectral norm of the decomposed matrix.
    pub fn norm(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// `V · diag(g(λ)) · Vᴴ`, symmetrized.
    pub fn reassemble(&self, g: impl Fn(f64) -> f64) -> CMat {
        let n = self.values.len();
        let v = &self.vectors;
        let weights: Vec<f64> = self.values.iter().map(|&l| g(l)).collect();
        let mut out = CMat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for (k, &w) in weights.iter().enumerate() {
                    if w != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * w;
                    }
                }
                if i == j {
                    out[(i, i)] = C64::new(acc.re, 0.0);
                } else {
                    out[(i, j)] = acc;
                    out[(j, i)] = acc.conj();
                }
            }
        }
        out
    }
}

/// Returns the Frobenius norm of `A − Aᴴ`.
pub fn asymmetry(a: &CMat) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a[(i, j)] - a[(j, i)].conj()).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Checks Hermiticity against `tol·(1 + ‖A‖_F)` and returns the symmetrized copy.
pub fn checked_hermitian(a: &CMat, tol: f64) -> Result<CMat> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Hermitian matrix must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let asym = asymmetry(a);
    let allowed = tol * (1.0 + a.frobenius_norm());
    if !(asym <= allowed) {
        return Err(Error::NotHermitian { asymmetry: asym, allowed });
    }
    Ok(a.hermitian_part())
}

pub fn herm_eig(a: &CMat) -> Result<HermEig> {
    herm_eig_with_tol(a, crate::DEFAULT_TOL)
}

pub fn herm_eig_with_tol(a: &CMat, tol: f64) -> Result<HermEig> {
    let a = checked_hermitian(a, tol)?;
    jacobi(a)
}

fn jacobi(mut a: CMat) -> Result<HermEig> {
    let n = a.rows();
    let mut v = CMat::identity(n);
    let scale = a.frobenius_norm();
    let skip_below = f64::EPSILON * 1e-2 * scale;

    let mut converged = scale == 0.0 || n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= skip_below || mag == 0.0 {
                    continue;
                }
                rotated = true;
                rotate(&mut a, &mut v, p, q, apq, mag);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence("Hermitian Jacobi eigensolver"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.select_cols(&order);
    Ok(HermEig { values, vectors })
}

fn rotate(a: &mut CMat, v: &mut CMat, p: usize, q: usize, apq: C64, mag: f64) {
    let n = a.rows();
    let phase_conj = (apq / mag).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = diag(1, e^{-iφ}) · R(c, s) acting on coordinates (p, q).
    let j_pp = C64::new(c, 0.0);
    let j_pq = C64::new(s, 0.0);
    let j_qp = phase_conj * (-s);
    let j_qq = phase_conj * c;

    // A ← A·J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    // A ← Jᴴ·A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Spectral norm of a Hermitian matrix.
pub fn hermitian_norm(a: &CMat) -> Result<f64> {
    Ok(herm_eig(a)?.norm())
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<C64> {
    let mut e = vec![ZERO; n];
    e[i] = ONE;
    e
}
