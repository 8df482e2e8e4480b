//! Reference computations that avoid the library's eigen/SVD/pinv routes.
#![allow(dead_code)]

use kframes_core::numkit::{CMat, C64};

/// Inverse by Gauss–Jordan elimination with partial pivoting.
pub fn gauss_jordan_inverse(a: &CMat) -> CMat {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut m: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            let mut row: Vec<C64> = (0..n).map(|j| a[(i, j)]).collect();
            row.extend((0..n).map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm())).unwrap();
        m.swap(col, piv);
        let p = m[col][col];
        assert!(p.norm() > 0.0, "singular matrix");
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let factor = m[r][col];
                if factor != C64::new(0.0, 0.0) {
                    let pivot_row = m[col].clone();
                    for (v, pv) in m[r].iter_mut().zip(pivot_row) {
                        *v -= factor * pv;
                    }
                }
            }
        }
    }
    CMat::from_fn(n, n, |i, j| m[i][n + j])
}

/// Largest eigenvalue of a Hermitian positive semidefinite matrix by power
/// iteration, finished with a Rayleigh quotient.
pub fn power_iteration_max(a: &CMat, iters: usize) -> f64 {
    let n = a.rows();
    let mut x: Vec<C64> = (0..n).map(|i| C64::new(1.0 + 0.37 * i as f64, 0.11 * (i as f64).sin())).collect();
    let mut lambda = 0.0;
    for _ in 0..iters {
        let y = a.mul_vec(&x).unwrap();
        let ny = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if ny == 0.0 {
            return 0.0;
        }
        let nx2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        lambda = x.iter().zip(&y).map(|(xi, yi)| (xi.conj() * yi).re).sum::<f64>() / nx2;
        x = y.into_iter().map(|z| z / ny).collect();
    }
    lambda
}

/// `‖A‖₂` as the square root of the top eigenvalue of `AᴴA`.
pub fn spectral_norm(a: &CMat, iters: usize) -> f64 {
    power_iteration_max(&(&a.adjoint() * a), iters).max(0.0).sqrt()
}

/// `Σ_{i∈J} a_i conj(b_i)` written out.
pub fn sum_over(j: &[usize], a: &[C64], b: &[C64]) -> C64 {
    j.iter().map(|&i| a[i] * b[i].conj()).fold(C64::new(0.0, 0.0), |s, z| s + z)
}

/// `⟨f, f_i⟩` for every column `f_i` of `t`.
pub fn coefficients(t: &CMat, f: &[C64]) -> Vec<C64> {
    (0..t.cols()).map(|i| (0..t.rows()).map(|r| f[r] * t[(r, i)].conj()).sum()).collect()
}

/// `Σ_{i∈J} c_i f_i`.
pub fn combine(t: &CMat, j: &[usize], c: &[C64]) -> Vec<C64> {
    (0..t.rows()).map(|r| j.iter().map(|&i| c[i] * t[(r, i)]).sum()).collect()
}

pub fn norm_sq(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}
