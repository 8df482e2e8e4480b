//! Dense complex linear algebra used by every other layer.
//!
//! Everything here is a pure function of its inputs. The eigensolver and the
//! SVD are Jacobi methods with a fixed sweep order, so results are
//! reproducible bit-for-bit for identical input bytes.

mod cmat;
mod eig;
mod svd;

use serde::{Deserialize, Serialize};

pub use cmat::{inner, norm, norm_sq, vec_add, vec_sub, CMat, MatrixJson, C64, ONE, ZERO};
pub use eig::{asymmetry, checked_hermitian, herm_eig, herm_eig_with_tol, hermitian_norm, HermEig};
pub use svd::{svd, Svd};

use crate::error::{Error, Result};

/// Default relative truncation for [`pinv`]: `ε · max(rows, cols)`.
pub fn default_rank_tol(a: &CMat) -> f64 {
    f64::EPSILON * a.rows().max(a.cols()) as f64
}

/// Moore–Penrose pseudoinverse; singular values `≤ rank_tol · σ_max` are dropped.
pub fn pinv(a: &CMat, rank_tol: f64) -> Result<CMat> {
    let s = svd(a)?;
    Ok(pinv_from_svd(&s, rank_tol))
}

pub fn pinv_from_svd(s: &Svd, rank_tol: f64) -> CMat {
    let m = s.u.rows();
    let n = s.v.rows();
    let thr = rank_tol * s.sigma_max();
    let mut out = CMat::zeros(n, m);
    for (k, &sig) in s.sigma.iter().enumerate() {
        if sig <= thr || sig == 0.0 {
            continue;
        }
        let inv = 1.0 / sig;
        for i in 0..n {
            let vik = s.v[(i, k)] * inv;
            for j in 0..m {
                out[(i, j)] += vik * s.u[(j, k)].conj();
            }
        }
    }
    out
}

/// Largest singular value.
pub fn op_norm(a: &CMat) -> Result<f64> {
    Ok(svd(a)?.sigma_max())
}

/// Orthonormal basis (as columns) of the range of `a`, rank decided by `rank_tol`.
pub fn range_basis(a: &CMat, rank_tol: f64) -> Result<CMat> {
    let s = svd(a)?;
    let r = s.rank(rank_tol);
    Ok(s.u.select_cols(&(0..r).collect::<Vec<_>>()))
}

/// Orthogonal projector onto the null space of `a`: `I − A†A`.
pub fn null_projector(a: &CMat, rank_tol: f64) -> Result<CMat> {
    let s = svd(a)?;
    let n = a.cols();
    let r = s.rank(rank_tol);
    let mut p = CMat::identity(n);
    for k in 0..r {
        for i in 0..n {
            for j in 0..n {
                p[(i, j)] -= s.v[(i, k)] * s.v[(j, k)].conj();
            }
        }
    }
    Ok(p)
}

/// Outcome of testing `A ≼ B` in the Loewner order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoewnerReport {
    /// Smallest eigenvalue of `B − A`.
    pub min_eig: f64,
    /// `1 + ‖A‖ + ‖B‖`.
    pub scale: f64,
    pub pass: bool,
}

impl LoewnerReport {
    /// `min_eig / scale`, the quantity compared against `-tol`.
    pub fn relative_margin(&self) -> f64 {
        self.min_eig / self.scale
    }
}

pub fn loewner_le(a: &CMat, b: &CMat, tol: f64) -> Result<LoewnerReport> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "Loewner comparison of {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let a = checked_hermitian(a, tol)?;
    let b = checked_hermitian(b, tol)?;
    let scale = 1.0 + herm_eig(&a)?.norm() + herm_eig(&b)?.norm();
    let min_eig = herm_eig(&(&b - &a))?.min();
    Ok(LoewnerReport { min_eig, scale, pass: min_eig >= -tol * scale })
}

/// A real function usable in the spectral calculus.
pub trait SpectralFunction {
    /// Closed domain interval; either end may be infinite.
    fn domain(&self) -> (f64, f64);
    fn eval(&self, x: f64) -> f64;
}

/// Eigenvalues within this multiple of `ε‖A‖` of zero are evaluated at zero.
pub const ZERO_SNAP: f64 = 128.0;

/// `h(A) = V · diag(h(λ)) · Vᴴ`.
///
/// Eigenvalues within `tol · (1 + ‖A‖)` of the domain are clamped onto it;
/// anything farther out is a `DomainViolation`. Eigenvalues within
/// `ZERO_SNAP·ε‖A‖` of zero are rounding residue of a singular `A` and are
/// set to zero, so functions with infinite slope there (`−√x`) do not blow
/// that residue up to `√ε`.
pub fn matfunc<F: SpectralFunction + ?Sized>(h: &F, a: &CMat, tol: f64) -> Result<CMat> {
    let e = herm_eig_with_tol(a, tol)?;
    let (lo, hi) = h.domain();
    let slack = tol * (1.0 + e.norm());
    for &l in &e.values {
        if l < lo - slack || l > hi + slack {
            return Err(Error::DomainViolation { value: l, lo, hi });
        }
    }
    let snap = ZERO_SNAP * f64::EPSILON * e.norm();
    Ok(e.reassemble(|l| {
        let l = if l.abs() <= snap { 0.0 } else { l };
        h.eval(l.clamp(lo, hi))
    }))
}

/// Extreme values of `⟨Qx, x⟩ / ⟨Dx, x⟩` over nonzero `x` in the column span of `w`.
///
/// Solved as the Hermitian-definite pencil `(WᴴQW, WᴴDW)` by whitening with
/// the inverse square root of the (checked positive definite) denominator.
pub fn rayleigh_extrema_on_subspace(q: &CMat, d: &CMat, w: &CMat, tol: f64) -> Result<(f64, f64)> {
    if q.rows() != d.rows() || q.cols() != d.cols() || w.rows() != q.cols() {
        return Err(Error::DimensionMismatch(format!(
            "pencil {}x{} / {}x{} on a basis with {} rows",
            q.rows(),
            q.cols(),
            d.rows(),
            d.cols(),
            w.rows()
        )));
    }
    if w.cols() == 0 {
        return Err(Error::DimensionMismatch("empty subspace basis".into()));
    }
    let q = checked_hermitian(q, tol)?;
    let d = checked_hermitian(d, tol)?;
    let wh = w.adjoint();
    let qw = (&(&wh * &q) * w).hermitian_part();
    let dw = (&(&wh * &d) * w).hermitian_part();
    let de = herm_eig(&dw)?;
    let scale = 1.0 + de.norm();
    if !(de.min() > tol * scale) {
        return Err(Error::SingularDenominator { min_eig: de.min() });
    }
    let inv_sqrt = de.reassemble(|l| 1.0 / l.sqrt());
    let whitened = (&(&inv_sqrt * &qw) * &inv_sqrt).hermitian_part();
    let e = herm_eig(&whitened)?;
    Ok((e.min(), e.max()))
}
