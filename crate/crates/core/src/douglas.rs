//! Douglas factorization `L₁ = L₂X` and the K-duals it produces.
//!
//! When `R(L₁) ⊆ R(L₂)` the reduced solution is `X = L₂†L₁`: it has the same
//! kernel as `L₁`, its range lies in `R(L₂ᴴ)`, and `‖X‖²` is the smallest `α`
//! with `L₁L₁ᴴ ≼ α·L₂L₂ᴴ`. For `L₂ = T_F` and `L₁ = K` this is `X_F`, whose
//! adjoint columns form the canonical K-dual and whose norm gives the optimal
//! lower K-frame bound `‖X_F‖⁻²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{DualPair, KFrame, OperatorK, FRAME_RANK_TOL};
use crate::numkit::{loewner_le, null_projector, op_norm, pinv, svd, CMat, LoewnerReport};

/// Multiplicative gap used to show `‖X‖²` cannot be lowered.
pub const INFIMUM_DELTA: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct DouglasSolution {
    pub x: CMat,
    /// `‖L₂X − L₁‖`.
    pub factor_residual: f64,
    /// `‖X‖²`.
    pub norm_sq: f64,
    /// `‖P_N(L₁) − P_N(X)‖`.
    pub kernel_match: f64,
    /// `‖(I − L₂†L₂)X‖`.
    pub range_residual: f64,
    pub range_ok: bool,
}

pub(crate) struct ReducedSolution {
    pub x: CMat,
    pub inclusion_residual: f64,
}

/// `X = L₂†L₁` and `‖(I − L₂L₂†)L₁‖ = ‖L₁ − L₂X‖`.
pub(crate) fn reduced_solution(l1: &CMat, l2: &CMat) -> Result<ReducedSolution> {
    if l1.rows() != l2.rows() {
        return Err(Error::DimensionMismatch(format!("L1 has {} rows, L2 has {}", l1.rows(), l2.rows())));
    }
    let x = &pinv(l2, FRAME_RANK_TOL)? * l1;
    let inclusion_residual = op_norm(&(l1 - &(l2 * &x)))?;
    Ok(ReducedSolution { x, inclusion_residual })
}

pub fn douglas_solve(l1: &CMat, l2: &CMat, tol: f64) -> Result<DouglasSolution> {
    let sol = reduced_solution(l1, l2)?;
    let allowed = tol * (1.0 + op_norm(l1)?);
    if !(sol.inclusion_residual <= allowed) {
        return Err(Error::NotSolvable { residual: sol.inclusion_residual, allowed });
    }
    let x = sol.x;
    let x_norm = op_norm(&x)?;
    let kernel_match = op_norm(&(&null_projector(l1, FRAME_RANK_TOL)? - &null_projector(&x, FRAME_RANK_TOL)?))?;
    let range_residual = op_norm(&(&null_projector(l2, FRAME_RANK_TOL)? * &x))?;
    Ok(DouglasSolution {
        factor_residual: sol.inclusion_residual,
        norm_sq: x_norm * x_norm,
        kernel_match,
        range_ok: range_residual <= tol * (1.0 + x_norm),
        range_residual,
        x,
    })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct InfimumReport {
    pub norm_sq: f64,
    /// `L₁L₁ᴴ ≼ ‖X‖²·L₂L₂ᴴ`; must pass.
    pub at_norm_sq: LoewnerReport,
    /// Same comparison at `‖X‖²(1 − δ)` after whitening by `L₂L₂ᴴ` on its range
    /// and dividing by `‖X‖²`; must fail. `None` when `X = 0`, where no smaller `α > 0` exists.
    pub below_norm_sq: Option<LoewnerReport>,
    pub delta: f64,
    pub pass: bool,
}

/// Certifies `‖X‖² = inf{α > 0 : L₁L₁ᴴ ≼ α·L₂L₂ᴴ}` from both sides.
///
/// The lower side is tested in the coordinates `Γ = Σ⁻¹U_rᴴ` of the range
/// of `L₂`, where `L₂L₂ᴴ` becomes the identity. Congruence preserves the
/// Loewner order, and after dividing by `‖X‖²` the margin there is `δ`
/// regardless of how badly `L₂` is conditioned or how small `X` is.
pub fn douglas_infimum_check(l1: &CMat, l2: &CMat, x: &CMat, tol: f64) -> Result<InfimumReport> {
    let x_norm = op_norm(x)?;
    let norm_sq = x_norm * x_norm;
    let a = (l1 * &l1.adjoint()).hermitian_part();
    let b = (l2 * &l2.adjoint()).hermitian_part();
    let at_norm_sq = loewner_le(&a, &b.scale(norm_sq), tol)?;

    let below_norm_sq = if norm_sq > 0.0 {
        let s = svd(l2)?;
        let r = s.rank(FRAME_RANK_TOL);
        let gamma = CMat::from_fn(r, l2.rows(), |i, j| s.u[(j, i)].conj() / s.sigma[i]);
        let gl1 = &gamma * l1;
        // Divided by ‖X‖² so the δ gap does not shrink with ‖X‖.
        let whitened = (&gl1 * &gl1.adjoint()).hermitian_part().scale(1.0 / norm_sq);
        Some(loewner_le(&whitened, &CMat::identity(r).scale(1.0 - INFIMUM_DELTA), tol)?)
    } else {
        None
    };
    let pass = at_norm_sq.pass && below_norm_sq.is_none_or(|r| !r.pass);
    Ok(InfimumReport { norm_sq, at_norm_sq, below_norm_sq, delta: INFIMUM_DELTA, pass })
}

/// `X_F`, the reduced solution of `T_F X = K`.
pub fn canonical_xf(f: &KFrame, k: &OperatorK, tol: f64) -> Result<CMat> {
    if f.dim() != k.dim() {
        return Err(Error::DimensionMismatch(format!(
            "frame in dimension {} with K acting on dimension {}",
            f.dim(),
            k.dim()
        )));
    }
    match douglas_solve(k.matrix(), f.synthesis_matrix(), tol) {
        Ok(sol) => Ok(sol.x),
        Err(Error::NotSolvable { residual, .. }) => Err(Error::NotKFrame { residual }),
        Err(e) => Err(e),
    }
}

/// `{X_F* δ_i}`: the canonical K-dual.
pub fn canonical_kdual(f: &KFrame, k: &OperatorK, tol: f64) -> Result<DualPair> {
    let xf = canonical_xf(f, k, tol)?;
    DualPair::new(f.clone(), xf.adjoint(), k.clone(), tol)
}

/// The K-dual from `X = X_F + (I − T_F†T_F)Z`, for any `n × d` matrix `Z`.
pub fn parametrized_kdual(f: &KFrame, k: &OperatorK, z: &CMat, tol: f64) -> Result<DualPair> {
    if z.rows() != f.count() || z.cols() != f.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Z must be {}x{}, got {}x{}",
            f.count(),
            f.dim(),
            z.rows(),
            z.cols()
        )));
    }
    let xf = canonical_xf(f, k, tol)?;
    let p = null_projector(f.synthesis_matrix(), FRAME_RANK_TOL)?;
    let x = &xf + &(&p * z);
    DualPair::new(f.clone(), x.adjoint(), k.clone(), tol)
}
