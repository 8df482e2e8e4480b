//! The constants `v₊(F, K, J)` and `v₋(F, K, J)`.
//!
//! Both are extreme values of
//!
//! ```text
//!   ( Re Σ_{J^c} conj⟨f,f_i⟩⟨KK*f,f_i⟩ + ‖S_J f‖² ) / ‖KK*f‖²
//! ```
//!
//! over `f ≠ 0`. For a Parseval K-frame the numerator and the denominator
//! only see the `R(K)` component of `f`, so the ratio is taken over `R(K)`
//! where the denominator is definite.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{partial_frame_operator, require_parseval, IndexSubset, KFrame, OperatorK, FRAME_RANK_TOL};
use crate::numkit::{rayleigh_extrema_on_subspace, svd, CMat, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VConstants {
    pub v_plus: f64,
    pub v_minus: f64,
    pub subset: IndexSubset,
    /// `dim R(K)`.
    pub restricted_dim: usize,
}

/// Computes `v±` in the coordinates `f = U_r Σ⁻² y` where `K = U_r Σ V_rᴴ`.
///
/// There `‖KK*f‖ = ‖y‖`, and with `B = Σ⁻¹U_rᴴT_F`, `R_J = B_J B_Jᴴ` and
/// `M = Σ R_J Σ⁻¹` the numerator becomes `yᴴ(I − Herm M + MᴴM)y`. Entries of
/// `M` are `σ_a R_J[a,b] / σ_b`, so nothing squares the condition number of
/// `K`, which the textbook pencil `(Q, (KK*)²)` would.
pub fn v_constants(f_frame: &KFrame, k: &OperatorK, j: &IndexSubset, tol: f64) -> Result<VConstants> {
    j.check_against(f_frame.count())?;
    let s = svd(k.matrix())?;
    if s.sigma_max() == 0.0 {
        return Err(Error::ZeroOperator);
    }
    require_parseval(f_frame, k, tol)?;
    let r = s.rank(FRAME_RANK_TOL);
    let t = f_frame.synthesis_matrix();
    let n = f_frame.count();
    let b = CMat::from_fn(r, n, |a, i| {
        let mut acc = C64::new(0.0, 0.0);
        for row in 0..t.rows() {
            acc += s.u[(row, a)].conj() * t[(row, i)];
        }
        acc / s.sigma[a]
    });
    let bj = b.select_cols(j.indices());
    let rj = &bj * &bj.adjoint();
    let m = CMat::from_fn(r, r, |a, c| rj[(a, c)] * (s.sigma[a] / s.sigma[c]));
    let q = &(&CMat::identity(r) - &m.hermitian_part()) + &(&m.adjoint() * &m);
    let id = CMat::identity(r);
    let (v_minus, v_plus) = rayleigh_extrema_on_subspace(&q.hermitian_part(), &id, &id, tol)?;
    Ok(VConstants { v_plus, v_minus, subset: j.clone(), restricted_dim: r })
}

/// Same constants from the pencil `(Herm(S_{J^c}KK*) + S_J², (KK*)²)` on an
/// orthonormal basis of `R(K)`. Loses accuracy like `cond(K)⁴·ε`; kept as an
/// independent route for cross-checks.
pub fn v_constants_direct(f_frame: &KFrame, k: &OperatorK, j: &IndexSubset, tol: f64) -> Result<VConstants> {
    j.check_against(f_frame.count())?;
    let s = svd(k.matrix())?;
    if s.sigma_max() == 0.0 {
        return Err(Error::ZeroOperator);
    }
    require_parseval(f_frame, k, tol)?;
    let r = s.rank(FRAME_RANK_TOL);
    let w = s.u.select_cols(&(0..r).collect::<Vec<_>>());
    let kk = k.gram();
    let sj = partial_frame_operator(f_frame, j)?;
    let sjc = partial_frame_operator(f_frame, &j.complement())?;
    let q = &(&sjc * &kk).hermitian_part() + &(&sj * &sj).hermitian_part();
    let d = (&kk * &kk).hermitian_part();
    let (v_minus, v_plus) = rayleigh_extrema_on_subspace(&q, &d, &w, tol)?;
    Ok(VConstants { v_plus, v_minus, subset: j.clone(), restricted_dim: r })
}

/// The numerator/denominator ratio at a single vector, straight from the
/// frame coefficients. `None` when `KK*f = 0`.
pub fn v_ratio_at(f_frame: &KFrame, k: &OperatorK, j: &IndexSubset, f: &[C64]) -> Result<Option<f64>> {
    let kkf = k.gram().mul_vec(f)?;
    let den = crate::numkit::norm_sq(&kkf);
    if den == 0.0 {
        return Ok(None);
    }
    let t = f_frame.synthesis_matrix();
    let coeff = t.adjoint_mul_vec(f)?;
    let kcoeff = t.adjoint_mul_vec(&kkf)?;
    let mut sj_f = vec![C64::new(0.0, 0.0); f.len()];
    let mut cross = C64::new(0.0, 0.0);
    for i in 0..f_frame.count() {
        if j.contains(i) {
            for (row, o) in sj_f.iter_mut().enumerate() {
                *o += coeff[i] * t[(row, i)];
            }
        } else {
            cross += coeff[i].conj() * kcoeff[i];
        }
    }
    Ok(Some((cross.re + crate::numkit::norm_sq(&sj_f)) / den))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Thm27Report {
    pub v: VConstants,
    pub v_complement: VConstants,
    pub k_norm: f64,
    pub k_pinv_norm: f64,
    /// `‖K‖‖K†‖(1 + ‖K‖‖K†‖)`, the bound the argument establishes.
    pub proof_bound: f64,
    /// `‖K‖‖K†‖(1 + ‖K‖)`, as printed in the statement; recorded, not asserted.
    pub stated_bound: f64,
    pub stated_bound_held: bool,
    /// (i) `3/4 ≤ v₋ ≤ v₊ ≤ proof_bound`.
    pub bounds_ok: bool,
    /// (ii) `v±(J) = v±(J^c)`.
    pub symmetric_ok: bool,
    /// (iii) `v± = 1` for `J ∈ {∅, I}`; `None` for other subsets.
    pub trivial_ok: Option<bool>,
    pub pass: bool,
}

pub fn check_thm_2_7(f_frame: &KFrame, k: &OperatorK, j: &IndexSubset, tol: f64) -> Result<Thm27Report> {
    let v = v_constants(f_frame, k, j, tol)?;
    let v_complement = v_constants(f_frame, k, &j.complement(), tol)?;
    let s = svd(k.matrix())?;
    let r = s.rank(FRAME_RANK_TOL);
    let k_norm = s.sigma[0];
    let k_pinv_norm = 1.0 / s.sigma[r - 1];
    let kappa = k_norm * k_pinv_norm;
    let proof_bound = kappa * (1.0 + kappa);
    let stated_bound = kappa * (1.0 + k_norm);

    let slack = |x: f64| tol * (1.0 + x.abs());
    let bounds_ok = v.v_minus >= 0.75 - slack(0.75)
        && v.v_minus <= v.v_plus + slack(v.v_plus)
        && v.v_plus <= proof_bound + slack(proof_bound);
    let symmetric_ok = (v.v_plus - v_complement.v_plus).abs() <= slack(v.v_plus)
        && (v.v_minus - v_complement.v_minus).abs() <= slack(v.v_minus);
    let trivial_ok = (j.is_empty() || j.len() == j.count())
        .then(|| (v.v_plus - 1.0).abs() <= 2.0 * tol && (v.v_minus - 1.0).abs() <= 2.0 * tol);
    let pass = bounds_ok && symmetric_ok && trivial_ok.unwrap_or(true);
    Ok(Thm27Report {
        stated_bound_held: v.v_plus <= stated_bound + slack(stated_bound),
        v,
        v_complement,
        k_norm,
        k_pinv_norm,
        proof_bound,
        stated_bound,
        bounds_ok,
        symmetric_ok,
        trivial_ok,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genlab::{random_operator, random_parseval_kframe, random_unit_vector, SeededRng};

    const TOL: f64 = 1e-9;

    fn setup(seed: u64, d: usize, n: usize, r: usize) -> (KFrame, OperatorK, SeededRng) {
        let mut rng = SeededRng::new(seed);
        let k = random_operator(&mut rng, d, r).unwrap();
        let f = random_parseval_kframe(&mut rng, &k, n).unwrap();
        (f, k, rng)
    }

    #[test]
    fn trivial_subsets_give_one() {
        let (f, k, _) = setup(1, 4, 6, 3);
        for j in [IndexSubset::empty(6), IndexSubset::all(6)] {
            let v = v_constants(&f, &k, &j, TOL).unwrap();
            assert!((v.v_plus - 1.0).abs() < 1e-12 && (v.v_minus - 1.0).abs() < 1e-12, "{v:?}");
            assert_eq!(v.restricted_dim, 3);
        }
    }

    #[test]
    fn scaled_and_direct_routes_agree_on_well_conditioned_k() {
        let mut rng = SeededRng::new(2);
        let k = crate::genlab::operator_with_singular_values(&mut rng, 4, &[1.5, 1.0, 0.8]).unwrap();
        let f = random_parseval_kframe(&mut rng, &k, 7).unwrap();
        let j = IndexSubset::new(vec![0, 2, 5], 7).unwrap();
        let a = v_constants(&f, &k, &j, TOL).unwrap();
        let b = v_constants_direct(&f, &k, &j, TOL).unwrap();
        assert!((a.v_plus - b.v_plus).abs() < 1e-10 && (a.v_minus - b.v_minus).abs() < 1e-10);
    }

    #[test]
    fn ratio_samples_lie_between_the_constants() {
        let (f, k, mut rng) = setup(3, 3, 5, 3);
        let j = IndexSubset::new(vec![1, 3], 5).unwrap();
        let v = v_constants(&f, &k, &j, TOL).unwrap();
        for _ in 0..200 {
            let x = random_unit_vector(&mut rng, 3);
            let q = v_ratio_at(&f, &k, &j, &x).unwrap().unwrap();
            assert!(q >= v.v_minus - 1e-10 && q <= v.v_plus + 1e-10);
        }
    }

    #[test]
    fn report_on_random_instance() {
        let (f, k, _) = setup(4, 5, 8, 4);
        let r = check_thm_2_7(&f, &k, &IndexSubset::new(vec![0, 1, 7], 8).unwrap(), TOL).unwrap();
        assert!(r.pass && r.trivial_ok.is_none(), "{r:?}");
        assert!(r.v.v_minus >= 0.75 - 1e-12);
    }

    #[test]
    fn zero_operator_is_rejected() {
        let k = OperatorK::new(CMat::zeros(2, 2)).unwrap();
        let f = KFrame::new(CMat::zeros(2, 3)).unwrap();
        assert!(matches!(v_constants(&f, &k, &IndexSubset::empty(3), TOL), Err(Error::ZeroOperator)));
    }
}
