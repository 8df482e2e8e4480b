//! Duality identities and the Parseval K-frame identities.
//!
//! Every checker evaluates its two sides from explicit coefficient sums and
//! again through the operators `M_J`, `S_J`, `KK*`; the gap between the two
//! routes is recorded as `path_err`.

use serde::{Deserialize, Serialize};

use super::report::{IdentityReport, InequalityReport};
use crate::douglas::canonical_xf;
use crate::error::{Error, Result};
use crate::frame::{
    analysis, frame_operator, mixed_operator, partial_frame_operator, require_parseval, DualPair, IndexSubset, KFrame,
    OperatorK, FRAME_RANK_TOL,
};
use crate::numkit::{inner, norm_sq, op_norm, pinv, range_basis, svd, CMat, C64, ZERO};

fn check_vector(d: usize, f: &[C64]) -> Result<()> {
    if f.len() != d {
        return Err(Error::DimensionMismatch(format!("vector of length {} in dimension {d}", f.len())));
    }
    Ok(())
}

/// `Σ_{i∈J} c_i f_i`.
fn partial_synthesis(t: &CMat, j: &IndexSubset, c: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; t.rows()];
    for &i in j.indices() {
        for (r, o) in out.iter_mut().enumerate() {
            *o += c[i] * t[(r, i)];
        }
    }
    out
}

/// `Σ_{i∈J} a_i · conj(b_i)`.
fn sum_conj(j: &IndexSubset, a: &[C64], b: &[C64]) -> C64 {
    j.indices().iter().map(|&i| a[i] * b[i].conj()).sum()
}

/// `(Σ_J ⟨f,g_i⟩·conj⟨Kf,f_i⟩) − ‖Σ_J ⟨f,g_i⟩f_i‖² = (Σ_{J^c} conj⟨f,g_i⟩·⟨Kf,f_i⟩) − ‖Σ_{J^c} ⟨f,g_i⟩f_i‖²`.
pub fn check_thm_2_1(pair: &DualPair, j: &IndexSubset, f: &[C64], tol: f64) -> Result<IdentityReport> {
    j.check_against(pair.frame.count())?;
    check_vector(pair.frame.dim(), f)?;
    let t = pair.frame.synthesis_matrix();
    let jc = j.complement();
    let kf = pair.operator.apply(f)?;
    let c = pair.dual_vectors.adjoint_mul_vec(f)?; // ⟨f, g_i⟩
    let d = t.adjoint_mul_vec(&kf)?; // ⟨Kf, f_i⟩

    let lhs = sum_conj(j, &c, &d) - norm_sq(&partial_synthesis(t, j, &c));
    let rhs = sum_conj(&jc, &d, &c) - norm_sq(&partial_synthesis(t, &jc, &c));

    let mj = mixed_operator(pair, j)?.mul_vec(f)?;
    let mjc = mixed_operator(pair, &jc)?.mul_vec(f)?;
    let lhs_op = inner(&pair.operator.apply_adjoint(&mj)?, f) - norm_sq(&mj);
    let rhs_op = inner(f, &pair.operator.apply_adjoint(&mjc)?) - norm_sq(&mjc);

    Ok(IdentityReport::new(lhs, rhs, tol).with_path(lhs_op, rhs_op))
}

/// The `X_F` form: `⟨T_J(X_F f)_J, Kf⟩ − ‖T_J(X_F f)_J‖² = conj⟨T_{J^c}(X_F f)_{J^c}, Kf⟩ − ‖…‖²`.
pub fn check_cor_2_2(f_frame: &KFrame, k: &OperatorK, j: &IndexSubset, f: &[C64], tol: f64) -> Result<IdentityReport> {
    j.check_against(f_frame.count())?;
    check_vector(f_frame.dim(), f)?;
    let xf = canonical_xf(f_frame, k, tol)?;
    let t = f_frame.synthesis_matrix();
    let jc = j.complement();
    let kf = k.apply(f)?;
    let coeff = xf.mul_vec(f)?;

    let tj = partial_synthesis(t, j, &coeff);
    let tjc = partial_synthesis(t, &jc, &coeff);
    let lhs = inner(&tj, &kf) - norm_sq(&tj);
    let rhs = inner(&tjc, &kf).conj() - norm_sq(&tjc);

    // T_J · (rows J of X_F), applied as a matrix.
    let mj = (&t.select_cols(j.indices()) * &xf.select_rows(j.indices())).mul_vec(f)?;
    let mjc = (&t.select_cols(jc.indices()) * &xf.select_rows(jc.indices())).mul_vec(f)?;
    let lhs_op = inner(&k.apply_adjoint(&mj)?, f) - norm_sq(&mj);
    let rhs_op = inner(f, &k.apply_adjoint(&mjc)?) - norm_sq(&mjc);

    Ok(IdentityReport::new(lhs, rhs, tol).with_path(lhs_op, rhs_op))
}

/// The weighted identity with weights `α_i` on one side and `1 − α_i` on the other.
pub fn check_thm_2_3(pair: &DualPair, alpha: &[C64], f: &[C64], tol: f64) -> Result<IdentityReport> {
    let n = pair.frame.count();
    if alpha.len() != n {
        return Err(Error::DimensionMismatch(format!("{} weights for {n} frame vectors", alpha.len())));
    }
    if alpha.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::Format("weights must be finite".into()));
    }
    check_vector(pair.frame.dim(), f)?;
    let t = pair.frame.synthesis_matrix();
    let all = IndexSubset::all(n);
    let kf = pair.operator.apply(f)?;
    let c = pair.dual_vectors.adjoint_mul_vec(f)?;
    let d = t.adjoint_mul_vec(&kf)?;
    let one = C64::new(1.0, 0.0);

    let ac: Vec<C64> = alpha.iter().zip(&c).map(|(&a, &ci)| a * ci).collect();
    let bc: Vec<C64> = alpha.iter().zip(&c).map(|(&a, &ci)| (one - a) * ci).collect();
    let lhs = sum_conj(&all, &ac, &d) - norm_sq(&partial_synthesis(t, &all, &ac));
    let rhs: C64 = (0..n).map(|i| (one - alpha[i].conj()) * c[i].conj() * d[i]).sum::<C64>()
        - norm_sq(&partial_synthesis(t, &all, &bc));

    let weighted = |w: &dyn Fn(usize) -> C64| -> CMat {
        let tw = CMat::from_fn(t.rows(), n, |r, i| t[(r, i)] * w(i));
        &tw * &pair.dual_vectors.adjoint()
    };
    let ma = weighted(&|i| alpha[i]).mul_vec(f)?;
    let mb = weighted(&|i| one - alpha[i]).mul_vec(f)?;
    let lhs_op = inner(&ma, &kf) - norm_sq(&ma);
    let rhs_op = inner(&kf, &mb) - norm_sq(&mb);

    Ok(IdentityReport::new(lhs, rhs, tol).with_path(lhs_op, rhs_op))
}

/// `S_X f = Σ_{i∈X} ⟨f,f_i⟩ f_i` from the analysis coefficients.
fn partial_frame_apply(t: &CMat, x: &IndexSubset, coeff: &[C64]) -> Vec<C64> {
    partial_synthesis(t, x, coeff)
}

/// Moving `E ⊆ J^c` into `J`: the energy split shifts by `2Re Σ_E ⟨f,f_i⟩·conj⟨KK*f,f_i⟩`.
pub fn check_thm_2_4(
    f_frame: &KFrame,
    k: &OperatorK,
    j: &IndexSubset,
    e: &IndexSubset,
    f: &[C64],
    tol: f64,
) -> Result<IdentityReport> {
    j.check_against(f_frame.count())?;
    e.check_against(f_frame.count())?;
    if let Some(i) = j.first_common(e) {
        return Err(Error::OverlappingSubsets(i));
    }
    check_vector(f_frame.dim(), f)?;
    require_parseval(f_frame, k, tol)?;
    let t = f_frame.synthesis_matrix();
    let jc = j.complement();
    let je = j.union(e)?;
    let jce = jc.difference(e)?;
    let kk = k.gram();
    let kkf = kk.mul_vec(f)?;
    let coeff = analysis(f_frame, f)?;
    let kcoeff = analysis(f_frame, &kkf)?;

    let lhs = norm_sq(&partial_frame_apply(t, &je, &coeff)) - norm_sq(&partial_frame_apply(t, &jce, &coeff));
    let cross = 2.0 * sum_conj(e, &coeff, &kcoeff).re;
    let rhs = norm_sq(&partial_frame_apply(t, j, &coeff)) - norm_sq(&partial_frame_apply(t, &jc, &coeff)) + cross;

    let sq = |x: &IndexSubset| -> Result<f64> { Ok(norm_sq(&partial_frame_operator(f_frame, x)?.mul_vec(f)?)) };
    let lhs_op = sq(&je)? - sq(&jce)?;
    let se_f = partial_frame_operator(f_frame, e)?.mul_vec(f)?;
    let rhs_op = sq(j)? - sq(&jc)? + 2.0 * inner(&se_f, &kkf).re;

    Ok(IdentityReport::real(lhs, rhs, tol).with_path(C64::new(lhs_op, 0.0), C64::new(rhs_op, 0.0)))
}

/// `Re(Σ_{J^c} ⟨f,f_i⟩·conj⟨KK*f,f_i⟩) + ‖S_J f‖² = Re(Σ_J …) + ‖S_{J^c} f‖² ≥ ¾‖KK*f‖²`.
pub fn check_thm_2_5(
    f_frame: &KFrame,
    k: &OperatorK,
    j: &IndexSubset,
    f: &[C64],
    tol: f64,
) -> Result<(IdentityReport, InequalityReport)> {
    j.check_against(f_frame.count())?;
    check_vector(f_frame.dim(), f)?;
    require_parseval(f_frame, k, tol)?;
    let t = f_frame.synthesis_matrix();
    let jc = j.complement();
    let kkf = k.gram().mul_vec(f)?;
    let coeff = analysis(f_frame, f)?;
    let kcoeff = analysis(f_frame, &kkf)?;

    let lhs = sum_conj(&jc, &coeff, &kcoeff).re + norm_sq(&partial_frame_apply(t, j, &coeff));
    let rhs = sum_conj(j, &coeff, &kcoeff).re + norm_sq(&partial_frame_apply(t, &jc, &coeff));

    let sj_f = partial_frame_operator(f_frame, j)?.mul_vec(f)?;
    let sjc_f = partial_frame_operator(f_frame, &jc)?.mul_vec(f)?;
    let lhs_op = inner(&sjc_f, &kkf).re + norm_sq(&sj_f);
    let rhs_op = inner(&sj_f, &kkf).re + norm_sq(&sjc_f);

    let eq = IdentityReport::real(lhs, rhs, tol).with_path(C64::new(lhs_op, 0.0), C64::new(rhs_op, 0.0));
    let bound = InequalityReport::new(0.75 * norm_sq(&kkf), 0.5 * (lhs + rhs), tol);
    Ok((eq, bound))
}

/// (i) `‖S_F f‖² ≤ ‖S_F‖·Σ|⟨f,f_i⟩|²`; (ii) `Σ|⟨f,f_i⟩|² ≤ ‖K†‖²‖X_F‖²‖S_F f‖²` on `R(K)`.
///
/// Clause (ii) is evaluated at the orthogonal projection of `f` onto `R(K)`.
pub fn check_lemma_2_6(
    f_frame: &KFrame,
    k: &OperatorK,
    f: &[C64],
    tol: f64,
) -> Result<(InequalityReport, InequalityReport)> {
    check_vector(f_frame.dim(), f)?;
    let xf = canonical_xf(f_frame, k, tol)?;
    let s = frame_operator(f_frame);
    let s_norm = op_norm(&s)?;

    let energy = |x: &[C64]| -> Result<f64> { Ok(norm_sq(&analysis(f_frame, x)?)) };
    let first = InequalityReport::new(norm_sq(&s.mul_vec(f)?), s_norm * energy(f)?, tol);

    let w = range_basis(k.matrix(), FRAME_RANK_TOL)?;
    let pf = w.mul_vec(&w.adjoint_mul_vec(f)?)?;
    let k_pinv = op_norm(&pinv(k.matrix(), FRAME_RANK_TOL)?)?;
    let x_norm = op_norm(&xf)?;
    let second =
        InequalityReport::new(energy(&pf)?, k_pinv * k_pinv * x_norm * x_norm * norm_sq(&s.mul_vec(&pf)?), tol);
    Ok((first, second))
}

/// Per-vector quantities shared by the equivalence corollaries.
struct SplitTerms {
    sj_sq: f64,
    sjc_sq: f64,
    a_j: C64,
    a_jc: C64,
    orth: C64,
    orth_alt: C64,
    scale: f64,
}

/// `S_J`, `S_{J^c}` and `S_{J^c}S_J` for one subset.
struct SplitOperators {
    j: IndexSubset,
    jc: IndexSubset,
    sjc_sj: CMat,
}

impl SplitOperators {
    fn new(f_frame: &KFrame, j: &IndexSubset) -> Result<Self> {
        let jc = j.complement();
        let sj = partial_frame_operator(f_frame, j)?;
        let sjc = partial_frame_operator(f_frame, &jc)?;
        Ok(SplitOperators { j: j.clone(), jc, sjc_sj: &sjc * &sj })
    }
}

fn split_terms(f_frame: &KFrame, kk: &CMat, kk_norm: f64, ops: &SplitOperators, f: &[C64]) -> Result<SplitTerms> {
    let t = f_frame.synthesis_matrix();
    let kkf = kk.mul_vec(f)?;
    let coeff = analysis(f_frame, f)?;
    let kcoeff = analysis(f_frame, &kkf)?;
    let sj_f = partial_frame_apply(t, &ops.j, &coeff);
    let sjc_f = partial_frame_apply(t, &ops.jc, &coeff);
    let a_j = sum_conj(&ops.j, &coeff, &kcoeff);
    let a_jc = sum_conj(&ops.jc, &coeff, &kcoeff);
    // ⟨f, S_{J^c} S_J f⟩, via the matrix product.
    let orth_alt = inner(f, &ops.sjc_sj.mul_vec(f)?);
    let sj_sq = norm_sq(&sj_f);
    let sjc_sq = norm_sq(&sjc_f);
    let scale = sj_sq + sjc_sq + a_j.norm() + a_jc.norm() + f64::EPSILON * kk_norm * kk_norm * norm_sq(f);
    Ok(SplitTerms { sj_sq, sjc_sq, a_j, a_jc, orth: inner(&sj_f, &sjc_f), orth_alt, scale })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cor28Report {
    pub v_plus: f64,
    pub v_minus: f64,
    /// (i) `v₊ = v₋ = 1`.
    pub cond_i: bool,
    /// (ii) `‖S_J f‖² = Re Σ_J …` for every batch vector.
    pub cond_ii: bool,
    /// (iii) the same for `J^c`.
    pub cond_iii: bool,
    pub worst_ii: f64,
    pub worst_iii: f64,
    pub agree: bool,
}

/// Three-way equivalence: `v₊ = v₋ = 1` against the per-vector identities,
/// the latter quantified over `batch`.
pub fn check_cor_2_8(
    f_frame: &KFrame,
    k: &OperatorK,
    j: &IndexSubset,
    batch: &[Vec<C64>],
    tol: f64,
) -> Result<Cor28Report> {
    j.check_against(f_frame.count())?;
    require_parseval(f_frame, k, tol)?;
    let v = super::vconst::v_constants(f_frame, k, j, tol)?;
    let kk = k.gram();
    let kk_norm = op_norm(&kk)?;
    let mut worst_ii: f64 = 0.0;
    let mut worst_iii: f64 = 0.0;
    let ops = SplitOperators::new(f_frame, j)?;
    for f in batch {
        check_vector(f_frame.dim(), f)?;
        let s = split_terms(f_frame, &kk, kk_norm, &ops, f)?;
        worst_ii = worst_ii.max((s.sj_sq - s.a_j.re).abs() / s.scale);
        worst_iii = worst_iii.max((s.sjc_sq - s.a_jc.re).abs() / s.scale);
    }
    let cond_i = (v.v_plus - 1.0).abs() <= 2.0 * tol && (v.v_minus - 1.0).abs() <= 2.0 * tol;
    let cond_ii = worst_ii <= tol;
    let cond_iii = worst_iii <= tol;
    Ok(Cor28Report {
        v_plus: v.v_plus,
        v_minus: v.v_minus,
        cond_i,
        cond_ii,
        cond_iii,
        worst_ii,
        worst_iii,
        agree: cond_i == cond_ii && cond_ii == cond_iii,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cor29Report {
    /// Relative residuals of conditions (i)–(iv), on a common scale.
    pub residuals: [f64; 4],
    /// Whether each of (i) `‖S_J f‖² = Σ_J …`, (ii) the `J^c` version,
    /// (iii) `S_J f ⟂ S_{J^c} f`, (iv) `f ⟂ S_{J^c} S_J f` holds.
    pub holds: [bool; 4],
    pub agree: bool,
}

/// Four-way equivalence for a single vector. Conditions (i) and (ii) are
/// complex equalities: the imaginary part of the sum has to vanish too.
/// A vector with no `R(K)` component above `tol·‖f‖` satisfies all four.
pub fn check_cor_2_9(f_frame: &KFrame, k: &OperatorK, j: &IndexSubset, f: &[C64], tol: f64) -> Result<Cor29Report> {
    j.check_against(f_frame.count())?;
    check_vector(f_frame.dim(), f)?;
    require_parseval(f_frame, k, tol)?;
    // Every term sees only the R(K) component of f. Dropping the rest keeps
    // the matrix-product route of (iv) from turning rounding noise into a verdict.
    let w = range_basis(k.matrix(), FRAME_RANK_TOL)?;
    let pf = w.mul_vec(&w.adjoint_mul_vec(f)?)?;
    if norm_sq(&pf) <= tol * tol * norm_sq(f) {
        return Ok(Cor29Report { residuals: [0.0; 4], holds: [true; 4], agree: true });
    }
    let kk = k.gram();
    let s = split_terms(f_frame, &kk, op_norm(&kk)?, &SplitOperators::new(f_frame, j)?, &pf)?;
    let residuals = [
        (C64::new(s.sj_sq, 0.0) - s.a_j).norm() / s.scale,
        (C64::new(s.sjc_sq, 0.0) - s.a_jc).norm() / s.scale,
        s.orth.norm() / s.scale,
        s.orth_alt.norm() / s.scale,
    ];
    let holds = residuals.map(|r| r <= tol);
    Ok(Cor29Report { residuals, holds, agree: holds.iter().all(|&h| h == holds[0]) })
}

/// Condition number of `K` on its range, `‖K‖·‖K†‖`.
pub fn conditioning(k: &OperatorK) -> Result<f64> {
    let s = svd(k.matrix())?;
    let r = s.rank(FRAME_RANK_TOL);
    if r == 0 {
        return Err(Error::ZeroOperator);
    }
    Ok(s.sigma[0] / s.sigma[r - 1])
}
