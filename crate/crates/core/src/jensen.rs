//! Jensen-type operator inequalities and their K-frame forms.
//!
//! Operator convexity is never decided numerically. Only the catalog below
//! may be passed where it is a hypothesis:
//!
//! * `x²` and `x^r` for `r ∈ [1, 2]` on `[0, ∞)` (Löwner–Heinz / Bendat–Sherman),
//! * `x·log x` on `[0, ∞)` (Bendat–Sherman),
//! * `−√x` on `[0, ∞)` (`√x` is operator monotone, hence operator concave),
//! * affine functions.
//!
//! `x^r` for `r > 2` and convex piecewise-linear tables are convex but not
//! operator convex; they are accepted only by the convex variant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{partial_frame_operator, require_parseval, IndexSubset, KFrame, OperatorK};
use crate::genlab::SeededRng;
use crate::numkit::{checked_hermitian, herm_eig, loewner_le, matfunc, op_norm, CMat, LoewnerReport, SpectralFunction};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionKind {
    Square,
    Power {
        r: f64,
    },
    Xlogx,
    NegativeSqrt,
    Affine {
        a: f64,
        b: f64,
    },
    /// Linear interpolation between `(xs[i], ys[i])`; `xs` strictly increasing.
    CustomTable {
        xs: Vec<f64>,
        ys: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarFunctionSpec {
    pub kind: FunctionKind,
    pub domain: (f64, f64),
}

impl ScalarFunctionSpec {
    pub fn square() -> Self {
        Self { kind: FunctionKind::Square, domain: (f64::NEG_INFINITY, f64::INFINITY) }
    }

    pub fn power(r: f64) -> Result<Self> {
        if !(r >= 1.0 && r.is_finite()) {
            return Err(Error::BadConfig(format!("power exponent must be ≥ 1, got {r}")));
        }
        Ok(Self { kind: FunctionKind::Power { r }, domain: (0.0, f64::INFINITY) })
    }

    pub fn xlogx() -> Self {
        Self { kind: FunctionKind::Xlogx, domain: (0.0, f64::INFINITY) }
    }

    pub fn negative_sqrt() -> Self {
        Self { kind: FunctionKind::NegativeSqrt, domain: (0.0, f64::INFINITY) }
    }

    pub fn affine(a: f64, b: f64) -> Self {
        Self { kind: FunctionKind::Affine { a, b }, domain: (f64::NEG_INFINITY, f64::INFINITY) }
    }

    pub fn custom_table(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(Error::BadConfig("a table needs at least two (x, y) pairs of equal length".into()));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) || xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::BadConfig("table abscissae must be finite and strictly increasing".into()));
        }
        let domain = (xs[0], xs[xs.len() - 1]);
        Ok(Self { kind: FunctionKind::CustomTable { xs, ys }, domain })
    }

    /// Restricts the domain to `[lo, hi]`, which must lie inside the current one.
    pub fn on(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || lo < self.domain.0 || hi > self.domain.1 {
            return Err(Error::BadConfig(format!(
                "[{lo}, {hi}] is not a subinterval of [{}, {}]",
                self.domain.0, self.domain.1
            )));
        }
        self.domain = (lo, hi);
        Ok(self)
    }

    pub fn id(&self) -> String {
        match &self.kind {
            FunctionKind::Square => "square".into(),
            FunctionKind::Power { r } => format!("power({r})"),
            FunctionKind::Xlogx => "xlogx".into(),
            FunctionKind::NegativeSqrt => "negative_sqrt".into(),
            FunctionKind::Affine { a, b } => format!("affine({a},{b})"),
            FunctionKind::CustomTable { xs, .. } => format!("custom_table({} nodes)", xs.len()),
        }
    }

    pub fn convex(&self) -> bool {
        match &self.kind {
            FunctionKind::CustomTable { xs, ys } => {
                let slopes: Vec<f64> = (1..xs.len()).map(|i| (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1])).collect();
                slopes.windows(2).all(|w| w[0] <= w[1])
            }
            _ => true,
        }
    }

    pub fn operator_convex(&self) -> bool {
        match &self.kind {
            FunctionKind::Power { r } => *r <= 2.0,
            FunctionKind::CustomTable { .. } => false,
            _ => true,
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self.kind, FunctionKind::Affine { .. })
    }
}

impl SpectralFunction for ScalarFunctionSpec {
    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            FunctionKind::Square => x * x,
            FunctionKind::Power { r } => x.powf(*r),
            FunctionKind::Xlogx => {
                if x == 0.0 {
                    0.0
                } else {
                    x * x.ln()
                }
            }
            FunctionKind::NegativeSqrt => -x.sqrt(),
            FunctionKind::Affine { a, b } => a * x + b,
            FunctionKind::CustomTable { xs, ys } => {
                let k = xs.partition_point(|&node| node <= x).clamp(1, xs.len() - 1);
                let (x0, x1, y0, y1) = (xs[k - 1], xs[k], ys[k - 1], ys[k]);
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }
}

/// Operator-convex catalog entries.
pub fn operator_convex_catalog() -> Vec<ScalarFunctionSpec> {
    vec![
        ScalarFunctionSpec::square(),
        ScalarFunctionSpec::power(1.5).expect("valid exponent"),
        ScalarFunctionSpec::power(1.25).expect("valid exponent"),
        ScalarFunctionSpec::xlogx(),
        ScalarFunctionSpec::negative_sqrt(),
        ScalarFunctionSpec::affine(0.5, 1.0),
        ScalarFunctionSpec::affine(-2.0, 0.0),
    ]
}

/// Convex catalog entries: the operator-convex ones plus `x³` and a convex table.
pub fn convex_catalog() -> Vec<ScalarFunctionSpec> {
    let mut c = operator_convex_catalog();
    c.push(ScalarFunctionSpec::power(3.0).expect("valid exponent"));
    c.push(
        ScalarFunctionSpec::custom_table(vec![0.0, 1.0, 2.0, 4.0, 1e3], vec![1.0, 0.0, 0.5, 3.0, 3000.0])
            .expect("valid table"),
    );
    c
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositiveMap {
    /// `Φ(A) = w·A` with `w ≥ 0`.
    Weight(f64),
    /// `Φ(A) = Vᴴ·A·V` with `V` of shape `input_dim × output_dim`.
    Congruence(CMat),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositiveMapFamily {
    pub maps: Vec<PositiveMap>,
    pub input_dim: usize,
    pub output_dim: usize,
}

impl PositiveMapFamily {
    /// Validates shapes, positivity and `Σ Φ_i(I) = I`.
    pub fn new(maps: Vec<PositiveMap>, input_dim: usize, output_dim: usize, tol: f64) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::BadConfig("empty positive map family".into()));
        }
        for m in &maps {
            match m {
                PositiveMap::Weight(w) => {
                    if input_dim != output_dim {
                        return Err(Error::DimensionMismatch("scalar weights need equal input and output dims".into()));
                    }
                    if !(*w >= 0.0 && w.is_finite()) {
                        return Err(Error::BadConfig(format!("weight {w} is not a nonnegative number")));
                    }
                }
                PositiveMap::Congruence(v) => {
                    if v.rows() != input_dim || v.cols() != output_dim {
                        return Err(Error::DimensionMismatch(format!(
                            "congruence factor {}x{} in a {input_dim}->{output_dim} family",
                            v.rows(),
                            v.cols()
                        )));
                    }
                }
            }
        }
        let family = PositiveMapFamily { maps, input_dim, output_dim };
        let mut total = CMat::zeros(output_dim, output_dim);
        for i in 0..family.maps.len() {
            total = &total + &family.apply(i, &CMat::identity(input_dim));
        }
        let residual = op_norm(&(&total - &CMat::identity(output_dim)))?;
        if residual > tol {
            return Err(Error::NotUnital(residual));
        }
        Ok(family)
    }

    pub fn weights(ws: &[f64], dim: usize, tol: f64) -> Result<Self> {
        Self::new(ws.iter().map(|&w| PositiveMap::Weight(w)).collect(), dim, dim, tol)
    }

    /// `{½·Id, ½·Id}`.
    pub fn halves(dim: usize) -> Self {
        PositiveMapFamily {
            maps: vec![PositiveMap::Weight(0.5), PositiveMap::Weight(0.5)],
            input_dim: dim,
            output_dim: dim,
        }
    }

    /// `k` congruences `V_i` cut from the rows of a Haar isometry, so `Σ V_iᴴV_i = I`.
    pub fn random_congruences(rng: &mut SeededRng, k: usize, input_dim: usize, output_dim: usize) -> Result<Self> {
        if k * input_dim < output_dim {
            return Err(Error::BadConfig(format!(
                "{k} maps from dimension {input_dim} cannot be unital onto dimension {output_dim}"
            )));
        }
        let stacked = rng.orthonormal_columns(k * input_dim, output_dim);
        let maps = (0..k)
            .map(|i| {
                let rows: Vec<usize> = (i * input_dim..(i + 1) * input_dim).collect();
                PositiveMap::Congruence(stacked.select_rows(&rows))
            })
            .collect();
        Self::new(maps, input_dim, output_dim, 1e-10)
    }

    /// Random convex weights.
    pub fn random_weights(rng: &mut SeededRng, k: usize, dim: usize) -> Result<Self> {
        let raw: Vec<f64> = (0..k).map(|_| rng.uniform_in(0.05, 1.0)).collect();
        let total: f64 = raw.iter().sum();
        let ws: Vec<f64> = raw.iter().map(|w| w / total).collect();
        Self::weights(&ws, dim, 1e-12)
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn apply(&self, i: usize, a: &CMat) -> CMat {
        match &self.maps[i] {
            PositiveMap::Weight(w) => a.scale(*w),
            PositiveMap::Congruence(v) => (&(&v.adjoint() * a) * v).hermitian_part(),
        }
    }

    /// `Σ Φ_i(A_i)`.
    pub fn combine(&self, a: &[CMat]) -> CMat {
        let mut total = CMat::zeros(self.output_dim, self.output_dim);
        for (i, ai) in a.iter().enumerate() {
            total = &total + &self.apply(i, ai);
        }
        total
    }
}

fn check_operands(a: &[CMat], phis: &PositiveMapFamily, tol: f64) -> Result<Vec<CMat>> {
    if a.len() != phis.len() {
        return Err(Error::DimensionMismatch(format!("{} operators for {} maps", a.len(), phis.len())));
    }
    a.iter()
        .map(|ai| {
            if ai.rows() != phis.input_dim {
                return Err(Error::DimensionMismatch(format!(
                    "operator of size {} for maps on dimension {}",
                    ai.rows(),
                    phis.input_dim
                )));
            }
            checked_hermitian(ai, tol)
        })
        .collect()
}

/// `h(Σ Φ_i(A_i)) ≼ Σ Φ_i(h(A_i))` for operator convex `h`.
pub fn check_jensen_3_1(
    a: &[CMat],
    phis: &PositiveMapFamily,
    h: &ScalarFunctionSpec,
    tol: f64,
) -> Result<LoewnerReport> {
    if !h.operator_convex() {
        return Err(Error::NotOperatorConvex(h.id()));
    }
    let a = check_operands(a, phis, tol)?;
    let h_a: Vec<CMat> = a.iter().map(|ai| matfunc(h, ai, tol)).collect::<Result<_>>()?;
    let lhs = matfunc(h, &phis.combine(&a), tol)?;
    let rhs = phis.combine(&h_a);
    loewner_le(&lhs, &rhs, tol)
}

/// `h((m+M)I − Σ Φ_i(A_i)) ≼ (h(m)+h(M))I − Σ Φ_i(h(A_i))` for convex `h`
/// and spectra inside `[m, M]`.
pub fn check_jensen_3_2(
    a: &[CMat],
    phis: &PositiveMapFamily,
    h: &ScalarFunctionSpec,
    m: f64,
    big_m: f64,
    tol: f64,
) -> Result<LoewnerReport> {
    Ok(jensen_3_2_sides(a, phis, h, m, big_m, tol)?.report)
}

struct Jensen32Sides {
    lhs: CMat,
    rhs: CMat,
    report: LoewnerReport,
}

fn jensen_3_2_sides(
    a: &[CMat],
    phis: &PositiveMapFamily,
    h: &ScalarFunctionSpec,
    m: f64,
    big_m: f64,
    tol: f64,
) -> Result<Jensen32Sides> {
    if !h.convex() {
        return Err(Error::NotConvex(h.id()));
    }
    if !(m < big_m) {
        return Err(Error::BadConfig(format!("bracket needs m < M, got [{m}, {big_m}]")));
    }
    let (lo, hi) = h.domain;
    if m < lo || big_m > hi {
        let value = if m < lo { m } else { big_m };
        return Err(Error::DomainViolation { value, lo, hi });
    }
    let a = check_operands(a, phis, tol)?;
    let slack = tol * (1.0 + m.abs().max(big_m.abs()));
    for ai in &a {
        let e = herm_eig(ai)?;
        if e.min() < m - slack || e.max() > big_m + slack {
            return Err(Error::SpectrumOutOfBracket { min: e.min(), max: e.max(), m, big_m });
        }
    }
    let bracketed = h.clone().on(m, big_m)?;
    let n = phis.output_dim;
    let combined = phis.combine(&a);
    let lhs = matfunc(&bracketed, &(&CMat::identity(n).scale(m + big_m) - &combined), tol)?;
    let h_a: Vec<CMat> = a.iter().map(|ai| matfunc(&bracketed, ai, tol)).collect::<Result<_>>()?;
    let rhs = &CMat::identity(n).scale(h.eval(m) + h.eval(big_m)) - &phis.combine(&h_a);
    let report = loewner_le(&lhs, &rhs, tol)?;
    Ok(Jensen32Sides { lhs, rhs, report })
}

/// `‖K‖²`, the right end of the spectral bracket of `S_J`, `S_{J^c}` and `KK*`.
fn kk_norm(k: &OperatorK) -> Result<f64> {
    let n = op_norm(k.matrix())?;
    if n == 0.0 {
        return Err(Error::ZeroOperator);
    }
    Ok(n * n)
}

fn split_operators(f_frame: &KFrame, j: &IndexSubset) -> Result<Vec<CMat>> {
    Ok(vec![partial_frame_operator(f_frame, j)?, partial_frame_operator(f_frame, &j.complement())?])
}

fn require_domain(h: &ScalarFunctionSpec, hi: f64) -> Result<()> {
    let (lo, top) = h.domain;
    if lo > 0.0 || top < hi {
        let value = if lo > 0.0 { 0.0 } else { hi };
        return Err(Error::DomainViolation { value, lo, hi: top });
    }
    Ok(())
}

/// `h(KK*/2) ≼ (h(S_J) + h(S_{J^c}))/2`: the two-map Jensen inequality with
/// `Φ₁ = Φ₂ = ½·Id` applied to `(S_J, S_{J^c})`.
pub fn check_thm_3_3_i(
    f_frame: &KFrame,
    k: &OperatorK,
    j: &IndexSubset,
    h: &ScalarFunctionSpec,
    tol: f64,
) -> Result<LoewnerReport> {
    j.check_against(f_frame.count())?;
    require_parseval(f_frame, k, tol)?;
    if !h.operator_convex() {
        return Err(Error::NotOperatorConvex(h.id()));
    }
    require_domain(h, kk_norm(k)?)?;
    check_jensen_3_1(&split_operators(f_frame, j)?, &PositiveMapFamily::halves(f_frame.dim()), h, tol)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Thm33iiReport {
    /// `h(‖K‖²I − KK*/2) ≼ (h(0) + h(‖K‖²))I − (h(S_J) + h(S_{J^c}))/2`.
    pub report: LoewnerReport,
    /// The same comparison without the `h(0)·I` term. Equivalent when
    /// `h(0) = 0`, weaker when `h(0) < 0`, and false in general when `h(0) > 0`.
    pub without_h0: LoewnerReport,
    pub h0: f64,
}

/// The convex variant on `[0, ‖K‖²]` with `Φ₁ = Φ₂ = ½·Id` applied to `(S_J, S_{J^c})`.
/// `h(‖K‖²·I)` is the scalar `h(‖K‖²)` times the identity.
pub fn check_thm_3_3_ii(
    f_frame: &KFrame,
    k: &OperatorK,
    j: &IndexSubset,
    h: &ScalarFunctionSpec,
    tol: f64,
) -> Result<Thm33iiReport> {
    j.check_against(f_frame.count())?;
    require_parseval(f_frame, k, tol)?;
    if !h.convex() {
        return Err(Error::NotConvex(h.id()));
    }
    let top = kk_norm(k)?;
    require_domain(h, top)?;
    let sides =
        jensen_3_2_sides(&split_operators(f_frame, j)?, &PositiveMapFamily::halves(f_frame.dim()), h, 0.0, top, tol)?;
    let h0 = h.eval(0.0);
    let without = &sides.rhs - &CMat::identity(f_frame.dim()).scale(h0);
    let without_h0 = loewner_le(&sides.lhs, &without, tol)?;
    Ok(Thm33iiReport { report: sides.report, without_h0, h0 })
}

/// `½‖KK*f‖² ≤ ‖S_J f‖² + ‖S_{J^c} f‖² ≤ 2‖K‖²‖K*f‖² − ½‖KK*f‖²`.
pub fn check_cor_3_4(
    f_frame: &KFrame,
    k: &OperatorK,
    j: &IndexSubset,
    f: &[crate::numkit::C64],
    tol: f64,
) -> Result<(crate::theorems::InequalityReport, crate::theorems::InequalityReport)> {
    use crate::numkit::{norm_sq, C64};
    use crate::theorems::InequalityReport;

    j.check_against(f_frame.count())?;
    if f.len() != f_frame.dim() {
        return Err(Error::DimensionMismatch(format!("vector of length {} in dimension {}", f.len(), f_frame.dim())));
    }
    require_parseval(f_frame, k, tol)?;
    let t = f_frame.synthesis_matrix();
    let coeff = t.adjoint_mul_vec(f)?;
    let mut sj_f = vec![C64::new(0.0, 0.0); f.len()];
    let mut sjc_f = sj_f.clone();
    for (i, &c) in coeff.iter().enumerate() {
        let target = if j.contains(i) { &mut sj_f } else { &mut sjc_f };
        for (row, o) in target.iter_mut().enumerate() {
            *o += c * t[(row, i)];
        }
    }
    let middle = norm_sq(&sj_f) + norm_sq(&sjc_f);
    let kkf = norm_sq(&k.gram().mul_vec(f)?);
    let k_norm = op_norm(k.matrix())?;
    let kstar_f = norm_sq(&k.apply_adjoint(f)?);
    let lower = InequalityReport::new(0.5 * kkf, middle, tol);
    let upper = InequalityReport::new(middle, 2.0 * k_norm * k_norm * kstar_f - 0.5 * kkf, tol);
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_flags() {
        assert!(ScalarFunctionSpec::power(1.5).unwrap().operator_convex());
        assert!(!ScalarFunctionSpec::power(3.0).unwrap().operator_convex());
        assert!(ScalarFunctionSpec::power(3.0).unwrap().convex());
        assert!(ScalarFunctionSpec::power(0.5).is_err());
        for h in convex_catalog() {
            assert!(!h.operator_convex() || h.convex(), "{}", h.id());
        }
    }

    #[test]
    fn table_convexity_and_interpolation() {
        let t = ScalarFunctionSpec::custom_table(vec![0.0, 1.0, 3.0], vec![0.0, 1.0, 5.0]).unwrap();
        assert!(t.convex() && !t.operator_convex());
        assert_eq!(t.eval(0.5), 0.5);
        assert_eq!(t.eval(2.0), 3.0);
        assert_eq!(t.eval(3.0), 5.0);
        let concave = ScalarFunctionSpec::custom_table(vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 3.0]).unwrap();
        assert!(!concave.convex());
        assert!(ScalarFunctionSpec::custom_table(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn xlogx_at_zero() {
        assert_eq!(ScalarFunctionSpec::xlogx().eval(0.0), 0.0);
    }

    #[test]
    fn non_unital_family_is_rejected() {
        assert!(matches!(PositiveMapFamily::weights(&[0.5, 0.4], 2, 1e-9), Err(Error::NotUnital(_))));
        assert!(PositiveMapFamily::weights(&[0.5, -0.1, 0.6], 2, 1e-9).is_err());
    }

    #[test]
    fn single_identity_map_gives_equality() {
        let a = CMat::diag_real(&[0.5, 2.0, 3.0]);
        let phis = PositiveMapFamily::weights(&[1.0], 3, 1e-12).unwrap();
        let r = check_jensen_3_1(&[a], &phis, &ScalarFunctionSpec::square(), 1e-9).unwrap();
        assert!(r.pass && r.min_eig.abs() < 1e-12);
    }

    #[test]
    fn endpoint_spectra_give_equality_in_the_variant() {
        let a = CMat::identity(2).scale(1.0);
        let phis = PositiveMapFamily::weights(&[0.3, 0.7], 2, 1e-12).unwrap();
        let r = check_jensen_3_2(&[a.clone(), a], &phis, &ScalarFunctionSpec::square(), 1.0, 3.0, 1e-9).unwrap();
        assert!(r.pass && r.min_eig.abs() < 1e-12);
    }

    #[test]
    fn precondition_errors() {
        let a = CMat::diag_real(&[0.5, 2.0]);
        let phis = PositiveMapFamily::weights(&[1.0], 2, 1e-12).unwrap();
        let cube = ScalarFunctionSpec::power(3.0).unwrap();
        assert!(matches!(
            check_jensen_3_1(std::slice::from_ref(&a), &phis, &cube, 1e-9),
            Err(Error::NotOperatorConvex(_))
        ));
        let concave = ScalarFunctionSpec::custom_table(vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            check_jensen_3_2(std::slice::from_ref(&a), &phis, &concave, 0.0, 2.0, 1e-9),
            Err(Error::NotConvex(_))
        ));
        assert!(matches!(
            check_jensen_3_2(std::slice::from_ref(&a), &phis, &ScalarFunctionSpec::square(), 1.0, 2.0, 1e-9),
            Err(Error::SpectrumOutOfBracket { .. })
        ));
        let neg = CMat::diag_real(&[-1.0, 2.0]);
        assert!(matches!(
            check_jensen_3_1(&[neg], &phis, &ScalarFunctionSpec::xlogx(), 1e-9),
            Err(Error::DomainViolation { .. })
        ));
    }

    fn parseval(seed: u64) -> (KFrame, OperatorK, SeededRng) {
        let mut rng = SeededRng::new(seed);
        let k = crate::genlab::random_operator(&mut rng, 4, 3).unwrap();
        let f = crate::genlab::random_parseval_kframe(&mut rng, &k, 7).unwrap();
        (f, k, rng)
    }

    #[test]
    fn kframe_forms_hold_across_the_catalog() {
        let (f, k, mut rng) = parseval(12);
        let j = IndexSubset::new(vec![1, 2, 6], 7).unwrap();
        for h in operator_convex_catalog() {
            assert!(check_thm_3_3_i(&f, &k, &j, &h, 1e-9).unwrap().pass, "{}", h.id());
        }
        let top = op_norm(k.matrix()).unwrap().powi(2);
        for h in convex_catalog() {
            let h = if matches!(h.kind, FunctionKind::CustomTable { .. }) {
                ScalarFunctionSpec::custom_table(vec![0.0, 0.3 * top, top], vec![2.0, 0.0, 5.0]).unwrap()
            } else {
                h
            };
            let r = check_thm_3_3_ii(&f, &k, &j, &h, 1e-9).unwrap();
            assert!(r.report.pass, "{}", h.id());
        }
        let (lo, hi) = check_cor_3_4(&f, &k, &j, &rng.gaussian_vector(4), 1e-9).unwrap();
        assert!(lo.pass && hi.pass);
    }

    #[test]
    fn affine_h_is_an_equality_only_with_the_h0_term() {
        let (f, k, _) = parseval(13);
        let j = IndexSubset::new(vec![0, 4], 7).unwrap();
        let r = check_thm_3_3_ii(&f, &k, &j, &ScalarFunctionSpec::affine(2.0, 3.0), 1e-9).unwrap();
        assert!(r.report.pass && r.report.relative_margin().abs() < 1e-12);
        assert_eq!(r.h0, 3.0);
        assert!(!r.without_h0.pass);
    }

    #[test]
    fn frame_forms_check_their_preconditions() {
        let (f, k, _) = parseval(14);
        let j = IndexSubset::empty(7);
        let cube = ScalarFunctionSpec::power(3.0).unwrap();
        assert!(matches!(check_thm_3_3_i(&f, &k, &j, &cube, 1e-9), Err(Error::NotOperatorConvex(_))));
        let short = ScalarFunctionSpec::square().on(0.0, 1e-3).unwrap();
        assert!(matches!(check_thm_3_3_ii(&f, &k, &j, &short, 1e-9), Err(Error::DomainViolation { .. })));
        let mut rng = SeededRng::new(1);
        let other = crate::genlab::random_kframe(&mut rng, &k, 7).unwrap();
        assert!(matches!(
            check_thm_3_3_i(&other, &k, &j, &ScalarFunctionSpec::square(), 1e-9),
            Err(Error::NotParseval { .. })
        ));
    }

    #[test]
    fn random_congruences_are_unital() {
        let mut rng = SeededRng::new(9);
        let fam = PositiveMapFamily::random_congruences(&mut rng, 3, 2, 4).unwrap();
        let total = fam.combine(&vec![CMat::identity(2); 3]);
        assert!((&total - &CMat::identity(4)).max_abs() < 1e-12);
        let a: Vec<CMat> = (0..3)
            .map(|_| {
                let g = rng.gaussian_matrix(2, 2);
                (&g * &g.adjoint()).hermitian_part()
            })
            .collect();
        assert!(check_jensen_3_1(&a, &fam, &ScalarFunctionSpec::xlogx(), 1e-9).unwrap().pass);
        assert!(PositiveMapFamily::random_congruences(&mut rng, 1, 2, 4).is_err());
    }
}
