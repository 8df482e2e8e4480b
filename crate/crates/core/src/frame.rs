//! Frames, K-frames and their operators.
//!
//! Inner products follow `⟨x, y⟩ = yᴴx` (linear in the first slot), so the
//! analysis coefficients of `f` are `⟨f, f_i⟩ = f_iᴴ f`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::douglas;
use crate::error::{Error, Result};
use crate::numkit::{herm_eig, op_norm, CMat, MatrixJson, C64};

/// Relative singular-value cutoff for rank decisions on synthesis matrices.
pub const FRAME_RANK_TOL: f64 = 1e-11;

/// A finite frame `{f_i}` stored as the columns of its synthesis matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrameJson", into = "FrameJson")]
pub struct KFrame {
    vectors: CMat,
    pub label: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct FrameJson {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
    dim: usize,
    count: usize,
    #[serde(default)]
    label: Option<String>,
}

impl TryFrom<FrameJson> for KFrame {
    type Error = Error;

    fn try_from(j: FrameJson) -> Result<Self> {
        if j.dim != j.rows || j.count != j.cols {
            return Err(Error::Format(format!(
                "frame header dim={} count={} disagrees with a {}x{} matrix",
                j.dim, j.count, j.rows, j.cols
            )));
        }
        let vectors = CMat::try_from(MatrixJson { rows: j.rows, cols: j.cols, re: j.re, im: j.im })?;
        Ok(KFrame { vectors, label: j.label })
    }
}

impl From<KFrame> for FrameJson {
    fn from(f: KFrame) -> Self {
        let dim = f.dim();
        let count = f.count();
        let m = MatrixJson::from(f.vectors);
        FrameJson { rows: m.rows, cols: m.cols, re: m.re, im: m.im, dim, count, label: f.label }
    }
}

impl KFrame {
    pub fn new(vectors: CMat) -> Result<Self> {
        if vectors.rows() == 0 || vectors.cols() == 0 {
            return Err(Error::DimensionMismatch("a frame needs d ≥ 1 and n ≥ 1".into()));
        }
        if !vectors.is_finite() {
            return Err(Error::Format("frame vectors contain NaN or Inf".into()));
        }
        Ok(KFrame { vectors, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Standard orthonormal basis of `ℂ^d`.
    pub fn standard_basis(d: usize) -> Self {
        KFrame::new(CMat::identity(d)).expect("identity is a valid frame")
    }

    pub fn dim(&self) -> usize {
        self.vectors.rows()
    }

    pub fn count(&self) -> usize {
        self.vectors.cols()
    }

    /// The synthesis matrix `T_F` (column `i` is `f_i`).
    pub fn synthesis_matrix(&self) -> &CMat {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.vectors.col(i)
    }
}

/// The bounded operator `K` on `ℂ^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CMat", into = "CMat")]
pub struct OperatorK {
    matrix: CMat,
}

impl TryFrom<CMat> for OperatorK {
    type Error = Error;

    fn try_from(m: CMat) -> Result<Self> {
        OperatorK::new(m)
    }
}

impl From<OperatorK> for CMat {
    fn from(k: OperatorK) -> CMat {
        k.matrix
    }
}

impl OperatorK {
    pub fn new(matrix: CMat) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::DimensionMismatch(format!("K must be square, got {}x{}", matrix.rows(), matrix.cols())));
        }
        if !matrix.is_finite() {
            return Err(Error::Format("K contains NaN or Inf".into()));
        }
        Ok(OperatorK { matrix })
    }

    pub fn identity(d: usize) -> Self {
        OperatorK { matrix: CMat::identity(d) }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `KK*`, symmetrized.
    pub fn gram(&self) -> CMat {
        (&self.matrix * &self.matrix.adjoint()).hermitian_part()
    }

    pub fn apply(&self, f: &[C64]) -> Result<Vec<C64>> {
        self.matrix.mul_vec(f)
    }

    pub fn apply_adjoint(&self, f: &[C64]) -> Result<Vec<C64>> {
        self.matrix.adjoint_mul_vec(f)
    }
}

/// A subset `J ⊆ {0, …, n−1}` of frame indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexSubset {
    indices: Vec<usize>,
    count: usize,
}

impl IndexSubset {
    pub fn new(indices: Vec<usize>, count: usize) -> Result<Self> {
        if let Some(w) = indices.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::BadSubset(format!("indices must be strictly increasing ({} then {})", w[0], w[1])));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= count) {
            return Err(Error::BadSubset(format!("index {bad} out of range for {count} vectors")));
        }
        Ok(IndexSubset { indices, count })
    }

    /// Sorts and deduplicates before validating the range.
    pub fn from_unsorted(mut indices: Vec<usize>, count: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        Self::new(indices, count)
    }

    pub fn all(count: usize) -> Self {
        IndexSubset { indices: (0..count).collect(), count }
    }

    pub fn empty(count: usize) -> Self {
        IndexSubset { indices: Vec::new(), count }
    }

    /// Subset whose members are the set bits of `mask`.
    pub fn from_mask(mask: u64, count: usize) -> Self {
        assert!(count <= 64, "mask subsets are limited to 64 indices");
        IndexSubset { indices: (0..count).filter(|i| mask >> i & 1 == 1).collect(), count }
    }

    /// Parses `all`, `empty`, or a comma-separated list of zero-based indices.
    pub fn parse(s: &str, count: usize) -> Result<Self> {
        match s.trim() {
            "all" => Ok(Self::all(count)),
            "empty" | "" => Ok(Self::empty(count)),
            list => {
                let idx = list
                    .split(',')
                    .map(|t| usize::from_str(t.trim()).map_err(|_| Error::BadSubset(format!("`{t}` is not an index"))))
                    .collect::<Result<Vec<_>>>()?;
                Self::from_unsorted(idx, count)
            }
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn complement(&self) -> Self {
        IndexSubset { indices: (0..self.count).filter(|&i| !self.contains(i)).collect(), count: self.count }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_universe(other)?;
        let mut idx = self.indices.clone();
        idx.extend_from_slice(&other.indices);
        Self::from_unsorted(idx, self.count)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_universe(other)?;
        let idx = self.indices.iter().copied().filter(|&i| !other.contains(i)).collect();
        Self::new(idx, self.count)
    }

    pub fn first_common(&self, other: &Self) -> Option<usize> {
        self.indices.iter().copied().find(|&i| other.contains(i))
    }

    /// 0/1 weights of the subset.
    pub fn indicator(&self) -> Vec<C64> {
        (0..self.count).map(|i| C64::new(if self.contains(i) { 1.0 } else { 0.0 }, 0.0)).collect()
    }

    pub fn check_against(&self, count: usize) -> Result<()> {
        if self.count != count {
            return Err(Error::BadSubset(format!(
                "subset over {} indices used with a frame of {count} vectors",
                self.count
            )));
        }
        Ok(())
    }

    fn check_universe(&self, other: &Self) -> Result<()> {
        other.check_against(self.count)
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.is_empty() {
            return write!(f, "empty");
        }
        if self.indices.len() == self.count {
            return write!(f, "all");
        }
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Optimal lower K-frame bound; `Unbounded` when `K = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBound {
    Finite(f64),
    Unbounded,
}

impl LowerBound {
    pub fn finite(self) -> Option<f64> {
        match self {
            LowerBound::Finite(a) => Some(a),
            LowerBound::Unbounded => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KFrameBounds {
    /// `‖X_F‖⁻²`; meaningful only when `is_kframe`.
    pub lower_opt: LowerBound,
    /// `‖S_F‖`.
    pub upper_opt: f64,
    pub is_kframe: bool,
    /// `‖(I − T_F T_F†) K‖`.
    pub range_residual: f64,
}

/// A K-frame together with a K-dual `{g_i}`.
#[derive(Clone, Debug)]
pub struct DualPair {
    pub frame: KFrame,
    /// Column `i` is `g_i`.
    pub dual_vectors: CMat,
    pub operator: OperatorK,
    /// `‖T_F Gᴴ − K‖`.
    pub residual: f64,
}

impl DualPair {
    /// Validates `Kf = Σ ⟨f, g_i⟩ f_i` as the operator identity `T_F Gᴴ = K`.
    pub fn new(frame: KFrame, dual_vectors: CMat, operator: OperatorK, tol: f64) -> Result<Self> {
        let pair = Self::from_parts_unchecked(frame, dual_vectors, operator)?;
        let allowed = tol * (1.0 + op_norm(operator_matrix(&pair))?);
        if !(pair.residual <= allowed) {
            return Err(Error::NotKDual { residual: pair.residual, allowed });
        }
        Ok(pair)
    }

    /// Builds a pair without enforcing the dual identity; the residual is still recorded.
    pub fn from_parts_unchecked(frame: KFrame, dual_vectors: CMat, operator: OperatorK) -> Result<Self> {
        if dual_vectors.rows() != frame.dim() || dual_vectors.cols() != frame.count() {
            return Err(Error::DimensionMismatch(format!(
                "dual is {}x{}, frame is {}x{}",
                dual_vectors.rows(),
                dual_vectors.cols(),
                frame.dim(),
                frame.count()
            )));
        }
        if operator.dim() != frame.dim() {
            return Err(Error::DimensionMismatch(format!(
                "K acts on dimension {}, frame lives in dimension {}",
                operator.dim(),
                frame.dim()
            )));
        }
        let recon = frame.synthesis_matrix() * &dual_vectors.adjoint();
        let residual = op_norm(&(&recon - operator.matrix()))?;
        Ok(DualPair { frame, dual_vectors, operator, residual })
    }

    pub fn dual_vector(&self, i: usize) -> Vec<C64> {
        self.dual_vectors.col(i)
    }
}

fn operator_matrix(p: &DualPair) -> &CMat {
    p.operator.matrix()
}

fn check_frame_operator(f: &KFrame, k: &OperatorK) -> Result<()> {
    if f.dim() != k.dim() {
        return Err(Error::DimensionMismatch(format!(
            "frame in dimension {} with K acting on dimension {}",
            f.dim(),
            k.dim()
        )));
    }
    Ok(())
}

/// `T_F c = Σ c_i f_i`.
pub fn synthesis(f: &KFrame, c: &[C64]) -> Result<Vec<C64>> {
    f.vectors.mul_vec(c)
}

/// `T_F* f = {⟨f, f_i⟩}`.
pub fn analysis(f: &KFrame, x: &[C64]) -> Result<Vec<C64>> {
    f.vectors.adjoint_mul_vec(x)
}

/// `S_F = T_F T_F*`.
pub fn frame_operator(f: &KFrame) -> CMat {
    (&f.vectors * &f.vectors.adjoint()).hermitian_part()
}

/// `S_J = Σ_{i∈J} f_i f_iᴴ`.
pub fn partial_frame_operator(f: &KFrame, j: &IndexSubset) -> Result<CMat> {
    j.check_against(f.count())?;
    let t = f.vectors.select_cols(j.indices());
    Ok((&t * &t.adjoint()).hermitian_part())
}

/// `M_J f = Σ_{i∈J} ⟨f, g_i⟩ f_i`, i.e. `T_J G_Jᴴ`.
pub fn mixed_operator(pair: &DualPair, j: &IndexSubset) -> Result<CMat> {
    j.check_against(pair.frame.count())?;
    let t = pair.frame.vectors.select_cols(j.indices());
    let g = pair.dual_vectors.select_cols(j.indices());
    Ok(&t * &g.adjoint())
}

/// Optimal K-frame bounds. The lower bound is `‖T_F† K‖⁻²`, the same
/// Douglas solution that [`douglas::canonical_xf`] returns.
pub fn kframe_bounds(f: &KFrame, k: &OperatorK, tol: f64) -> Result<KFrameBounds> {
    check_frame_operator(f, k)?;
    let upper_opt = herm_eig(&frame_operator(f))?.max();
    let sol = douglas::reduced_solution(k.matrix(), f.synthesis_matrix())?;
    let k_norm = op_norm(k.matrix())?;
    let is_kframe = sol.inclusion_residual <= tol * (1.0 + k_norm);
    let lower_opt = if k_norm == 0.0 {
        LowerBound::Unbounded
    } else {
        let x_norm = op_norm(&sol.x)?;
        LowerBound::Finite(1.0 / (x_norm * x_norm))
    };
    Ok(KFrameBounds { lower_opt, upper_opt, is_kframe, range_residual: sol.inclusion_residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParsevalCheck {
    pub is_parseval: bool,
    /// `‖S_F − KK*‖`.
    pub residual: f64,
}

/// `Σ|⟨f, f_i⟩|² = ‖K*f‖²` for all `f`, tested as `S_F = KK*`.
pub fn is_parseval_kframe(f: &KFrame, k: &OperatorK, tol: f64) -> Result<ParsevalCheck> {
    check_frame_operator(f, k)?;
    let kk = k.gram();
    let residual = op_norm(&(&frame_operator(f) - &kk))?;
    let allowed = tol * (1.0 + herm_eig(&kk)?.norm());
    Ok(ParsevalCheck { is_parseval: residual <= allowed, residual })
}

/// Errors with `NotParseval` unless `f` is a Parseval K-frame.
pub fn require_parseval(f: &KFrame, k: &OperatorK, tol: f64) -> Result<()> {
    let c = is_parseval_kframe(f, k, tol)?;
    if c.is_parseval {
        Ok(())
    } else {
        Err(Error::NotParseval { residual: c.residual })
    }
}
