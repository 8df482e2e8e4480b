use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e}, allowed {allowed:.3e})")]
    NotHermitian { asymmetry: f64, allowed: f64 },
    #[error("{0} did not converge within its sweep limit")]
    NoConvergence(&'static str),
    #[error("eigenvalue {value} lies outside the function domain [{lo}, {hi}]")]
    DomainViolation { value: f64, lo: f64, hi: f64 },
    #[error("denominator form is numerically singular on the subspace (min eigenvalue {min_eig:.3e})")]
    SingularDenominator { min_eig: f64 },
    #[error("bad index subset: {0}")]
    BadSubset(String),
    #[error("subsets overlap at index {0}")]
    OverlappingSubsets(usize),
    #[error("range inclusion fails: residual {residual:.3e} exceeds {allowed:.3e}")]
    NotSolvable { residual: f64, allowed: f64 },
    #[error("not a K-frame: range of K is not contained in the span of the frame (residual {residual:.3e})")]
    NotKFrame { residual: f64 },
    #[error("not a K-dual: |T_F G* - K| = {residual:.3e} exceeds {allowed:.3e}")]
    NotKDual { residual: f64, allowed: f64 },
    #[error("not a Parseval K-frame: |S_F - KK*| = {residual:.3e}")]
    NotParseval { residual: f64 },
    #[error("K is the zero operator")]
    ZeroOperator,
    #[error("function `{0}` is not known to be operator convex")]
    NotOperatorConvex(String),
    #[error("function `{0}` is not convex")]
    NotConvex(String),
    #[error("spectrum [{min}, {max}] is outside the bracket [{m}, {big_m}]")]
    SpectrumOutOfBracket { min: f64, max: f64, m: f64, big_m: f64 },
    #[error("positive map family is not unital (residual {0:.3e})")]
    NotUnital(f64),
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("unknown theorem id `{0}`")]
    UnknownTheoremId(String),
    #[error("invalid input: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
