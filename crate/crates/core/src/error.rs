use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("interval endpoints must be finite, got [{lo}, {hi}]")]
    NonFinite { lo: f64, hi: f64 },
    #[error("interval lower endpoint exceeds upper endpoint: [{lo}, {hi}]")]
    Inverted { lo: f64, hi: f64 },
    #[error("a box needs at least one dimension")]
    EmptyBox,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("interval matrix is not symmetric at ({row}, {col})")]
    Asymmetric { row: usize, col: usize },
    #[error("malformed interval list near `{0}` (expected `lo,hi;lo,hi;...`)")]
    Syntax(String),
}

/// A precondition of `1/·`, `sqrt` or `ln` failed for an interval argument.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DomainError {
    #[error("division by an interval containing zero: [{lo}, {hi}]")]
    ZeroInDivisor { lo: f64, hi: f64 },
    #[error("square root of an interval with negative part: [{lo}, {hi}]")]
    NegativeSqrt { lo: f64, hi: f64 },
    #[error("logarithm of an interval not strictly positive: [{lo}, {hi}]")]
    NonPositiveLn { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unsupported function `{name}` at position {pos}")]
    UnknownFunction { pos: usize, name: String },
    #[error("exponent at position {pos} must be a natural number >= 2, got {value}")]
    BadExponent { pos: usize, value: f64 },
    #[error("variable x{index} at position {pos} is out of range for {n_vars} variables")]
    VariableOutOfRange {
        pos: usize,
        index: usize,
        n_vars: usize,
    },
    #[error("constant {value} at position {pos} is not a finite real")]
    NonFiniteConstant { pos: usize, value: f64 },
    #[error("expression is constant; there is no Hessian to bound")]
    ConstantExpression,
    #[error("invalid codelist: {0}")]
    InvalidCodelist(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain violation in line y{} ({op}): {source}", .line + 1)]
    Domain {
        line: usize,
        op: &'static str,
        source: DomainError,
    },
    #[error("domain violation in line y{} ({op}) at a point", .line + 1)]
    PointDomain { line: usize, op: &'static str },
    #[error("non-finite result in line y{} ({op})", .line + 1)]
    Overflow { line: usize, op: &'static str },
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point coordinates must be finite")]
    NonFinitePoint,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("Hertz-Rohn enumeration is capped at n = {cap}, got n = {n}")]
    DimensionCap { n: usize, cap: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    Asymmetric { row: usize, col: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("point lies outside the box")]
    PointOutsideBox,
    #[error("no sample point lies in the function's domain")]
    NoFeasibleSample,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostTableError {
    #[error("cost table line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("cost table is missing the `{column}` row for `{op}`")]
    Missing {
        op: &'static str,
        column: &'static str,
    },
}

/// Hertz–Rohn bounds escaped the Gershgorin bounds; both come from the same
/// interval Hessian, so this indicates a bug.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error(
    "Hertz-Rohn bounds [{h_lo}, {h_hi}] are not contained in Gershgorin bounds [{g_lo}, {g_hi}]"
)]
pub struct NotContained {
    pub g_lo: f64,
    pub g_hi: f64,
    pub h_lo: f64,
    pub h_hi: f64,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("case `{case}`: {source}")]
    Parse { case: String, source: ParseError },
    #[error("corpus line {line}: {msg}")]
    Corpus { line: usize, msg: String },
    #[error("case `{case}`: {source}")]
    Inconsistent { case: String, source: NotContained },
    #[error("case `{case}`: {source}")]
    Spectral { case: String, source: SpectralError },
    #[error("cannot build worker pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
