use crate::exact::AlgError;

/// Errors raised by the symbolic and numeric modules.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error("elements belong to different quaternion algebras")]
    AlgebraMismatch,
    #[error("tensor degree {0} is below 2")]
    DegreeTooSmall(usize),
    #[error("weight {0} is not a non-negative even integer")]
    BadWeight(i64),
    #[error("field has no square root of {0}")]
    MissingRoot(String),
    #[error("invariant space has dimension {0}, expected 1")]
    NonUniqueInvariant(usize),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("index {0} out of range")]
    BadIndex(i64),
    #[error("Lie algebra element is not trace zero")]
    NotTraceZero,
    #[error("weights {0} and {1} differ")]
    WeightMismatch(usize, usize),
    #[error("unsupported generator {0}")]
    BadGenerator(String),
    #[error("closed form disagrees with direct computation: {0}")]
    FormulaMismatch(String),
    #[error("level {0} is below |lambda| = {1}")]
    BadLevel(i64, i64),
    #[error("internal error: {0}")]
    InternalError(String),
    #[error("no coboundary solves the PV relation: {0}")]
    PVCheckFailed(String),
    #[error("pole at s = {0}")]
    PoleAtS(f64),
    #[error("y exponent {y_exp} does not match conductor exponent {cond}")]
    BadConductorShift { y_exp: i64, cond: u32 },
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("bad Weierstrass model: {0}")]
    BadModel(String),
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("discriminant {d} is not coprime to conductor {n}")]
    NotCoprime { d: i64, n: u64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("no admissible twist with |d| <= {0}")]
    SearchExhausted(u64),
    #[error("twisted L-value vanishes for d = {0}")]
    DegenerateTwist(i64),
    #[error("bad character data: {0}")]
    BadCharacter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
