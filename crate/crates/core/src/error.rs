use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("unsupported field size: t = {0} (need 1 <= t <= 4)")]
    UnsupportedDegree(u32),
    #[error("r = {0} is not a power of two >= 2")]
    RNotPowerOfTwo(u32),
    #[error("reduction polynomial {0:#x} is reducible or has the wrong degree")]
    Reducible(u32),
    #[error("element {bits:#x} is not in GF({q})")]
    NotInField { bits: u16, q: usize },
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("malformed hex field element: {0:?}")]
    BadHex(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("pole bound s = {s} out of range: need {lower} < s and 4s <= {upper}")]
    PoleBoundOutOfRange { s: u32, lower: i64, upper: i64 },
    #[error("pole bound s = {s} <= 2g - 2 = {bound}: Riemann-Roch dimension formula invalid")]
    BelowRiemannRoch { s: u32, bound: i64 },
    #[error("2s = {two_s} exceeds N + 2g - 2 = {bound}; no twist vector guaranteed")]
    TwistOutOfRange { two_s: i64, bound: i64 },
    #[error("fiber {0} does not exist")]
    NoSuchFiber(usize),
    #[error("backend axiom `{axiom}` violated: {detail}")]
    Axiom { axiom: &'static str, detail: String },
    #[error("pullback is not expressible in the Riemann-Roch basis: {0}")]
    NotInBasis(String),
    #[error("no all-nonzero twist vector found: {0}")]
    NoTwistVector(String),
    #[error("invalid curve data: {0}")]
    InvalidData(String),
}

impl CurveError {
    pub(crate) fn axiom(axiom: &'static str, detail: impl Into<String>) -> Self {
        CurveError::Axiom {
            axiom,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error(
        "first {k} columns have rank {rank} < {k}: the dual distance must exceed k for the \
         partially systematic form"
    )]
    SystematicPrecondition { k: usize, rank: usize },
    #[error("enumeration of {size} codewords exceeds the budget of {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("product monomial x^{i} y^{j} is not in the target basis")]
    NotInTarget { i: u32, j: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CssError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("independence assumption failed: {0}")]
    Assumption(String),
    #[error("no automorphism maps logical place {from} to {to}")]
    NonTransitive { from: usize, to: usize },
    #[error("automorphism for ({from}, {to}) is not unique")]
    NotSimplyTransitive { from: usize, to: usize },
    #[error("weighted row-product identity fails at rows ({j1}, {j2})")]
    Gram { j1: usize, j2: usize },
    #[error("twist vector has a zero entry at column {0}")]
    ZeroTwist(usize),
    #[error("invalid artifact: {0}")]
    Artifact(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("tower parameters invalid: {0}")]
    Invariant(String),
    #[error("integer overflow evaluating tower quantities")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("logical index {index} out of range (k = {k})")]
    IndexOutOfRange { index: usize, k: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("gate {gate} touches place {place}, which is not a physical (alpha) place")]
    UnknownPlace { gate: usize, place: usize },
    #[error("gate {gate} uses block {block}, outside the pattern")]
    BadBlock { gate: usize, block: u8 },
    #[error("dense mode needs q^n <= 2^20, got q = {q}, n = {n}")]
    DenseTooLarge { q: usize, n: usize },
    #[error("dense mode supports only the intra-block pattern")]
    DensePattern,
}
