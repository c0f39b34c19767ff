use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("denominator {denominator} is divisible by p = {p}")]
    DenominatorDivisibleByP { denominator: String, p: u64 },
    #[error("coefficient {0} is not an integer")]
    NonIntegerCoefficient(String),
    #[error("quasitranslation series has nonzero constant term")]
    NonzeroConstantTerm,
    #[error("zero polynomial has no Newton polyhedron")]
    ZeroPolynomial,
    #[error("face does not belong to this polyhedron")]
    ForeignFace,
    #[error("exact two-variable zero order requested for {0} variables")]
    Exact2dDimension(usize),
    #[error("degenerate cone: {0}")]
    DegenerateCone(String),
    #[error("cone is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("cone lies outside the normal fan: {0}")]
    OutsideFan(String),
    #[error("point has a zero coordinate at index {0}")]
    ZeroCoordinate(usize),
    #[error("series vanishes to truncation order {0}; raise the truncation")]
    VanishesToTruncation(u32),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("implicit series iteration stalled: {0}")]
    IterationStalled(String),
    #[error("nonzero x_n^(m-1) slice after quasitranslation; truncation too low")]
    NonzeroCriticalSlice,
    #[error("enumeration of {size} points exceeds cap {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("hensel recursion exceeded {0} nodes")]
    BranchCapExceeded(u64),
    #[error("degenerate series: {0}")]
    DegenerateSeries(String),
    #[error("resolution depth {0} exhausted")]
    DepthExhausted(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("matrix is singular")]
    SingularMatrix,
}
