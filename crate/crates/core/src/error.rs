use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus is not irreducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("target field too small: {found} of {expected} roots found")]
    TargetTooSmall { found: usize, expected: usize },
    #[error("division by an element that is zero at its precision")]
    DivisionByApparentZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("element is not a q^{0}-th power")]
    NotAPower(u64),
    #[error("series has no usable decay bound: {0}")]
    NoDecay(String),
    #[error("singular recursion at step {0}")]
    SingularRecursion(usize),
    #[error("no torsion chain entered the convergence disk")]
    ChainNotConverging,
    #[error("consistency failure: {0}")]
    ConsistencyFailure(String),
    #[error("model has no genus-zero parametrization")]
    UnsupportedGenus,
    #[error("unsupported coefficients: {0}")]
    UnsupportedCoefficients(String),
    #[error("basis expansion failure: {0}")]
    BasisExpansionFailure(String),
    #[error("motives come from different models")]
    ModelMismatch,
    #[error("θ ramifies in the model; inflation/restriction unsupported")]
    RamifiedAboveTheta,
    #[error("Galois data does not cover the orbit: {0}")]
    GaloisDataInsufficient(String),
    #[error("argument lies in the pole set of Γ")]
    PoleArgument,
    #[error("insufficient precision for the relation search: {unknowns} unknowns vs {rows} usable rows")]
    InsufficientPrecision { unknowns: usize, rows: usize },
    #[error("model validation failed: {0}")]
    ModelValidation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
