use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("pair does not generate the target ring")]
    NotGenerating,
    #[error("triple does not generate M_2(Z): {0}")]
    NotGeneratingTriple(String),
    #[error("reduction did not reach canonical form: {0}")]
    CanonicalFormNotFound(String),
    #[error("discriminant {0} is a perfect square")]
    DegenerateDiscriminant(i64),
    #[error("listed vectors do not form a basis of Z^n: {0}")]
    Beauty3BasisViolation(String),
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("unsupported presentation: {0}")]
    UnsupportedVariant(String),
    #[error("degree bound {bound} is below the required {required}")]
    DegreeTooSmall { bound: usize, required: usize },
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("circulants are not mutually inverse")]
    NotInverse,
    #[error("relation violated: {0}")]
    RelationViolation(String),
    #[error("trace {0} is not a positive integer")]
    NonIntegralTrace(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Resource caps are reported separately from input errors by the CLI.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
