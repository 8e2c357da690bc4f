use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field of order {0} exceeds the supported maximum of 65536")]
    FieldTooLarge(u64),
    #[error("polynomial {0:?} is not a monic primitive polynomial of the requested degree")]
    NotPrimitive(Vec<u16>),
    #[error("attempted to invert zero")]
    ZeroInverse,
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is not on the Klein quadric")]
    NotOnKlein,
    #[error("quadric is not a nondegenerate hyperbolic quadric")]
    NotHyperbolic,
    #[error("reference plane is not contained in the quadric")]
    ReferenceNotOnQuadric,
    #[error("q must be odd for this construction (got q = {0})")]
    EvenQ(u32),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("code needs at least two codewords")]
    TooFewCodewords,
    #[error("duplicate codeword at indices {0} and {1}")]
    DuplicateCodeword(usize, usize),
    #[error("codewords have mixed dimensions or ambients")]
    MixedDimensions,
    #[error("line keys for q = {q}, n = {n} do not fit in 64 bits")]
    KeyOverflow { q: u32, n: usize },
    #[error("construction invariant violated: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
