use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("elements belong to different towers or layers")]
    TowerMismatch,
    #[error("skew polynomials are built over different automorphisms")]
    ThetaMismatch,
    #[error("modulus must be monic of degree >= 2")]
    BadModulus,
    #[error("modulus is reducible")]
    ReducibleModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("generator image is not a root of the top-layer modulus")]
    NotARoot,
    #[error("zero pivot on a K-independent element: H_dim violated (fixed field of theta is larger than K)")]
    HdimViolation,
    #[error("elements are K-linearly dependent")]
    DependentSupport,
    #[error("operation on the zero polynomial")]
    ZeroPolynomial,
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("decoding failed: no codeword within the error-correction radius")]
    DecodeFail,
    #[error("enumeration guard exceeded: {0} candidates")]
    EnumerationGuard(u128),
    #[error("element has non-integral coordinates")]
    NotIntegral,
    #[error("{0} is not inert: the defining polynomial is reducible modulo {0}")]
    NotInert(u64),
    #[error("no inert prime found below the search cap {0}")]
    NoInertPrime(u64),
    #[error("lift alphabet members collide modulo the prime")]
    AmbiguousAlphabet,
    #[error("a residue coordinate matches no alphabet member")]
    LiftMiss,
    #[error("malformed input: {0}")]
    Format(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
