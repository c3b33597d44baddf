use thiserror::Error;

/// Errors raised by the lattice and code routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero cannot be raised to a negative exponent")]
    ZeroToNegativePower,

    #[error("radical root exponent overflowed")]
    RootOverflow,

    #[error("enumeration too large: {count} exceeds cap {cap}")]
    EnumerationTooLarge { count: String, cap: u64 },

    #[error("candidate cap exceeded: reached {count} vectors (cap {cap})")]
    CapExceeded { count: usize, cap: usize },

    #[error("code has no nonzero codeword")]
    NoNonzeroCodeword,

    #[error("rank deficient: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("row {row} is not a member of the lattice")]
    NotAMember { row: usize },

    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("sublattice rank {l} is outside the supported range 1..={max}")]
    UnsupportedRank { l: usize, max: usize },

    #[error("certificate does not belong to this lattice: {0}")]
    MismatchedCertificate(String),

    #[error("inconsistent bounds for {cell}: lower {lower} > upper {upper}; lower from [{lower_provenance}], upper from [{upper_provenance}]")]
    InconsistentBounds {
        cell: String,
        lower: String,
        upper: String,
        lower_provenance: String,
        upper_provenance: String,
    },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("spec error: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
