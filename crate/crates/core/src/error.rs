use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("ideal must be nonzero")]
    ZeroIdeal,

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("factoring budget exceeded: generator {value} needs {bits} bits, budget is {budget} bits")]
    FactorBudget { value: String, bits: u32, budget: u32 },

    #[error("{divisor} does not divide {dividend}")]
    NotDivisible { divisor: String, dividend: String },

    #[error("ideals {0} and {1} are not coprime")]
    NotCoprime(String, String),

    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),

    #[error("enumeration cap of {cap} elements exceeded")]
    CapExceeded { cap: usize },

    #[error("projection onto factor {factor} is not surjective ({image} of {order} elements hit)")]
    ProjectionNotSurjective { factor: usize, image: usize, order: usize },

    #[error("not a subgroup: {0}")]
    SubgroupViolation(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("identity failed: {0}")]
    IdentityFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
