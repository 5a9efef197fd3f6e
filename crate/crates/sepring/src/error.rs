use thiserror::Error;

/// Errors produced by ring construction, parsing, and the constructive
/// operations. Operations that are total on the representable rings only
/// return the variants documenting genuine misuse (mismatched rings,
/// violated preconditions).
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("corner element is not idempotent")]
    NotIdempotent,

    #[error("elements belong to different rings")]
    RingMismatch,

    #[error("matrix shapes are incompatible: {0}")]
    ShapeMismatch(String),

    #[error("linear system has no solution")]
    NoSolution,

    #[error("element is not unit-regular in component {component}")]
    NotUnitRegular { component: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("unknown builtin example `{0}`")]
    UnknownExample(String),

    #[error("unknown monoid property `{0}`")]
    UnknownProperty(String),

    #[error("element does not belong to monoid {0}")]
    MonoidMismatch(String),

    #[error("ring has {size} elements; exhaustive mode requires at most {max}")]
    TooLargeForExhaustive { size: u128, max: u128 },

    #[error("ring has {size} elements; sampled mode is only for rings larger than {max}")]
    SmallRingRequiresExhaustive { size: u128, max: u128 },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
