use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("singular Weierstrass model (discriminant is zero)")]
    SingularModel,
    #[error("invalid coordinate change: u must be nonzero")]
    InvalidTransform,
    #[error("coordinate change produced a non-integral model")]
    NonIntegralModel,
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("class functions live on different groups")]
    GroupMismatch,
    #[error("inner product is not an integer")]
    NonIntegralInnerProduct,
    #[error("matrices do not define a representation: {0}")]
    InvalidRepresentation(String),
    #[error("averaged pairing is degenerate; retry with a different seed")]
    DegenerateSeed,
    #[error("pairing is degenerate on the fixed subspace of {0}")]
    DegeneratePairing(String),
    #[error("character is not self-dual")]
    NotSelfDual,
    #[error("inadmissible decomposition/inertia pair: {0}")]
    InadmissiblePair(String),
    #[error("inadmissible local setting: {0}")]
    InadmissibleSetting(String),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("p must be >= 5 (got {0})")]
    PrimeTooSmall(u64),
    #[error("moduli are not pairwise coprime")]
    NonCoprimeModuli,
    #[error("no completion data supplied for bad prime {0}")]
    MissingBadPrime(String),
    #[error("surgery plan invalid: {0}")]
    InvalidPlan(String),
    #[error("surgery did not converge: {0}")]
    SurgeryFailed(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
