use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrimeModulus(u64),
    #[error("modulus {0:?} is reducible over F_{1}")]
    ReducibleGFModulus(Vec<u64>, u64),
    #[error("group algebra invariant factor {factor} is not a power of {p}")]
    MixedCharacteristic { p: u64, factor: u64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("unsupported quotient: {0}")]
    UnsupportedQuotient(String),
    #[error("element is not a regular non-unit: {0}")]
    NotRegularElement(String),
    #[error("hom space over an infinite ring is not finite")]
    InfiniteHomSpace,
    #[error("invalid endomorphism: {0}")]
    InvalidEndomorphism(String),
    #[error("not a maximal ideal: {0}")]
    NotMaximalIdeal(String),
    #[error("incompatible tower at level {level}: {reason}")]
    IncompatibleTower { level: usize, reason: String },
    #[error("transition at level {level} is not a quasi-isomorphism")]
    NotQuasiIso { level: usize },
    #[error("transition at level {level} does not induce an isomorphism on ordinary parts")]
    OrdinaryTransitionNotIso { level: usize },
    #[error("hypothesis failure at level {level}: {square}")]
    HypothesisFailure { level: usize, square: String },
    #[error("no class stabilises up to horizon {horizon} with {levels} supplied levels")]
    HorizonTooDeep { horizon: usize, levels: usize },
    #[error("invalid patching datum: {0}")]
    InvalidDatum(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("enumeration exceeded bound {0}")]
    BoundExceeded(usize),
    #[error("generator {0} is singular")]
    SingularGenerator(usize),
    #[error("not a coset transversal: {0}")]
    NotTransversal(String),
    #[error("cocycle is identically zero")]
    ZeroCocycle,
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("inconsistent Tate inputs: {0}")]
    InconsistentTateInputs(String),
    #[error("negative result {value} for {what}")]
    NegativeResult { what: String, value: i64 },
    #[error("ledger mismatch: {0}")]
    LedgerMismatch(String),
    #[error("generation stalled after {0} resamples")]
    GenerationStalled(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
