use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("num_sites must be odd (got {0})")]
    EvenSites(usize),
    #[error("num_sites must be at least 3 (got {0})")]
    TooFewSites(usize),
    #[error("invalid hopping amplitude: {0}")]
    InvalidHopping(String),
    #[error("invalid coupling parameter: {0}")]
    InvalidCoupling(String),

    #[error("mode set holds at most {max} modes (got {got})")]
    TooManyModes { got: usize, max: usize },
    #[error("duplicate mode {0}")]
    DuplicateMode(String),
    #[error("unknown wire label '{0}'")]
    UnknownWire(char),
    #[error("mode index {index} out of range for {count} modes")]
    ModeOutOfRange { index: usize, count: usize },
    #[error("mode sets do not match")]
    ModeSetMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("operator '{0}' is not Hermitian")]
    NotHermitian(String),
    #[error("operator '{0}' does not act only on the requested wires")]
    NotLocal(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("invalid state serialization: {0}")]
    Serialization(String),

    #[error("gate matrix is not unitary")]
    NotUnitary,
    #[error("control and target wire must differ (both '{0}')")]
    SameWire(char),

    #[error("eigenvalue {value} of {observable} does not match any allowed quantum number")]
    SectorAssignment { observable: &'static str, value: f64 },
    #[error("requested symmetry sector is empty")]
    EmptySector,

    #[error("state has a component orthogonal to the ground space of its sector")]
    RelaxationUndefined,
    #[error("relaxation produced the zero vector")]
    RelaxationVanished,

    #[error("spin amplitudes are not normalized: |g1|^2 + |g2|^2 = {0}")]
    NotNormalized(f64),
    #[error("no Bob correction for J = {j}, J_z = {m}")]
    NoCorrection { j: String, m: String },
    #[error("restart loop did not reach integer spin within {0} rounds")]
    RoundCapExceeded(u32),
    #[error("resource has no singlet weight")]
    UselessResource,
    #[error("trial count must be at least 1")]
    NoTrials,
}

pub type Result<T> = std::result::Result<T, Error>;
