use thiserror::Error;

/// Errors raised across the library.
///
/// Variants map one-to-one onto the failure modes each operation can report;
/// the CLI turns them into exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not normal (||M^H M - M M^H|| = {deviation:e})")]
    NotNormal { deviation: f64 },

    #[error("state vector is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("spectrum is degenerate; use the degenerate builder")]
    DegenerateSpectrum,

    #[error("purely degenerate spectrum (L = 1): no Hermitian A can form a canonical pair with B")]
    PurelyDegenerate,

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("projection must keep at least two basis indices, got {0}")]
    TooSmall(usize),

    #[error("commutator has no eigenvalue {expected} after projection")]
    NoCanonicalEigenvalue { expected: String },

    #[error("family constraint violated: {0}")]
    FamilyConstraintViolated(String),

    #[error("commutator eigenvalue {0} is not purely imaginary; pair is not Hermitian")]
    NotHermitianPair(String),

    #[error("scaling (lambda, rho) yields a non-real factor for c = {0}")]
    NonRealScaling(String),

    #[error("operators commute (||[A,B]|| = {norm:e}); no essentially canonical relation")]
    CommutingPair { norm: f64 },

    #[error("matrix is not traceless (|tr| = {trace:e})")]
    NotTraceless { trace: f64 },

    #[error("the zero matrix is not a commutator")]
    TrivialMatrix,

    #[error("B values must be pairwise distinct (repeated {0})")]
    RepeatedBValue(f64),

    #[error("requested commutator eigenvalue must be nonzero")]
    ZeroEigenvalueRequested,

    #[error("input list is empty")]
    EmptyInput,

    #[error("value {0} is not strictly positive")]
    NonPositiveValue(f64),

    #[error("state lies outside the canonical domain (distance {distance:e})")]
    StateOutsideDomain { distance: f64 },

    #[error("base point t = {t} is not in the parameter invariant set (residual {residual:e})")]
    BasePointNotInvariant { t: f64, residual: f64 },

    #[error("Hamiltonian is degenerate; the closed-form commuting factor needs distinct energies")]
    DegenerateHamiltonian,

    #[error("no canonical domain: [T,H] has no eigenvalue {expected}")]
    NoCanonicalDomain { expected: String },
}

pub type Result<T> = std::result::Result<T, Error>;
