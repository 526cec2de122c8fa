use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures reported by the numeric pipeline. Magnitudes are carried as
/// `f64` regardless of the scalar type the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is numerically singular at pivot {pivot}")]
    SingularMatrix { pivot: usize },

    #[error("polynomial has no nonzero coefficient")]
    ZeroPolynomial,

    #[error("end coefficient vanishes (a_0 * a_d = 0)")]
    ZeroEndCoefficient,

    #[error("root iteration did not converge, worst scaled residual {worst_residual:e}")]
    NoConvergence { worst_residual: f64 },

    #[error("index {index} outside [{lo}, {hi}]")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("Schur-Cohn determinants vanish at indices {indices:?}")]
    DegenerateSequence { indices: Vec<usize> },

    #[error("D_{n} has magnitude {magnitude:e}, below the degeneracy threshold")]
    DegenerateDn { n: usize, magnitude: f64 },

    #[error("level {n}: solution breaks conjugate pairing by {deviation:e}")]
    ConjugatePairingViolation { n: usize, deviation: f64 },

    #[error("level {n}: accumulated product S_n is numerically singular")]
    SingularS { n: usize },

    #[error("level {n}: Hamiltonian asymmetry {residual:e} exceeds tolerance")]
    Asymmetric { n: usize, residual: f64 },

    #[error("level {level}: denominator Re(a conj(i b)) = {value:e} too small")]
    ZeroDenominator { level: usize, value: f64 },

    #[error("level {level}: coefficient-recursion matrix is singular")]
    SingularP { level: usize },

    #[error("Hamiltonian block has determinant {det}, expected 1")]
    NotUnimodular { det: f64 },

    #[error("boundary vector (A, B) is zero")]
    ZeroBoundary,

    #[error("solution mismatch {mismatch:e} at joint t = {joint}")]
    ContinuityViolation { joint: f64, mismatch: f64 },

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("Hamiltonian blocks {indices:?} are near singular; signature undefined")]
    AmbiguousSignature { indices: Vec<usize> },

    #[error("grid point t = {t} lies within 2h of a piece joint")]
    GridTouchesJoint { t: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::ZeroEndCoefficient => "ZeroEndCoefficient",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DegenerateSequence { .. } => "DegenerateSequence",
            Error::DegenerateDn { .. } => "DegenerateDn",
            Error::ConjugatePairingViolation { .. } => "ConjugatePairingViolation",
            Error::SingularS { .. } => "SingularS",
            Error::Asymmetric { .. } => "Asymmetric",
            Error::ZeroDenominator { .. } => "ZeroDenominator",
            Error::SingularP { .. } => "SingularP",
            Error::NotUnimodular { .. } => "NotUnimodular",
            Error::ZeroBoundary => "ZeroBoundary",
            Error::ContinuityViolation { .. } => "ContinuityViolation",
            Error::DegenerateSpectrum(_) => "DegenerateSpectrum",
            Error::AmbiguousSignature { .. } => "AmbiguousSignature",
            Error::GridTouchesJoint { .. } => "GridTouchesJoint",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
