use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the library.
///
/// Variants are grouped by [`Error::kind`] so front ends can map them onto
/// exit codes without matching every variant.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vector norm {norm:e} is too small to normalize")]
    ZeroVector { norm: f64 },
    #[error("component {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("dimension {dim} is below the minimum of 2")]
    DimensionTooSmall { dim: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("similarity {0} lies outside [-1, 1] beyond round-off")]
    SimilarityOutOfRange(f64),
    #[error("norm constraint violated: residual {residual:e}")]
    ConstraintViolated { residual: f64 },
    #[error("every component is zero")]
    AllZero,
    #[error("multiplier vector is zero")]
    DegenerateMultipliers,
    #[error("multiplier {value} at index {index} breaks the |v| >= 1 or v = 0 convention")]
    MultiplierConvention { index: usize, value: f64 },
    #[error("non-physical configuration: sum of v_i a_i = {overlap:e}")]
    NonPhysicalConfiguration { overlap: f64 },
    #[error("operator breaks the unit norm: |Ha| = {norm}")]
    NormBroken { norm: f64 },
    #[error("matrix is not orthogonal: max |U^T U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("indices must differ (both {0})")]
    EqualIndices(usize),
    #[error("invalid parity sign {value} at index {index}")]
    InvalidSign { index: usize, value: f64 },
    #[error("hbar must be positive, got {0}")]
    NonPositiveHbar(f64),
    #[error("dt must be positive, got {0}")]
    NonPositiveDt(f64),
    #[error("candidate set is empty")]
    EmptyCandidates,
    #[error("all {0} candidates are non-physical")]
    AllNonPhysical(usize),
    #[error("bad sampling range: {0}")]
    BadRange(String),

    #[error("parse error: {0}")]
    Parse(String),
    #[error("entry {id:?} has {found} values, file dim is {expected}")]
    EntryDimMismatch { id: String, expected: usize, found: usize },
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("entry {id:?} has norm {norm}, outside the load tolerance")]
    NormOutOfRange { id: String, norm: f64 },
    #[error("unknown id {0:?}")]
    UnknownId(String),
    #[error("io error: {0}")]
    Io(String),
}

/// Coarse classification used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    NonPhysical,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NonPhysicalConfiguration { .. } | Error::AllNonPhysical(_) => {
                ErrorKind::NonPhysical
            }
            Error::Parse(_)
            | Error::EntryDimMismatch { .. }
            | Error::DuplicateId(_)
            | Error::NormOutOfRange { .. }
            | Error::Io(_) => ErrorKind::Io,
            _ => ErrorKind::Validation,
        }
    }

    /// 2 validation failure, 3 non-physical configuration, 4 I/O or parse error.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::Validation => 2,
            ErrorKind::NonPhysical => 3,
            ErrorKind::Io => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
