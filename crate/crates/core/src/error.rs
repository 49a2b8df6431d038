use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot parse rational `{0}`")]
    Parse(String),

    #[error("invalid jacobi specification: {0}")]
    InvalidJacobi(String),

    #[error("q must lie in [0, 1], got {0}")]
    QOutOfRange(String),

    #[error("jacobi weight omega({index}) = {value} is not positive")]
    NonPositiveWeight { index: usize, value: String },

    #[error("jacobi weight index {index} outside explicit list of length {len}")]
    WeightIndexOutOfRange { index: usize, len: usize },

    #[error("jacobi weights are indexed from 1, got 0")]
    ZeroWeightIndex,

    #[error("scale must be positive, got {0}")]
    NonPositiveScale(String),

    #[error("word enumeration needs m <= {cap}, got m = {m}")]
    WordCapExceeded { m: usize, cap: usize },

    #[error("truncation dimension K = {k} too small for state N = {n} (need K >= N + 2)")]
    DimensionTooSmall { k: usize, n: usize },

    #[error("dimension K = {k} exceeds the eigensolver limit {limit}")]
    DimensionTooLarge { k: usize, limit: usize },

    #[error("row {row} outside matrix of dimension {k}")]
    RowOutOfRange { row: usize, k: usize },

    #[error("QL iteration did not converge for eigenvalue {index} after {sweeps} sweeps")]
    NoConvergence { index: usize, sweeps: usize },

    #[error("amplitude squared must be positive, got {0}")]
    NonPositiveAmplitude(String),

    #[error("invalid atom ({location}, {weight})")]
    InvalidAtom { location: f64, weight: f64 },

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by computational limits rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::WordCapExceeded { .. }
                | Error::DimensionTooSmall { .. }
                | Error::DimensionTooLarge { .. }
                | Error::NoConvergence { .. }
        )
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
