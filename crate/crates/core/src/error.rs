use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("bad value in data row {row}, column `{column}`: {reason}")]
    BadValue { row: usize, column: String, reason: String },
    #[error("no data rows")]
    EmptyData,
    #[error("malformed csv: {0}")]
    Csv(String),
    #[error("invalid model spec: {0}")]
    InvalidSpec(String),
    #[error("singular design: column `{column}` is collinear with earlier columns")]
    SingularDesign { column: String },
    #[error("underdetermined fit: {rows} rows for {cols} coefficients")]
    Underdetermined { rows: usize, cols: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("zero variance in `{0}`")]
    ZeroVariance(String),
    #[error("no turning point: quadratic coefficient is zero")]
    NoTurningPoint,
    #[error("missing covariate `{0}`")]
    MissingCovariate(String),
    #[error("too many singular resamples: {skipped} redraws exceed budget of {allowed}")]
    TooManySingular { skipped: usize, allowed: usize },
    #[error("model is not quadratic")]
    NotQuadratic,
    #[error("exact enumeration limited to n <= 5, got n = {0}")]
    TooLarge(usize),
    #[error("grid value {value} outside observed range [{min}, {max}]; extrapolation not allowed")]
    OutsideRange { value: f64, min: f64, max: f64 },
}

/// Coarse classification used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Numerical,
    Usage,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::MissingColumn(_)
            | Error::BadValue { .. }
            | Error::EmptyData
            | Error::Csv(_)
            | Error::InvalidSpec(_)
            | Error::MissingCovariate(_)
            | Error::TooLarge(_) => ErrorKind::Input,
            Error::SingularDesign { .. }
            | Error::Underdetermined { .. }
            | Error::ZeroVariance(_)
            | Error::NoTurningPoint
            | Error::TooManySingular { .. }
            | Error::NotQuadratic => ErrorKind::Numerical,
            Error::Domain(_) | Error::OutsideRange { .. } => ErrorKind::Usage,
        }
    }
}
