use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid support: {0}")]
    InvalidSupport(String),
    #[error("rademacher noise is a null construction and requires beta_star = 0 (got {0})")]
    RademacherWithSignal(f64),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("missing pseudo-expectation value for subset {0:?}")]
    MissingValue(Vec<usize>),
    #[error("matrix entry ({0}, {1}) = {2} is not binary")]
    NotBinary(usize, usize, f64),
    #[error("certificate undefined: no all-positive clique of size {0}")]
    CertificateUndefined(usize),
    #[error("exact arithmetic overflow: {0}")]
    Overflow(String),
    #[error("eigensolver failed to converge on a {0}x{0} matrix")]
    EigFailure(usize),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag, used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "InvalidParams",
            Error::InvalidSupport(_) => "InvalidSupport",
            Error::RademacherWithSignal(_) => "RademacherWithSignal",
            Error::TooLarge(_) => "TooLarge",
            Error::MissingValue(_) => "MissingValue",
            Error::NotBinary(..) => "NotBinary",
            Error::CertificateUndefined(_) => "CertificateUndefined",
            Error::Overflow(_) => "Overflow",
            Error::EigFailure(_) => "EigFailure",
            Error::Format(_) => "Format",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
            Error::Csv(_) => "Csv",
        }
    }
}
