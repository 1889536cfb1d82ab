use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("configuration outside the closed ordered space-like domain: {0}")]
    Domain(String),
    #[error("hypersurface is not space-like at z = {z}: slope {slope}")]
    Slope { z: f64, slope: f64 },
    #[error("grid problem: {0}")]
    Grid(String),
    #[error("no root of the construction satisfies all constraints")]
    NoRoot,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
