//! Error taxonomy shared by all modules.

use crate::C64;
use std::fmt;

/// Everything that can go wrong in this crate.
#[derive(Debug)]
pub enum Error {
    /// A matrix was not square with even dimension, or `n = 0` was requested.
    InvalidDimension(String),
    /// Two operands whose dimensions must agree do not.
    DimensionMismatch(String),
    /// A scalar argument is outside its domain (e.g. zero where nonzero is required).
    InvalidValue(String),
    /// The requested value is not in the computed spectrum within tolerance.
    NotAnEigenvalue { lambda: C64, min_dist: f64 },
    /// The structure-preserving update does not apply: no eigenvector pair with
    /// a nonzero symplectic pairing exists (the Segre characteristic of the
    /// eigenvalue has no trivial chain).
    NotApplicable(String),
    /// An operation requiring a simple eigenvalue was handed a multiple one.
    NotSimple { lambda: C64, multiplicity: usize },
    /// An eigenvalue could not be matched with a reciprocal partner.
    PairingFailure { orphan: C64 },
    /// The supplied root does not solve the coefficient quadratic.
    InconsistentRoot { eta: C64, residual: f64 },
    /// A claimed eigenpair fails its defining relation.
    InvalidEigenpair { residual: f64 },
    /// A post-hoc structural check failed (the result is not trustworthy).
    NumericalFailure { what: String, residual: f64 },
    /// The problem is outside the regular regime (e.g. nearly singular pencil).
    IllPosed(String),
    /// LAPACK reported a failure.
    Lapack { routine: &'static str, info: i32 },
    /// File I/O failed.
    Io(std::io::Error),
    /// A file had the wrong format.
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension(msg) => write!(f, "invalid dimension: {msg}"),
            Error::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::InvalidValue(msg) => write!(f, "invalid value: {msg}"),
            Error::NotAnEigenvalue { lambda, min_dist } => write!(
                f,
                "{lambda} is not an eigenvalue (closest spectrum point at distance {min_dist:.3e})"
            ),
            Error::NotApplicable(msg) => write!(f, "update not applicable: {msg}"),
            Error::NotSimple { lambda, multiplicity } => write!(
                f,
                "eigenvalue {lambda} is not simple (multiplicity {multiplicity})"
            ),
            Error::PairingFailure { orphan } => {
                write!(f, "eigenvalue {orphan} has no reciprocal partner within tolerance")
            }
            Error::InconsistentRoot { eta, residual } => write!(
                f,
                "eta = {eta} does not solve the coefficient quadratic (residual {residual:.3e})"
            ),
            Error::InvalidEigenpair { residual } => {
                write!(f, "claimed eigenpair fails its relation (residual {residual:.3e})")
            }
            Error::NumericalFailure { what, residual } => {
                write!(f, "numerical failure in {what} (residual {residual:.3e})")
            }
            Error::IllPosed(msg) => write!(f, "ill-posed problem: {msg}"),
            Error::Lapack { routine, info } => write!(f, "LAPACK {routine} failed with info = {info}"),
            Error::Io(e) => write!(f, "io error: {e}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
