use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the geometry, zeta, and spectrum routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported ambient dimension {0}")]
    UnsupportedDimension(u32),

    #[error("s = {s} lies within 1e-9 of the pole {pole}")]
    PoleProximity { s: Complex64, pole: Complex64 },

    #[error("no closed form is available for {0}")]
    NoClosedForm(String),

    #[error("{0}")]
    Nonconvergence(String),

    #[error("empty grid")]
    EmptyGrid,

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("{0} is not a pole of the form")]
    NotAPole(Complex64),

    #[error("pole {omega} has order {order}; only simple poles are supported")]
    HigherOrderPole { omega: Complex64, order: u32 },

    #[error("contour integral unstable under node doubling (difference {0:e})")]
    ContourUnstable(f64),

    #[error("abscissa scan did not bracket: {0}")]
    NonBracketing(String),

    #[error("periodicity check failed: max deviation {0:e}")]
    Periodicity(f64),

    #[error("exponent vectors are rationally dependent: relation {relation:?}")]
    DependentExponents { relation: Vec<i64> },

    #[error("series diverges at Re s = {0} (abscissa {1})")]
    Divergent(f64, f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
