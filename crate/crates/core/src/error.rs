use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite input in {0}")]
    NonFinite(&'static str),

    #[error("empty box: lower > upper at component {0}")]
    EmptyBox(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("diverged/non-finite iterate at step {step}")]
    Diverged { step: usize },

    #[error("strong convexity required: mu + nu must be positive")]
    StrongConvexityRequired,

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("bound valid only for n >= 2n0 (n = {n}, n0 = {n0})")]
    BoundRange { n: usize, n0: usize },

    #[error("n0 too small: eta at n0 = {eta} exceeds 1")]
    N0TooSmall { eta: f64 },

    #[error("degenerate window: {0}")]
    DegenerateWindow(String),

    #[error("trace has neither iterate snapshots nor a running average")]
    MissingIterates,

    #[error("empty component list")]
    EmptyComponents,
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn check_finite(v: &[f64], what: &'static str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}
