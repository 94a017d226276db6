use thiserror::Error;

/// Errors raised by graph construction, exact algebra and the decision procedures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("unknown vertex {vertex} (graph has {n} vertices)")]
    UnknownVertex { vertex: usize, n: usize },
    #[error("vertex pair must be distinct, got {0} twice")]
    SameVertex(usize),
    #[error("invalid path length {0}; must be at least 1")]
    InvalidLength(usize),
    #[error("input too large: {what} is {size}, limit {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },
    #[error("spectral densities are defined over different eigenvalue grids")]
    MismatchedSupportGrids,
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_vertex(v: usize, n: usize) -> Result<()> {
    if v < n {
        Ok(())
    } else {
        Err(Error::UnknownVertex { vertex: v, n })
    }
}

pub(crate) fn check_pair(a: usize, b: usize, n: usize) -> Result<()> {
    check_vertex(a, n)?;
    check_vertex(b, n)?;
    if a == b {
        return Err(Error::SameVertex(a));
    }
    Ok(())
}
