use thiserror::Error;

/// Everything that can go wrong across the crate.
///
/// Geometry constructors reject inputs outside their domain rather than
/// returning NaN; numerical routines report budget exhaustion and known
/// divergences as distinct variants so callers can tell them apart.
#[derive(Debug, Error)]
pub enum Error {
    #[error("exponent m must be at least 2 (got {m}); use NormSpace::oracle for the m = 1 check mode")]
    InvalidExponent { m: u32 },

    #[error("input must be finite")]
    NonFiniteInput,

    #[error("the zero vector has no direction")]
    ZeroVector,

    #[error("tangent vectors are degenerate (zero or parallel)")]
    DegenerateTangents,

    #[error("invalid profile jet: {reason}")]
    InvalidJet { reason: &'static str },

    #[error("integrand is singular at {location}, inside the integration interval")]
    InteriorSingularity { location: f64 },

    #[error("quadrature used {budget} evaluations without reaching tolerance (error estimate {error_estimate:e})")]
    QuadratureBudget { budget: u64, error_estimate: f64 },

    #[error("integral diverges: {reason}")]
    DivergentIntegral { reason: &'static str },

    #[error("parameter outside the admissible range: {reason}")]
    Domain { reason: String },

    #[error("{value} lies outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("iteration did not converge after {iterations} steps (residual {residual:e})")]
    DidNotConverge { iterations: u32, residual: f64 },

    #[error("u = {u} is not a junction of this curve")]
    NotAJunction { u: f64 },

    #[error("operation does not apply to this curve: {reason}")]
    WrongCase { reason: &'static str },

    #[error("failed to parse mesh file at line {line}: {reason}")]
    MeshParse { line: usize, reason: String },

    #[error("io error on {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(reason: impl Into<String>) -> Self {
        Error::Domain { reason: reason.into() }
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
