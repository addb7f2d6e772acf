use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    /// `|Y|²` fell below the underflow guard; the linear response is singular.
    #[error("degenerate denominator: |Y|^2 = {norm_sqr:e}")]
    DegenerateDenominator { norm_sqr: f64 },

    #[error("probe Rabi frequency {probe} exceeds the perturbative limit {limit}")]
    ProbeTooStrong { probe: f64, limit: f64 },

    #[error("coherence system is singular (pivot {pivot:e})")]
    SingularSystem { pivot: f64 },

    #[error("oracle result depends on probe amplitude (relative spread {spread:e})")]
    ProbeDependent { spread: f64 },

    #[error("time integration not converged: window spread {spread:e} of mean {mean:e}")]
    NotConverged { spread: f64, mean: f64 },

    #[error("invalid integration settings: {0}")]
    InvalidStep(String),

    #[error("root formula requires gamma2 = 0, got {gamma2}")]
    RequiresMetastable { gamma2: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("profile contains {gaps} gap(s); peak finding needs a complete profile")]
    GappedProfile { gaps: usize },

    #[error("convention adjudication inconclusive: full {full:e}, halved {halved:e}")]
    Inconclusive { full: f64, halved: f64 },
}
