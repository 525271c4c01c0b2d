use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid spacing {spacing:.6} is too coarse; at most {required:.6} is needed to resolve the state")]
    Resolution { spacing: f64, required: f64 },

    #[error("degenerate state: {0}")]
    Degenerate(String),

    #[error("truncation requires n_max = {required}, above the cap of {cap}")]
    Capacity { required: usize, cap: usize },

    /// The conditional state has (numerically) zero norm for this outcome.
    #[error("improbable outcome p = {outcome}: conditional norm {norm:e} (log density {log_density:.3})")]
    ImprobableOutcome {
        outcome: f64,
        norm: f64,
        log_density: f64,
    },

    #[error("no cat state for mu = {mu} (requires mu > 0)")]
    NoCat { mu: f64 },

    #[error("no interference fringes: {crossings} zero crossings inside the envelope")]
    NoFringe { crossings: usize },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Innermost error, skipping stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}
