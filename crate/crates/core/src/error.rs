use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the formula or channel.
    #[error("domain error: {0}")]
    Domain(String),

    /// The phase point carries no signal, so the error-propagation formula diverges.
    #[error("divergent sensitivity: {0}")]
    DivergentSensitivity(String),

    /// The requested configuration is outside what the closed form was derived for.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The Fock-space cutoff is too small for the state being simulated.
    #[error("truncation: tail mass {tail_mass:.3e} exceeds {limit:.3e} at cutoff {cutoff}")]
    Truncation {
        tail_mass: f64,
        limit: f64,
        cutoff: usize,
    },

    /// Two independent evaluation routes disagree; this indicates a bug.
    #[error("consistency: {what} disagree ({left} vs {right})")]
    Consistency {
        what: &'static str,
        left: f64,
        right: f64,
    },

    /// Every point of a phase grid was divergent.
    #[error("no signal anywhere on the phase grid")]
    NoSignal,
}

pub type Result<T> = std::result::Result<T, Error>;
