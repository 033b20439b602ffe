use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured cap (digit storage, Bernoulli stock, index range) was hit.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Inner condensation loop failed the ratio test within the hard cap.
    #[error("condensed series A_{j} did not converge within {cap} inner terms")]
    InnerNoConvergence { j: u64, cap: u32 },

    /// The denominator of a transform vanished at the current order.
    #[error("degenerate transform denominator at order {order}")]
    DegenerateTransform { order: usize },

    /// A remainder estimate omega_n is zero; the transform is undefined.
    #[error("zero remainder estimate at index {index}")]
    RemainderEstimate { index: usize },

    /// Convergence diagnostics require a known exact sum.
    #[error("diagnostics unsupported: term source has no known exact sum")]
    UnsupportedDiagnostics,

    #[error("invalid decimal literal: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
