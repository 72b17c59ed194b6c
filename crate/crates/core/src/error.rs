use thiserror::Error;

/// Errors raised by the samplers, the diagnostics and the theory lab.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WlError {
    /// A point or index lies outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),
    /// A parameter combination violates an operation's preconditions.
    #[error("configuration error: {0}")]
    Config(String),
    /// The bounding chain does not drift downwards (`a*eta >= b*epsilon`).
    #[error("drift error: a*eta = {up} is not below b*epsilon = {down}; the hitting time may be infinite")]
    Drift { up: f64, down: f64 },
    /// A coupling probability exceeds one, so the supplied conditional law
    /// does not dominate the bounding chain.
    #[error("coupling domination error: {name} = {value} > 1")]
    CouplingDomination { name: &'static str, value: f64 },
    /// The requested evaluation only exists for two bins.
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("trace format error: {0}")]
    TraceFormat(String),
    #[error("diagnostic failure: {0}")]
    Diagnostic(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for WlError {
    fn from(e: std::io::Error) -> Self {
        WlError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, WlError>;
