use std::path::PathBuf;

/// Errors raised by grids, schemes, integrators and the study harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("x = {x} lies outside [{a}, {b}]")]
    OutOfInterval { x: f64, a: f64, b: f64 },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("transform length must be odd (2n+1), got {0}")]
    EvenLength(usize),

    #[error("scheme {scheme} requires a {required} domain, problem {problem} is not")]
    PeriodicityMismatch {
        scheme: &'static str,
        problem: String,
        required: &'static str,
    },

    #[error("checkpoint t = {checkpoint} is not on the Euler step lattice t0 + k*{step} (t0 = {t0})")]
    OffLattice { checkpoint: f64, t0: f64, step: f64 },

    #[error("step size underflow at t = {t}: h = {h} (rejected {rejected} steps)")]
    StepUnderflow { t: f64, h: f64, rejected: usize },

    #[error("non-finite right-hand side at t = {t}")]
    NonFinite { t: f64 },

    #[error("step limit of {0} exceeded")]
    TooManySteps(usize),

    #[error("reference quadrature cross-check failed for {problem}: {coarse} vs {fine}")]
    QuadratureCrossCheck {
        problem: String,
        coarse: f64,
        fine: f64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with all context layers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn is_io(&self) -> bool {
        matches!(self.root(), Error::Io { .. } | Error::Csv { .. })
    }

    pub fn is_usage(&self) -> bool {
        matches!(
            self.root(),
            Error::InvalidArgument(_)
                | Error::Parse(_)
                | Error::PeriodicityMismatch { .. }
                | Error::OffLattice { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
