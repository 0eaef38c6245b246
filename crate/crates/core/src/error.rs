use implicit_jet_oracle::OracleError;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("order {n} exceeds the configured cap {max}")]
    OverCap { n: u32, max: u32 },

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("singular jet: f_y vanishes at the base point")]
    SingularJet,

    #[error("jet lacks partial ({p},{t})")]
    MissingPartial { p: u32, t: u32 },

    #[error("jet order {have} is too small, need {need}")]
    InsufficientOrder { need: u32, have: u32 },

    #[error("mixed scalar kinds in one computation")]
    MixedKinds,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown format `{0}`")]
    UnknownFormat(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("Newton iteration failed to converge at x = {x}")]
    NewtonDivergence { x: f64 },

    #[error("finite-difference step {0} underflows at the base point")]
    StepUnderflow(f64),

    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
