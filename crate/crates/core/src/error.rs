use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("subsystem index {index} out of range for {parties} parties")]
    SubsystemIndex { index: usize, parties: usize },

    #[error("operator is not Hermitian (max |M - M†| = {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    Trace(f64),

    #[error("operator has a negative eigenvalue")]
    NotPositive,

    #[error("state norm is {0}, expected 1")]
    Norm(f64),

    #[error("spectrum is not ±1: {0}")]
    Spectrum(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Boundary of the GGHZ family: the state factorises.
    #[error("theta = {0} gives a product state; expected 0 < theta < pi/2")]
    ProductState(f64),

    #[error("zero Bloch vector does not define an observable")]
    ZeroVector,

    #[error("the two settings of {party} coincide")]
    IdenticalSettings { party: &'static str },

    #[error("Charlie's settings are not mutually unbiased")]
    NotMutuallyUnbiased,

    #[error(
        "conditioning event a={a}, b={b} under settings x={x}, y={y} has probability {probability:.3e}"
    )]
    UndefinedConditional {
        a: u8,
        b: u8,
        x: u8,
        y: u8,
        probability: f64,
    },

    #[error("optimizer failed: all {restarts} restarts hit undefined conditionals")]
    OptimizerFailed { restarts: usize },

    #[error("empty direct-sum specification")]
    EmptySpec,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
