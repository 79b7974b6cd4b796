use thiserror::Error;

pub type Result<T> = std::result::Result<T, FgError>;

#[derive(Debug, Error)]
pub enum FgError {
    #[error("thickness coordinate y = {y} mm lies outside the section [{bottom}, {top}]")]
    OutOfThickness { y: f64, bottom: f64, top: f64 },

    #[error("axial coordinate x = {x} mm lies outside [0, {length}]")]
    OutOfSpan { x: f64, length: f64 },

    #[error("invalid material model: {0}")]
    InvalidModel(String),

    #[error("{0} is not positive definite")]
    NonPositiveDefinite(&'static str),

    #[error(
        "characteristic constant g = {g:e} mm^-2 is not negative; only the real-root \
         (g < 0) branch of the force-field solution is implemented"
    )]
    UnsupportedEigenBranch { g: f64 },

    #[error("linear system is singular (relative residual {residual:e})")]
    SingularSystem { residual: f64 },

    #[error("invalid boundary case: {0}")]
    InvalidCase(String),

    #[error("section x = {x} mm is closer than one element column to a support or load")]
    TooCloseToBoundary { x: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl FgError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            FgError::Config(_) | FgError::InvalidModel(_) | FgError::InvalidCase(_) | FgError::Io(_) => 2,
            _ => 3,
        }
    }
}
