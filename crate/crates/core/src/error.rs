use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group specification `{0}`")]
    GroupSpec(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("coordinate {coord} out of range for factor of order {order}")]
    Coordinate { coord: i64, order: u32 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cochain degree mismatch: expected {expected}, got {got}")]
    Degree { expected: usize, got: usize },
    #[error("theta = {theta} is not admissible on Z_{n} (theta*N must be an integer)")]
    Theta { theta: String, n: u32 },
    #[error("cochain is not normalized at {0:?}")]
    NotNormalized(Vec<usize>),
    #[error("not an antisymmetric tricharacter: {0}")]
    NotTricharacter(String),
    #[error("cube root of a phase sum is ambiguous or undefined at {args:?}: {reason}")]
    CubeRoot { args: Vec<usize>, reason: String },
    #[error("system failed validation: {0}")]
    Invalid(String),
    #[error("split hypothesis violated: {0}")]
    SplitHypothesis(String),
    #[error("search failed: {0}")]
    Search(String),
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("descent equation failed: {0}")]
    Descent(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
