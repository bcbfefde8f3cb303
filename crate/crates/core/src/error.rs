use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coin is not unitary: max |U†U - I| = {residual:e}")]
    NotUnitary { residual: f64 },
    #[error("coin diagonal entry c_{direction}{direction} vanishes, its phase is undefined")]
    ZeroDiagonal { direction: char },
    #[error("parameter {value} must lie strictly inside the unit disk")]
    ModulusOutOfRange { value: f64 },
    #[error("|a| = {modulus} >= 1: the null-odd CMV matrix is undefined")]
    AOutOfRange { modulus: f64 },
    #[error("|b| = {modulus} >= 1: the null-even CMV matrix is undefined")]
    BOutOfRange { modulus: f64 },
    #[error("Verblunsky coefficient alpha_{index} has modulus {modulus} >= 1")]
    BadModulus { index: usize, modulus: f64 },
    #[error("CMV truncation size {size} is invalid (need an even size >= 4)")]
    SizeTooSmall { size: usize },
    #[error("vector length {got} does not match operator dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("truncation {dim} is too small for t = {t}, indices ({l}, {m})")]
    TruncationTooSmall { dim: usize, t: usize, l: usize, m: usize },
    #[error("Laurent polynomials cannot be evaluated at z = 0")]
    ZeroArgument,
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("|z| = {modulus} is not inside the open unit disk")]
    InsideDiskViolation { modulus: f64 },
    #[error("initial coin state has squared norm {norm_sq}, expected 1")]
    NotNormalized { norm_sq: f64 },
    #[error("walk support reaches the truncation boundary (size {size}, time {time})")]
    TruncationOverflow { size: usize, time: usize },
    #[error("no paper-class coin realizes the requested parameter: {0}")]
    Unrealizable(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
