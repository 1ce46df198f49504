use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("index {index} out of range (must be below {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("assembled matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("witness family {0} needs an angle parameter")]
    MissingAngle(&'static str),
    #[error("operation expects {expected} witnesses, got {actual}")]
    WrongFamily { expected: &'static str, actual: &'static str },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cannot parse witness id `{0}`")]
    BadWitnessId(String),
    #[error("sample {index} is not PPT (partial-transpose eigenvalue {min_eig:e} on cut {cut})")]
    PptViolation { index: u64, min_eig: f64, cut: String },
}
