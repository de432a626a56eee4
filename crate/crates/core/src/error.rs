use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("matrix is not symplectic within {tol:.1e} (residual {residual:.3e})")]
    NotSymplectic { residual: f64, tol: f64 },

    #[error("phase {index} has modulus {modulus}, expected 1")]
    NonUnitPhase { index: usize, modulus: f64 },

    #[error("unknown mode label {0}")]
    UnknownMode(usize),

    #[error("expected a two-mode state, found {0} modes")]
    NotTwoMode(usize),

    #[error("unphysical state: smallest symplectic eigenvalue {0}")]
    Unphysical(f64),

    #[error("eigenvalue {re:.6e} has imaginary part {im:.3e}")]
    ComplexEigenvalue { re: f64, im: f64 },

    #[error("eigenvalues of i*Omega*m do not form +/- pairs (mismatch {0:.3e})")]
    Unpaired(f64),

    #[error("eigenvalue decomposition failed to converge")]
    EigenFailure,

    #[error("unperturbed symplectic eigenvalues are not degenerate at 1 (deviation {0:.3e})")]
    DegeneracyNotFound(f64),

    #[error("degenerate eigenspace cannot be biorthogonalized")]
    NotBiorthogonal,

    #[error("symplectic projection did not converge in {iterations} iterations (residual {residual:.3e})")]
    ProjectionDiverged { iterations: usize, residual: f64 },

    #[error("quadrature did not converge (estimated error {error:.3e})")]
    Quadrature { error: f64 },

    #[error("series extrapolation of order {order} did not converge (error {error:.3e}, scale {scale:.3e})")]
    SeriesNotConverged { order: u32, error: f64, scale: f64 },

    #[error("cutoff {cutoff} not converged: result shifts by {shift:.3e} when doubled")]
    CutoffNotConverged { cutoff: usize, shift: f64 },

    #[error("modes {0} and {1} have an even sum; two-mode truncation needs opposite parity")]
    EvenParity(usize, usize),

    #[error("two-mode state is not symmetric: local determinants {0} and {1}")]
    AsymmetricState(f64, f64),

    #[error("malformed coefficient file (line {line}): {msg}")]
    Format { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ComplexEigenvalue { .. }
                | Error::Unpaired(_)
                | Error::EigenFailure
                | Error::DegeneracyNotFound(_)
                | Error::NotBiorthogonal
                | Error::ProjectionDiverged { .. }
                | Error::Quadrature { .. }
                | Error::SeriesNotConverged { .. }
                | Error::CutoffNotConverged { .. }
                | Error::Unphysical(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
