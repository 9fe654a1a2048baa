use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has dimension zero")]
    Empty,

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("matrix is not diagonalizable: {reason}")]
    NotDiagonalizable { reason: String },

    #[error("spectrum is not pseudohermitian: {reason}")]
    NotPseudohermitianSpectrum { reason: String },

    #[error("real eigenvalues with odd degeneracy: {}", format_groups(.0))]
    OddDegeneracy(Vec<(f64, usize)>),

    #[error("eta is not Hermitian (||eta - eta^dagger||_F = {0:e})")]
    NotHermitian(f64),

    #[error("eta is singular at working precision")]
    SingularEta,

    #[error(
        "antilinear witness failed verification (commutator {commutator:e}, square {square:e})"
    )]
    WitnessVerification { commutator: f64, square: f64 },

    #[error("evolution exponent out of range: |Im E|*|t| = {exponent:e} exceeds {limit}")]
    TimeRange { exponent: f64, limit: f64 },

    #[error("state vector is not unit-norm (norm {0})")]
    NotNormalized(f64),

    #[error("model is degenerate: k2*omega2 - 2*muB vanishes")]
    DegenerateModel,

    #[error("model has R = 0: eigenvalues coincide and the eigenbasis collapses")]
    RZero,

    #[error("model is in the complex-spectrum regime (condition (9) fails)")]
    ComplexSpectrumRegime,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("eigensolver failed to converge")]
    NoConvergence,
}

fn format_groups(groups: &[(f64, usize)]) -> String {
    groups
        .iter()
        .map(|(e, d)| format!("E={e} (d={d})"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}
