use thiserror::Error;

/// Errors raised by polynomial construction, measure evaluation and the searches.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("exponent overflow: |exponent| exceeds 2^62")]
    ExponentOverflow,

    #[error("{0}: undefined for zero polynomial")]
    ZeroPolynomial(&'static str),

    #[error("derivative degenerate: polynomial is constant")]
    DerivativeDegenerate,

    #[error("root finder did not converge after {iterations} iterations (best residual {best_residual:e})")]
    NoConvergence {
        iterations: usize,
        best_residual: f64,
    },

    #[error(
        "circle-zero saturation: {skipped} of {total} sample points were zeros of the polynomial"
    )]
    CircleZeroSaturation { skipped: usize, total: usize },

    #[error("vanishing restriction: substitution with n = {n} gives the zero polynomial")]
    VanishingRestriction { n: u64 },

    #[error("subset scan infeasible for {terms} terms (limit 20)")]
    SubsetScanInfeasible { terms: usize },

    #[error("non-unit coefficients: every coefficient must equal 1")]
    NonUnitCoefficients,

    #[error("Φ_1(1) = 0, excluded by the prime-power evaluation rule")]
    PhiOneExcluded,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("corrupt record at line {line}: {message}")]
    CorruptRecord { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code, printed by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "E_PARSE",
            Error::ExponentOverflow => "E_EXPONENT_OVERFLOW",
            Error::ZeroPolynomial(_) => "E_ZERO_POLYNOMIAL",
            Error::DerivativeDegenerate => "E_DERIVATIVE_DEGENERATE",
            Error::NoConvergence { .. } => "E_NO_CONVERGENCE",
            Error::CircleZeroSaturation { .. } => "E_CIRCLE_ZERO_SATURATION",
            Error::VanishingRestriction { .. } => "E_VANISHING_RESTRICTION",
            Error::SubsetScanInfeasible { .. } => "E_SUBSET_SCAN_INFEASIBLE",
            Error::NonUnitCoefficients => "E_NON_UNIT_COEFFICIENTS",
            Error::PhiOneExcluded => "E_PHI_ONE_EXCLUDED",
            Error::Precondition(_) => "E_PRECONDITION",
            Error::InvalidArgument(_) => "E_INVALID_ARGUMENT",
            Error::CorruptRecord { .. } => "E_CORRUPT_RECORD",
            Error::Io(_) => "E_IO",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
