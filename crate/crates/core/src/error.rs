//! Error types shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by series evaluation, operator discretisation and solvers.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A problem or configuration failed validation against the solvability
    /// hypotheses. The inner variant names the violated condition.
    #[error("validation: {0}")]
    Validation(#[from] ValidationError),

    /// A series did not enter its decaying regime within the term cap.
    #[error("series did not converge within {max_terms} terms (last term {last_term:e})")]
    NonConvergence { max_terms: usize, last_term: f64 },

    /// The Picard iteration hit its iteration cap before the update norm
    /// dropped below tolerance.
    #[error("Picard iteration exceeded {max_iters} iterations (last update norm {last_update:e})")]
    MaxItersExceeded { max_iters: usize, last_update: f64 },

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two grids or vectors that must agree in length do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A scalar argument lies outside the admissible range.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// The substitution function psi failed its monotonicity or consistency
    /// checks.
    #[error("psi validation: {0}")]
    PsiValidation(String),

    /// A diagonal entry of the collocation system is numerically singular.
    /// Cannot occur for the second-kind form; kept as a hard check.
    #[error("singular diagonal entry {value:e} at row {row}")]
    SingularDiagonal { row: usize, value: f64 },
}

/// Violations of the problem hypotheses. Each variant corresponds to one
/// condition checked by the validators, so callers can match on the exact
/// failure.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("alpha must be positive")]
    AlphaNotPositive,
    #[error("beta_0 must be non-integer")]
    Beta0Integer,
    #[error("betas must be strictly decreasing")]
    BetasNotDecreasing,
    #[error("beta_m must be nonnegative")]
    BetaNegative,
    #[error("betas must be non-empty")]
    BetasEmpty,
    #[error("thetas must have the same length as betas")]
    ThetasLength,
    #[error("expected {expected} coefficient functions, got {got}")]
    SigmasLength { expected: usize, got: usize },
    #[error("expected {expected} initial values, got {got}")]
    InitialValuesLength { expected: usize, got: usize },
    #[error("horizon T must be positive")]
    HorizonNotPositive,
    #[error("parameters must be finite")]
    NonFiniteParameter,
    #[error("tabulated function has {got} samples but the grid has {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("grid must have at least {min} points, got {got}")]
    GridTooCoarse { min: usize, got: usize },
    #[error("tolerances and caps must be positive")]
    BadSolveConfig,
    #[error("multivariate parameters must be non-empty with all alphas and beta positive")]
    BadMvParams,
    #[error("alpha and beta of the integral kernel must be positive")]
    BadKernelParams,
}
