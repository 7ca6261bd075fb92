use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertices are not in strictly convex position: {0}")]
    NonConvexInput(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("body has no interior (area {area:e})")]
    DegenerateBody { area: f64 },
    #[error("resolution mismatch: {left} vs {right}")]
    GridMismatch { left: String, right: String },
    #[error("invalid resolution: {0}")]
    BadResolution(String),
    #[error("operator is singular (det = {det:e})")]
    SingularOperator { det: f64 },
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("support function is not convex: curvature radius {min_curvature:e} below -{tolerance:e}")]
    NotConvex { min_curvature: f64, tolerance: f64 },
    #[error("convexity lost along the flow at t = {t}: curvature radius {min_curvature:e}")]
    ConvexityViolated { t: f64, min_curvature: f64 },
    #[error("diameter decreased along the trajectory at t = {t}: {before} -> {after}")]
    DiameterDecreased { t: f64, before: f64, after: f64 },
    #[error("linear program infeasible or unbounded: {0}")]
    LpInfeasible(String),
    #[error("operator is not a rotation")]
    NotRotation,
    #[error("operator does not permute the {grid}-direction grid")]
    GridIncompatible { grid: usize },
    #[error("cannot represent the result: {0}")]
    NotRepresentable(String),
    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),
    #[error("sample times must be strictly increasing")]
    NonIncreasingTimes,
    #[error("operator is not stable: {0}")]
    NotStableOperator(String),
    #[error("comparison system needs m >= 3, got {0}")]
    BadOrder(usize),
    #[error("operator does not satisfy A^{m} = I (residual {residual:e})")]
    NotPeriodic { m: usize, residual: f64 },
    #[error("initial body is not in the attraction manifold (residual {residual:e} > {tolerance:e})")]
    NotInManifold { residual: f64, tolerance: f64 },
    #[error("random body generation failed after {0} rejections")]
    GenerationFailed(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures that signal a broken numerical invariant rather than
    /// bad user input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            Error::ConvexityViolated { .. }
                | Error::DiameterDecreased { .. }
                | Error::LpInfeasible(_)
                | Error::NotInManifold { .. }
                | Error::GenerationFailed(_)
        )
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        if self.is_invariant_violation() {
            2
        } else {
            3
        }
    }
}
