use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Every module reports through this one enum so that callers (the CLI in
/// particular) can map failures to diagnostics without juggling types.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("input vectors are linearly dependent (Gram rank {rank} < {count})")]
    DependentInput { rank: usize, count: usize },
    #[error("matrix is not a projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("step-function level must be at least 1, got {0}")]
    BadLevel(u32),
    #[error("functional is not a state: {0}")]
    NotAState(String),
    #[error("basis does not span a *-algebra: {0}")]
    NotAnAlgebra(String),
    #[error("functional is not dominated by the state (defect {defect:.3e})")]
    NotDominated { defect: f64 },
    #[error("map is not completely positive (min Choi eigenvalue {min_eigenvalue:.3e})")]
    NotCp { min_eigenvalue: f64 },
    #[error("map is not unital (residual {residual:.3e})")]
    NotUnital { residual: f64 },
    #[error("dilations do not describe the same map (residual {residual:.3e})")]
    NotSameMap { residual: f64 },
    #[error("dilation is not minimal: {0}")]
    NotMinimal(String),
    #[error("action is not a homomorphism into automorphisms: {0}")]
    NotAnAction(String),
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("point {0} is not on the unit circle")]
    OffCircle(f64),
    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("test function support leaves the quadrature domain: {0}")]
    SupportOutOfDomain(String),
    #[error("grid size {got} is below the minimum {min}")]
    GridTooSmall { got: usize, min: usize },
    #[error("vector is outside the operator domain (boundary mass {0:.3e})")]
    OutsideDomain(f64),
    #[error("deficiency indices differ (d+ = {d_plus}, d- = {d_minus})")]
    IndexMismatch { d_plus: usize, d_minus: usize },
    #[error("mode count {modes} invalid for grid of {grid} points")]
    BadModeCount { modes: usize, grid: usize },
    #[error("singular matrix")]
    Singular,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
