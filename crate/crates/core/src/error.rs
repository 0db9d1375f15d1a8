use thiserror::Error;

/// Errors raised by the boundary-condition analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BcError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} exceeds {allowed:.3e})")]
    NonHermitianInput { asymmetry: f64, allowed: f64 },
    #[error("interpolation system is singular")]
    SingularSystem,
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("boundary conditions are linearly dependent (numerical rank {rank} < {expected})")]
    DependentRows { rank: usize, expected: usize },
    #[error("boundary condition row is zero")]
    ZeroRow,
    #[error("non-finite coefficient at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("order {0} is odd; operation requires an even order")]
    OddOrder(usize),
    #[error("order {0} is even; operation requires an odd order")]
    EvenOrder(usize),
    #[error("structural rank sums are only defined for even order, got {0}")]
    OddOrderUnsupported(usize),
    #[error("boundary conditions are not dissipative")]
    NotDissipative,
    #[error("Z₊ = (Q + iP)N is rank deficient ({rank} < {expected})")]
    RankDeficiency { rank: usize, expected: usize },
    #[error("matrix is not a contraction (operator norm {0:.6})")]
    NotAContraction(f64),
    #[error("system is not normalized: {0}")]
    NotNormalized(String),
    #[error("roots of -1 could not be strictly ordered")]
    OrderingDegeneracy,
    #[error("degenerate system: {0}")]
    DegenerateSystem(String),
    #[error("tolerance {name} = {value} outside [0, 1e-2]")]
    InvalidTolerance { name: &'static str, value: f64 },
    #[error("order must be at least 1")]
    ZeroOrder,
}

pub type Result<T> = std::result::Result<T, BcError>;
