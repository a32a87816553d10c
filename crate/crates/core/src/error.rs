use thiserror::Error;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("pole: evaluation point coincides with the pole")]
    Pole,
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("coincident poles at indices {0} and {1}")]
    CoincidentPoles(usize, usize),
    #[error("grid error: {0}")]
    Grid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("character obstruction: use character_defect")]
    CharacterObstruction,
    #[error("inadmissible gain: {0}")]
    InadmissibleGain(String),
    #[error("range: {0}")]
    Range(String),
    #[error("Lelong condition failed at {0}")]
    LelongFailed(usize),
    #[error("resolution too coarse: {0}")]
    ResolutionTooCoarse(String),
    #[error("weight singularity on grid")]
    WeightSingularity,
    #[error("infeasible or redundant constraints")]
    InfeasibleConstraints,
    #[error("basis degenerate at this resolution (degree {0})")]
    DegenerateBasis(usize),
    #[error("constraint residual too large: {0:.3e}")]
    ConstraintResidual(f64),
    #[error("no extremal formula available: {0}")]
    NoExtremalFormula(String),
    #[error("statement (4) computable only on the disk")]
    StatementFourDiskOnly,
    #[error("splitting requires product data: {0}")]
    SplittingRequiresProductData(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
