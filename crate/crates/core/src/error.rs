use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid word character {0:?}")]
    BadLetter(char),
    #[error("generator index {index} out of range for a group with {rank} generators")]
    LetterOutOfRange { index: usize, rank: usize },
    #[error("ball of radius {radius} would exceed the cap of {cap} elements")]
    BallCapExceeded { radius: usize, cap: usize },
    #[error("operation requires a finite permutation group")]
    NotFinite,
    #[error("operation requires a free group")]
    NotFree,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("coset enumeration exceeded the budget of {max_cosets} cosets")]
    CosetBudgetExhausted { max_cosets: usize },
    #[error("subgroup has infinite index")]
    InfiniteIndex,
    #[error("coset index {index} out of range 1..={size}")]
    CosetOutOfRange { index: usize, size: usize },
    #[error("word {0:?} is not in the subgroup")]
    NotInSubgroup(String),
    #[error("invalid boundary point: {0}")]
    BadBoundaryPoint(String),
    #[error("invalid point: {0}")]
    BadPoint(String),
    #[error("space is not transitive: orbit of {start} has {orbit} of {size} points")]
    NotTransitive { start: usize, orbit: usize, size: usize },
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid cylinder function: {0}")]
    InvalidFunction(String),
    #[error("strategy not applicable: {0}")]
    StrategyNotApplicable(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
