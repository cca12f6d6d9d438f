use thiserror::Error;

use crate::format::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("invalid permutation")]
    InvalidPermutation,
    #[error("difference of a point with itself is undefined")]
    SelfDifference,
    #[error("point {0} is not on the layout")]
    PointOutOfLayout(usize),
    #[error("unsupported initial shape: {0}")]
    UnsupportedShape(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("base system is not Sperner")]
    BaseNotSperner,
    #[error("no k-partition exists for n = {n} < k = {k}")]
    NoPartition { n: usize, k: usize },
    #[error("no candidates: n = {n} < k * min_class_size = {k} * {min_class_size}")]
    NoCandidates {
        n: usize,
        k: usize,
        min_class_size: usize,
    },
    #[error("graph too large for the exhaustive oracle: {0} vertices")]
    GraphTooLarge(usize),
    #[error("no initial partition found for k = {0}")]
    NoInitialPartition(usize),
    #[error("internal error: construction produced an invalid system: {0}")]
    ConstructionFailed(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
