use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("images do not form a bijection on {degree} points")]
    NotBijection { degree: usize },

    #[error("group is not transitive")]
    NotTransitive,

    #[error("partition is not invariant under generator {generator}")]
    NotInvariant { generator: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("subgroup generator {generator} is not an element of the group")]
    NotSubgroup { generator: usize },

    #[error("element is not in the group")]
    NotInGroup,

    #[error("generator {generator} maps block {block} outside the block set")]
    NotAutomorphism { generator: usize, block: usize },

    #[error("design is trivial (k = {k}, v = {v}); pass force to evaluate anyway")]
    TrivialDesign { v: usize, k: usize },

    #[error("design is not symmetric: {0}")]
    NotSymmetric(String),

    #[error("block index {index} out of range ({count} blocks)")]
    BlockOutOfRange { index: usize, count: usize },

    #[error("cannot factor {0}; supply a factorization in the catalog")]
    Factorization(String),

    #[error("catalog: {0}")]
    Catalog(String),

    #[error("unknown dataset `{0}`")]
    UnknownDataset(String),

    #[error("checksum mismatch for dataset `{0}`")]
    Checksum(String),

    #[error("unknown strategy {0}")]
    UnknownStrategy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
