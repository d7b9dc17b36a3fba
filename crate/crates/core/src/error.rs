use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("subgroup has infinite index (generator determinant is zero)")]
    InfiniteIndex,
    #[error("unsupported rank {rank}: exhaustive search is limited to rank <= {max}")]
    UnsupportedRank { rank: usize, max: usize },
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;
