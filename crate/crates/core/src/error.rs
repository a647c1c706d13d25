use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field element {0} has no inverse")]
    ZeroInverse(u16),
    #[error("x^{m} polynomial {poly:#x} is not primitive")]
    NotPrimitive { m: u32, poly: u32 },
    #[error("unsupported extension degree {0} (expected 2..=16)")]
    UnsupportedDegree(u32),
    #[error("invalid code parameters: {0}")]
    InvalidCode(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parity-check matrix is rank deficient: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("input length {got} does not match expected {expected}")]
    Length { got: usize, expected: usize },
    #[error("unknown decoder variant `{0}`")]
    UnknownVariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
