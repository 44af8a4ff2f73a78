use thiserror::Error;

/// Errors raised by the set-system operations and the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set must contain at least one label")]
    EmptyGround,
    #[error("invalid label {0:?}")]
    InvalidLabel(String),
    #[error("duplicate label {0:?} in ground set")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("point index {index} outside ground set of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("sets belong to different ground sets")]
    GroundMismatch,
    #[error("duplicate member {0}")]
    DuplicateMember(String),
    #[error("empty family")]
    EmptyFamily,
    #[error("member {0} is not in the set system")]
    NotAMember(String),
    #[error("set system is not union-closed: {0} and {1} have no union in the family")]
    NotUnionClosed(String, String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("negative weight {value} on member {member}")]
    NegativeWeight { member: String, value: String },
    #[error("weight undefined on member {0}")]
    WeightNotTotal(String),
    #[error("weight does not belong to this set system")]
    WeightSystemMismatch,
    #[error("invalid spread: {0}")]
    InvalidSpread(String),
    #[error("invalid colouring: {0}")]
    InvalidColouring(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("family is compressible: dropping {0} keeps the join")]
    Compressible(String),
    #[error("no eligible point: {0}")]
    NoEligiblePoint(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
