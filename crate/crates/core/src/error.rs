use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("a group needs at least one cyclic factor")]
    EmptyFactorList,
    #[error("cyclic factor orders must be >= 1, got {0}")]
    InvalidFactor(usize),
    #[error("group order {order} exceeds the cap {cap}")]
    OrderCap { order: u128, cap: usize },
    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },
    #[error("rank {rank} is out of range for a group of order {order}")]
    RankOutOfRange { rank: usize, order: usize },
    #[error("operands live in different groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },
    #[error("the shift set X must be nonempty")]
    EmptyShiftSet,
    #[error("parameter {name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("expected {expected} components, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("profile table exceeded {cap} distinct states")]
    ProfileCap { cap: usize },
    #[error("enumeration of {size} tuples exceeds the cap {cap}")]
    EnumerationCap { size: u128, cap: u128 },
    #[error("operation requires Z/p with p prime, got {0}")]
    NotPrimeField(String),
    #[error("{0} must be nonempty")]
    EmptySet(&'static str),
    #[error("function has a nonzero imaginary part")]
    ComplexValued,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("unknown check id {0}")]
    UnknownCheck(String),
    #[error("malformed instance: {0}")]
    MalformedInstance(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
