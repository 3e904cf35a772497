use thiserror::Error;

/// Errors raised by the exact-arithmetic toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("singular curve: 4A^3 + 27B^2 = 0")]
    SingularCurve,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("twist parameter D must be nonzero")]
    ZeroTwist,
    #[error("pairing inputs are not {0}-torsion points")]
    OrderMismatch(u64),
    #[error("pairing value left the ambient field (missing roots of unity for m = {0})")]
    FieldTooSmall(u64),
    #[error("division left a nonzero remainder")]
    NonzeroRemainder,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("primitive division polynomial assembly failed for N = {0}: {1}")]
    InexactAssembly(usize, &'static str),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("condition P({0},{1}) is not satisfied")]
    ConditionPNotSatisfied(usize, usize),
    #[error("unsupported pair (m, n) = ({0}, {1})")]
    UnsupportedPair(usize, usize),
    #[error("specialization is singular")]
    SingularSpecialization,
    #[error("family parameter u must be nonzero")]
    ZeroU,
    #[error("field requirement not met: {0}")]
    FieldRequirement(String),
    #[error("zero input where a unit is required")]
    ZeroInput,
    #[error("division by zero")]
    DivisionByZero,
    #[error("mismatched field contexts")]
    FieldMismatch,
    #[error("not enough data: {0}")]
    InsufficientData(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
