use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by an expression that reduces to zero")]
    DivisionByZero,
    #[error("operands live in different constraint contexts")]
    ContextMismatch,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{0}` is not a chart coordinate")]
    NotACoordinate(String),
    #[error("invalid constraint rule for `{var}`: {reason}")]
    InvalidRule { var: String, reason: String },
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("form degree {degree} is too low for this contraction")]
    DegreeTooLow { degree: usize },
    #[error("not a contact form: {0}")]
    NotContact(String),
    #[error("contact structures need an odd-dimensional chart, got dimension {0}")]
    EvenDimension(usize),
    #[error("Reeb field system could not be solved")]
    SolveFailed,
    #[error("expected a top-degree form")]
    NotTopForm,
    #[error("iterated commutator still contains derivatives (order {order})")]
    NotMultiplication { order: usize },
    #[error("operator has non-constant coefficients")]
    NonConstantCoefficients,
    #[error("conformal factor is not a function of the Casimir p.p")]
    NotCasimirFunction,
    #[error("map component violates the target constraint for `{0}`")]
    ConstraintViolation(String),
    #[error("witness evaluation unsupported: {0}")]
    WitnessUnsupported(String),
    #[error("operation cancelled")]
    Cancelled,
    #[error("model construction failed: {0}")]
    Construction(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
