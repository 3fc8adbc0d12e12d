use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode of the library. The variant name doubles as the
/// machine-readable reason reported by the command-line tool.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("extension modulus is reducible over the prime field")]
    ReducibleModulus,
    #[error("field is too large for this build: {0}")]
    FieldTooLarge(String),
    #[error("zero input where a unit is required")]
    ZeroInput,
    #[error("both polynomials are zero")]
    BothZero,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is constant")]
    ConstantInput,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("lift parameter d must be nonzero")]
    ZeroD,
    #[error("matrix is not square")]
    NotSquare,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is singular")]
    SingularInput,
    #[error("matrix is not cyclic")]
    NotCyclic,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("cannot decide irreducibility over the rationals")]
    Indeterminate,
    #[error("norm condition fails")]
    NormMismatch,
    #[error("input vector is not cyclic")]
    NotCyclicInput,
    #[error("matrix does not match the block quasi-companion pattern")]
    PatternMismatch,
    #[error("cyclicity check failed")]
    CyclicityFailed,
    #[error("characteristic polynomials are not coprime")]
    NotCoprime,
    #[error("matrix is not well-partitioned")]
    NotWellPartitioned,
    #[error("requested determinant sign is unreachable")]
    SignUnreachable,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("order obstruction: {0}")]
    OrderObstruction(String),
    #[error("field has no square root of -1")]
    NoSqrtMinusOne,
    #[error("alpha must avoid 0 and i")]
    BadAlpha,
    #[error("characteristic polynomial is not self-reciprocal")]
    NotSelfReciprocal,
    #[error("internal verification failed: {0}")]
    VerificationFailed(String),
    #[error("matrix is not a product of two involutions")]
    NotClassII,
    #[error("cells are not eligible for this construction")]
    IneligibleCells,
    #[error("norm is not a unit sign")]
    NormNotUnit,
    #[error("three unipotent factors need norm 1")]
    UUUNeedsNormOne,
    #[error("order condition fails: {0}")]
    OrderMismatch(String),
    #[error("determinant is not +1 or -1")]
    DetNotUnit,
    #[error("four unipotent factors need determinant 1")]
    UUUUNeedsDetOne,
    #[error("three unipotent factors need determinant 1")]
    UUUNeedsDetOne,
    #[error("order condition fails: {0}")]
    OrderConditionFailed(String),
    #[error("characteristic 2 is not supported here")]
    CharTwo,
    #[error("determinant condition fails")]
    DetConditionFailed,
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("enumeration too large")]
    TooLarge,
    #[error("oracle table does not match the query")]
    TableMismatch,
    #[error("unsupported pattern {0}")]
    UnsupportedPattern(String),
}

impl Error {
    /// Stable reason string for machine-readable output.
    pub fn reason(&self) -> &'static str {
        use Error::*;
        match self {
            CompositeModulus(_) => "CompositeModulus",
            ReducibleModulus => "ReducibleModulus",
            FieldTooLarge(_) => "FieldTooLarge",
            ZeroInput => "ZeroInput",
            BothZero => "BothZero",
            NotMonic => "NotMonic",
            ConstantInput => "ConstantInput",
            ZeroConstantTerm => "ZeroConstantTerm",
            ZeroD => "ZeroD",
            NotSquare => "NotSquare",
            ShapeMismatch(_) => "ShapeMismatch",
            FieldMismatch => "FieldMismatch",
            NoSolution => "NoSolution",
            SingularInput => "SingularInput",
            NotCyclic => "NotCyclic",
            PreconditionViolated(_) => "PreconditionViolated",
            HypothesisFailed(_) => "HypothesisFailed",
            Indeterminate => "Indeterminate",
            NormMismatch => "NormMismatch",
            NotCyclicInput => "NotCyclicInput",
            PatternMismatch => "PatternMismatch",
            CyclicityFailed => "CyclicityFailed",
            NotCoprime => "NotCoprime",
            NotWellPartitioned => "NotWellPartitioned",
            SignUnreachable => "SignUnreachable",
            DegenerateInput(_) => "DegenerateInput",
            OrderObstruction(_) => "OrderObstruction",
            NoSqrtMinusOne => "NoSqrtMinusOne",
            BadAlpha => "BadAlpha",
            NotSelfReciprocal => "NotSelfReciprocal",
            VerificationFailed(_) => "VerificationFailed",
            NotClassII => "NotClassII",
            IneligibleCells => "IneligibleCells",
            NormNotUnit => "NormNotUnit",
            UUUNeedsNormOne => "UUUNeedsNormOne",
            OrderMismatch(_) => "OrderMismatch",
            DetNotUnit => "DetNotUnit",
            UUUUNeedsDetOne => "UUUUNeedsDetOne",
            UUUNeedsDetOne => "UUUNeedsDetOne",
            OrderConditionFailed(_) => "OrderConditionFailed",
            CharTwo => "CharTwo",
            DetConditionFailed => "DetConditionFailed",
            MalformedInput(_) => "MalformedInput",
            TooLarge => "TooLarge",
            TableMismatch => "TableMismatch",
            UnsupportedPattern(_) => "UnsupportedPattern",
        }
    }
}
