use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // fields
    #[error("characteristic {0} is not an odd prime")]
    CompositeModulus(u64),
    #[error("modulus polynomial is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,

    // curves
    #[error("singular curve")]
    SingularCurve,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("operands lie on different curves")]
    MixedCurves,
    #[error("E[{0}] is not rational over the base field")]
    TorsionNotRational(u64),
    #[error("divisor support collision in Miller evaluation")]
    DivisorSupportCollision,
    #[error("kernel generator does not have order {0}")]
    BadKernelOrder(u64),
    #[error("point count is unknown and the field exceeds the enumeration budget")]
    PointCountUnavailable,

    // orders and pair values
    #[error("pair value has a zero coordinate")]
    ZeroCoordinate,
    #[error("{modulus} is not smooth (prime factor {factor})")]
    NotSmooth { modulus: u64, factor: u64 },
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("no solution")]
    NoSolution,

    // orientations
    #[error("endomorphism violates the minimal polynomial mod {0}")]
    MinPolyMismatch(u64),
    #[error("denominator {0} is not invertible on the torsion")]
    DenominatorNotInvertible(i64),
    #[error("point is not in the {0}-torsion")]
    PointNotInTorsion(u64),
    #[error("point does not have order {0}")]
    WrongOrder(u64),
    #[error("cyclicity metadata contradicts the empirical generator search")]
    EmpiricalContradiction,
    #[error("no subgroup of the requested order is killed by the ideal")]
    NoSuchSubgroup,
    #[error("no eigenbasis: the order is not split at {0}")]
    NotSplit(u64),
    #[error("cannot evaluate endomorphism: {0}")]
    BadEndomorphism(String),

    // pairings
    #[error("mu_{0} is not contained in the field")]
    RootsOfUnityMissing(u64),
    #[error("conjugate is not invertible modulo the element")]
    ConjugateNotInvertible,
    #[error("divisor is not principal")]
    NonPrincipalDivisor,
    #[error("auxiliary point retry budget exhausted")]
    SupportCollision,

    // discrete logs
    #[error("element is not in the subgroup")]
    NotInSubgroup,
    #[error("point is not in the torsion subgroup")]
    NotInTorsion,
    #[error("internal consistency check failed: {0}")]
    InternalInconsistency(String),
    #[error("base pairing value is degenerate")]
    DegenerateBase,

    // attacks
    #[error("self-pairing has order below m")]
    DegenerateSelfPairing,
    #[error("prime {0} is ramified in the order")]
    RamifiedPrime(u64),
    #[error("neither coefficient is a unit")]
    CoefficientNotInvertible,
    #[error("neither basis point generates the torsion as a module")]
    NoGeneratorAmongPQ,
    #[error("no candidate was verified by the isogeny oracle")]
    OracleExhausted,
    #[error("{0} does not divide the discriminant")]
    NotRamified(u64),
    #[error("second orientation does not anti-commute with the first")]
    NotAntiCommuting,
    #[error("no majority among the orientation votes")]
    MajorityInconclusive,
    #[error("two distinct kernels match the claimed images")]
    AmbiguousMatch,
    #[error("no oriented kernel of degree {degree}: {diagnosis}")]
    NoSplitPrimeKernel { degree: u64, diagnosis: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::CompositeModulus(..) => "COMPOSITE_MODULUS",
            Error::ReducibleModulus(..) => "REDUCIBLE_MODULUS",
            Error::ZeroElement => "ZERO_ELEMENT",
            Error::DivisionByZero => "DIVISION_BY_ZERO",
            Error::MixedFields => "MIXED_FIELDS",
            Error::SingularCurve => "SINGULAR_CURVE",
            Error::NotOnCurve => "NOT_ON_CURVE",
            Error::MixedCurves => "MIXED_CURVES",
            Error::TorsionNotRational(..) => "TORSION_NOT_RATIONAL",
            Error::DivisorSupportCollision => "DIVISOR_SUPPORT_COLLISION",
            Error::BadKernelOrder(..) => "BAD_KERNEL_ORDER",
            Error::PointCountUnavailable => "POINT_COUNT_UNAVAILABLE",
            Error::ZeroCoordinate => "ZERO_COORDINATE",
            Error::NotSmooth { .. } => "NOT_SMOOTH",
            Error::BudgetExceeded(..) => "BUDGET_EXCEEDED",
            Error::NoSolution => "NO_SOLUTION",
            Error::MinPolyMismatch(..) => "MIN_POLY_MISMATCH",
            Error::DenominatorNotInvertible(..) => "DENOMINATOR_NOT_INVERTIBLE",
            Error::PointNotInTorsion(..) => "POINT_NOT_IN_TORSION",
            Error::WrongOrder(..) => "WRONG_ORDER",
            Error::EmpiricalContradiction => "EMPIRICAL_CONTRADICTION",
            Error::NoSuchSubgroup => "NO_SUCH_SUBGROUP",
            Error::NotSplit(..) => "NOT_SPLIT",
            Error::BadEndomorphism(..) => "BAD_ENDOMORPHISM",
            Error::RootsOfUnityMissing(..) => "ROOTS_OF_UNITY_MISSING",
            Error::ConjugateNotInvertible => "CONJUGATE_NOT_INVERTIBLE",
            Error::NonPrincipalDivisor => "NON_PRINCIPAL_DIVISOR",
            Error::SupportCollision => "SUPPORT_COLLISION",
            Error::NotInSubgroup => "NOT_IN_SUBGROUP",
            Error::NotInTorsion => "NOT_IN_TORSION",
            Error::InternalInconsistency(..) => "INTERNAL_INCONSISTENCY",
            Error::DegenerateBase => "DEGENERATE_BASE",
            Error::DegenerateSelfPairing => "DEGENERATE_SELF_PAIRING",
            Error::RamifiedPrime(..) => "RAMIFIED_PRIME",
            Error::CoefficientNotInvertible => "COEFFICIENT_NOT_INVERTIBLE",
            Error::NoGeneratorAmongPQ => "NO_GENERATOR_AMONG_PQ",
            Error::OracleExhausted => "ORACLE_EXHAUSTED",
            Error::NotRamified(..) => "NOT_RAMIFIED",
            Error::NotAntiCommuting => "NOT_ANTI_COMMUTING",
            Error::MajorityInconclusive => "MAJORITY_INCONCLUSIVE",
            Error::AmbiguousMatch => "AMBIGUOUS_MATCH",
            Error::NoSplitPrimeKernel { .. } => "NO_SPLIT_PRIME_KERNEL",
            Error::Precondition(..) => "PRECONDITION",
            Error::Malformed(..) => "MALFORMED",
        }
    }
}
