use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("polynomial {0:?} is reducible over F_{1}")]
    ReduciblePolynomial(Vec<u64>, u64),
    #[error("product ring needs at least one factor")]
    EmptyProduct,
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("not a maximal ideal of this ring")]
    InvalidIdeal,
    #[error("operation unsupported for ring {0}")]
    UnsupportedRing(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("additive map is not well defined: column {col} of order {order} hits row {row} of modulus {modulus}")]
    IllFormedMap {
        row: usize,
        col: usize,
        order: u64,
        modulus: u64,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("algebras have different base rings")]
    BaseMismatch,
    #[error("base map is not a ring homomorphism: {0}")]
    InvalidBaseHom(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("homomorphisms are not composable")]
    ComposabilityMismatch,
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("identity has arity {expected}, got {got} arguments")]
    ArityMismatch { expected: usize, got: usize },
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("exhaustive mode needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("quotient would be the zero ring")]
    ZeroRing,
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("suite `{0}` samples randomly and needs a seed")]
    MissingSeed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
