use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("zero inverse")]
    ZeroInverse,
    #[error("field mismatch")]
    FieldMismatch,
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{value} has no image in F{modulus}")]
    NotRepresentable { value: String, modulus: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch")]
    FieldMismatch,
    #[error("algebra must have dimension at least 1")]
    EmptyAlgebra,
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("subspaces belong to different algebras")]
    AlgebraMismatch,
    #[error("multiplication table has {found} entries, expected {expected}")]
    BadTable { expected: usize, found: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NilpotenceError {
    #[error("not an ideal")]
    NotAnIdeal,
    #[error("not Malcev")]
    NotMalcev,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("jacobian node not allowed here")]
    JacobianNode,
    #[error("expected a right product of length >= 2")]
    NotRightProduct,
    #[error("unassigned symbol `{0}`")]
    UnassignedSymbol(String),
    #[error("term syntax error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("normal-product rewriting revisited a product it was still expanding")]
    RewriteCycle,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Field(#[from] FieldError),
}
