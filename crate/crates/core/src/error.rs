use alloc::string::String;

/// Errors raised by constructors and operations of the core engine.
///
/// Verification outcomes are never errors: a failed axiom is a
/// [`Status::Fail`](crate::report::Status::Fail) inside a report.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("degree {degree} is outside the grading group of size {size}")]
    DegreeOutOfRange { degree: u32, size: u32 },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("duplicate basis name `{0}`")]
    DuplicateName(String),
    #[error("product {left}*{right} has a component on {target} of the wrong degree")]
    GradingViolation {
        left: String,
        right: String,
        target: String,
    },
    #[error("products {left}*{right} and {right}*{left} violate B-commutativity on {target}")]
    NotBCommutative {
        left: String,
        right: String,
        target: String,
    },
    #[error("gram matrix must be {dim}x{dim}")]
    GramShape { dim: usize },
    #[error("element is not homogeneous")]
    NonHomogeneous,
    #[error("identity `{0}` is not multilinear; use sampled mode")]
    NotMultilinear(&'static str),
    #[error("the algebra carries no bilinear form")]
    MissingForm,
    #[error("invalid toral subalgebra: {0}")]
    InvalidToral(String),
    #[error("action of {h} does not split over the rationals: factor {factor}")]
    NotSplit { h: String, factor: String },
    #[error("not a toral pair: {0}")]
    NotToral(String),
    #[error("the form restricted to H is degenerate")]
    DegenerateOnH,
    #[error("root {0} is not in the required support")]
    RootNotInSupport(String),
    #[error("the zero root has no test-pair")]
    ZeroRoot,
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("element does not match the loop flavor: {0}")]
    FlavorMismatch(String),
    #[error("form is not admissible: {0}")]
    FormNotAdmissible(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
}
