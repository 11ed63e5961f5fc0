use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is composite")]
    CompositeInput(u64),
    #[error("{0} is even; an odd prime modulus is required")]
    EvenInput(u64),
    #[error("modulus {0} out of range (need 3 <= p < 2^31)")]
    ModulusOutOfRange(u64),
    #[error("tuple coordinates are not pairwise distinct")]
    NotDistinct,
    #[error("operation requires an even tuple length, got k = {0}")]
    OddK(usize),
    #[error("invalid tuple length k = {0}")]
    InvalidK(usize),
    #[error("enumeration of {required} tuples exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("sets must be nonempty")]
    EmptySet,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("hypothesis A+B subset of R_p violated at {a} + {b}")]
    HypothesisViolated { a: u32, b: u32 },
    #[error("eta = {0} outside [0, 1/2)")]
    EtaOutOfRange(f64),
    #[error("delta = {0} outside (1/8, 1]")]
    DeltaOutOfRange(f64),
    #[error(
        "could not build a residue instance of sizes ({na}, {nb}): candidate pool shrank to {pool}"
    )]
    ConstructionFailed { na: usize, nb: usize, pool: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
