use alloc::string::String;

/// Errors raised by the library. Variants name the violated contract.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty letter: symbol {0} has an all-zero row or column")]
    EmptyLetter(usize),
    #[error("bad theta: {0} is not strictly between 0 and 1")]
    BadTheta(f64),
    #[error("malformed transition matrix: {0}")]
    BadMatrix(String),
    #[error("cap exceeded: {what} needs {required}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        required: u128,
        cap: u128,
    },
    #[error("cycle cap exceeded: more than {cap} elementary cycles")]
    CycleCapExceeded { cap: usize },
    #[error("missing word {0} in potential table")]
    MissingWord(String),
    #[error("extra word {0} in potential table")]
    ExtraWord(String),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("inadmissible word {0}")]
    InadmissibleWord(String),
    #[error("matrix is not irreducible")]
    NotIrreducible,
    #[error("shift is not transitive")]
    NotTransitive,
    #[error("tolerance unreachable: floating-point slack {slack:e} exceeds tolerance {tol:e}")]
    ToleranceUnreachable { slack: f64, tol: f64 },
    #[error("eigenvalue iteration did not reach width {tol:e} (best width {width:e})")]
    NotConverged { width: f64, tol: f64 },
    #[error("enclosure too wide, retry with smaller tol: {0}")]
    EnclosureTooWide(&'static str),
    #[error("transfer matrices need potentials on cylinders of length 1 or 2, got {0}")]
    LevelTooHigh(usize),
    #[error("empty input")]
    EmptyInput,
    #[error("degenerate rotation set: affine dimension {affine_dim} < {m}")]
    DegenerateRotationSet { affine_dim: usize, m: usize },
    #[error("point not certified interior after {steps} refinement steps")]
    NotCertified { steps: usize },
    #[error("ball does not meet interior image: no grid point has rotation vector in the ball")]
    EmptySelection,
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(&'static str),
    #[error("rotation vector solve diverged: {0}")]
    Divergence(&'static str),
    #[error("oracle certificate violated: error bound {bound:e} is not below {eps:e}")]
    CertificateViolated { bound: f64, eps: f64 },
    #[error("sandwich did not converge: best bracket [{l}, {u}] after {levels} levels")]
    SandwichNotConverged { l: f64, u: f64, levels: usize },
    #[error("construction violated at step {step}: {detail}")]
    ConstructionViolated { step: u8, detail: String },
}

pub type Result<T> = core::result::Result<T, Error>;
