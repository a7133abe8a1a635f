use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the kernel can report.
///
/// Witnesses are rendered in the ring's canonical notation so that one error
/// type serves both coefficient backends.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("tables do not define a ring: {axiom} fails at {witness:?}")]
    TableNotARing { axiom: &'static str, witness: Vec<usize> },
    #[error("unsupported size for {what}: {size} exceeds {cap}")]
    UnsupportedSize { what: String, size: usize, cap: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("map is not additive at ({0}, {1})")]
    NotAdditive(String, String),
    #[error("map is not multiplicative at ({0}, {1})")]
    NotMultiplicative(String, String),
    #[error("map does not send 1 to 1")]
    NotUnital,
    #[error("twisted Leibniz rule fails at ({0}, {1})")]
    LeibnizViolation(String, String),
    #[error("map is not bijective")]
    NotBijective,
    #[error("operation needs an enumerable coefficient ring: {0}")]
    PolynomialBackendUnsupported(&'static str),
    #[error("sigma_{0} is not injective")]
    NonInjectiveSigma(usize),
    #[error("d_{{{0},{1}}} is zero")]
    ZeroDij(usize, usize),
    #[error("associativity fails on ({0}) * ({1}) * ({2})")]
    AssociativityFailure(String, String, String),
    #[error("rewriting did not terminate within {0} steps")]
    RewriteFuelExhausted(u64),
    #[error("module axiom `{axiom}` fails at {witness:?}")]
    ModuleAxiomFailure { axiom: &'static str, witness: Vec<usize> },
    #[error("search space of {candidates} candidates exceeds the cap {cap}")]
    SearchSpaceTooLarge { candidates: u128, cap: u128 },
    #[error("module with {size} elements exceeds the cap {cap}")]
    ModuleTooLarge { size: usize, cap: usize },
    #[error("no good lift found while raising x{coordinate}: {reason}")]
    NoLiftFound { coordinate: usize, reason: String },
    #[error("good-polynomial conditions disagree: {0}")]
    EquivalenceBroken(String),
    #[error("operation needs a nonzero module")]
    ZeroModule,
    #[error("hypothesis not certified: {0}")]
    HypothesisNotCertified(String),
    #[error("nothing found within degree bound {0}")]
    NotFoundAtBound(usize),
    #[error("closed form disagrees with exhaustive oracle: {0}")]
    OracleMismatch(String),
    #[error("assertion failed: {0}")]
    AssertionFailed(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Internal-consistency failures: a correct kernel never produces these.
    pub fn is_defect(&self) -> bool {
        matches!(
            self,
            Error::EquivalenceBroken(_) | Error::OracleMismatch(_) | Error::AssertionFailed(_)
        )
    }
}
