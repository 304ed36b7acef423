use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        SyntaxError { line, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("duplicate rule id {0}")]
    DuplicateId(u32),
    #[error("modifier refers to unknown rule {0}")]
    UnknownRule(u32),
    #[error("inconsistent set {{{0}}} has fewer than 2 atoms")]
    SmallInconsistentSet(String),
    #[error("fact `{0}` is not ground")]
    NonGroundFact(String),
    #[error("rule {0} is not ground")]
    NonGroundRule(u32),
    #[error("instance id {0} of a schematic rule collides with an existing rule")]
    IdCollision(u32),
    #[error("grounding rule {id} needs more than {cap} instances")]
    InstanceCap { id: u32, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("unsafe rule `{0}`: every variable must occur in a positive body atom")]
    Unsafe(String),
    #[error("grounding exceeds {0} rules")]
    GroundingCap(usize),
    #[error("{what} needs 2^{bits} candidates, above the cap of 2^{cap}")]
    CandidateCap { what: &'static str, bits: usize, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AspError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl AspError {
    /// Whether the error is a resource cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            AspError::Solve(SolveError::GroundingCap(_) | SolveError::CandidateCap { .. })
                | AspError::Config(ConfigError::InstanceCap { .. })
        )
    }
}
