use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown value `{0}`")]
    UnknownValue(String),

    #[error("unknown argument `{0}`")]
    UnknownArgument(String),

    #[error("audience orders {found} values but the framework has {expected}")]
    AudienceMismatch { expected: usize, found: usize },

    #[error("graph is over {found} arguments but {expected} were expected")]
    ArgumentSetMismatch { expected: usize, found: usize },

    #[error("cannot enumerate audiences over {values} values (limit {limit})")]
    EnumerationBudgetExceeded { values: usize, limit: usize },

    #[error("search space of {estimated} cases exceeds the cap of {cap}")]
    BudgetExceeded { estimated: u128, cap: u128 },

    #[error("invalid search bounds: {0}")]
    InvalidBounds(String),

    #[error("search exceeded its time budget after {checked} cases")]
    TimeBudgetExceeded { checked: u64 },

    #[error("profile is empty")]
    EmptyProfile,

    #[error("a value cannot be compared with itself")]
    EqualValues,

    #[error("rule does not fit the profile: {0}")]
    RuleProfileMismatch(String),

    #[error("agent {agent}'s graph is not a defeat graph of the framework")]
    UnjustifiedInput { agent: usize },

    #[error("explicit audience for agent {agent} does not induce that agent's graph")]
    InvalidExplicitTable { agent: usize },

    #[error("no framework within bounds justifies the profile")]
    NoJustifyingVaf,

    #[error("profile edge {0} -> {1} is not a candidate attack")]
    EdgeOutsideCandidates(String, String),

    #[error("invalid framework: {0}")]
    InvariantViolation(String),

    #[error("{0}")]
    Parse(String),
}

impl Error {
    /// Parse-class failures: the input never made it to a computation.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::InvariantViolation(_))
    }

    /// Stable machine-readable tag used in error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownValue(_) => "unknown_value",
            Error::UnknownArgument(_) => "unknown_argument",
            Error::AudienceMismatch { .. } => "audience_mismatch",
            Error::ArgumentSetMismatch { .. } => "argument_set_mismatch",
            Error::EnumerationBudgetExceeded { .. } => "enumeration_budget_exceeded",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::InvalidBounds(_) => "invalid_bounds",
            Error::TimeBudgetExceeded { .. } => "time_budget_exceeded",
            Error::EmptyProfile => "empty_profile",
            Error::EqualValues => "equal_values",
            Error::RuleProfileMismatch(_) => "rule_profile_mismatch",
            Error::UnjustifiedInput { .. } => "unjustified_input",
            Error::InvalidExplicitTable { .. } => "invalid_explicit_table",
            Error::NoJustifyingVaf => "no_justifying_vaf",
            Error::EdgeOutsideCandidates(..) => "edge_outside_candidates",
            Error::InvariantViolation(_) => "invariant_violation",
            Error::Parse(_) => "parse_error",
        }
    }
}
