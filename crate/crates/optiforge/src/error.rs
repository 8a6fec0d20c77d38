use thiserror::Error;

/// Error type shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A point or assignment does not cover a declared variable.
    #[error("variable `{0}` is not assigned")]
    MissingVariable(String),

    /// Two variables share a name.
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),

    /// A formulation violates a structural invariant.
    #[error("invalid formulation: {0}")]
    InvalidIr(String),

    /// An operation was handed a formulation of the wrong category.
    #[error("category mismatch: expected {expected}, got {found}")]
    CategoryMismatch { expected: String, found: String },

    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// No speed in [0, omega_max] can deliver the required pressure rise.
    #[error("pump type {type_index}: required pressure rise {required} exceeds achievable maximum {achievable}")]
    InfeasiblePressure {
        type_index: usize,
        required: f64,
        achievable: f64,
    },

    /// Flow caps make the total target flow unreachable.
    #[error("infeasible flow split: {0}")]
    InfeasibleFlow(String),

    /// Discrete enumeration would exceed the desk-scale budget.
    #[error("scale limit exceeded: {0}")]
    ScaleLimit(String),

    /// The rejection-sampling loop exhausted its attempt budget.
    #[error("generation failure: {0}")]
    GenerationFailure(String),

    /// Fewer omittable elements than requested omissions.
    #[error("insufficient omittable elements: requested {requested}, available {available}")]
    InsufficientElements { requested: usize, available: usize },

    /// External endpoint could not be reached or answered abnormally.
    #[error("transport error talking to {endpoint}: {detail}")]
    Transport { endpoint: String, detail: String },

    /// External generation kept failing verification.
    #[error("retry cap of {0} exceeded: every candidate failed verification")]
    RetryCapExceeded(usize),

    /// Episode step called out of sequence.
    #[error("out of turn: {0}")]
    OutOfTurn(String),

    /// Episode already sealed.
    #[error("episode is already terminal")]
    AlreadyTerminal,

    /// Trajectory is missing a required turn.
    #[error("malformed trajectory: {0}")]
    MalformedTrajectory(String),

    /// Group-relative normalization needs at least two rollouts.
    #[error("group too small: {0} rollout(s), need at least 2")]
    GroupTooSmall(usize),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// Malformed line in a JSONL stream.
    #[error("{path}:{line}: {detail}")]
    JsonlParse {
        path: String,
        line: usize,
        detail: String,
    },

    /// Config file entry that could not be interpreted.
    #[error("config error: {0}")]
    Config(String),

    /// Candidates file is missing samples required by the metric.
    #[error("sample shortfall for k={k}: {ids:?}")]
    SampleShortfall { k: usize, ids: Vec<String> },
}
