use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed quiver file: {0}")]
    Parse(String),

    #[error("quiver has a directed cycle through vertex `{0}`")]
    Cycle(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),

    #[error("duplicate arrow id `{0}`")]
    DuplicateArrow(String),

    #[error("summand vector entry for `{vertex}` is negative ({value})")]
    NegativeSummand { vertex: String, value: i64 },

    #[error("summand vector does not match the vertex set: {0}")]
    SummandKeys(String),

    #[error("weighted path count {count} exceeds the cap of {cap}")]
    PathCap { count: u128, cap: u128 },

    #[error("unsupported field size q = {0}; expected a prime power between 2 and 32")]
    UnsupportedField(u32),

    #[error("enumeration budget exceeded: requires {q}^{dim} = {required} elements, budget is {budget}")]
    Budget {
        q: u32,
        dim: usize,
        required: String,
        budget: u64,
    },

    #[error("rewrite precondition violated: {0}")]
    Rewrite(String),

    #[error("insufficient samples: need at least {need}, got {have}")]
    InsufficientSamples { need: usize, have: usize },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
