use thiserror::Error;

/// Errors raised across the workbench.
///
/// Variants fall into three groups that the CLI maps onto exit codes:
/// malformed input, violated hypotheses of an operation, and exhausted
/// search budgets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid subset: index {index} out of range for {size} elements")]
    InvalidSubset { index: usize, size: usize },

    #[error("orthoset has {size} elements; at most {max} are supported")]
    TooManyElements { size: usize, max: usize },

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("empty label")]
    EmptyLabel,

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("element `{0}` is declared orthogonal to itself")]
    SelfOrthogonal(String),

    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("not a poset: `{0}` and `{1}` lie on an order cycle")]
    NotAPoset(String, String),

    #[error("no least element")]
    NoBottom,

    #[error("no greatest element")]
    NoTop,

    #[error("`{0}` and `{1}` have no meet")]
    NoMeet(String, String),

    #[error("`{0}` and `{1}` have no join")]
    NoJoin(String, String),

    #[error("orthocomplement missing for `{0}`")]
    MissingOrtho(String),

    #[error("orthocomplement is not an involution at `{0}`")]
    OrthoNotInvolution(String),

    #[error("orthocomplement is not order-reversing: `{0}` <= `{1}`")]
    OrthoNotAntitone(String, String),

    #[error("`{0}` meets its orthocomplement above 0")]
    OrthoMeetNonzero(String),

    #[error("`{0}` joined with its orthocomplement is below 1")]
    OrthoJoinNotTop(String),

    #[error("lattice is not orthomodular: `{0}` <= `{1}` violates the orthomodular law")]
    NotOrthomodular(String, String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("target set {0} is not orthoclosed")]
    NotOrthoclosed(String),

    #[error("map domain does not equal the complement of the target's orthocomplement: {0}")]
    WrongDomain(String),

    #[error("map value of `{element}` is `{value}`, outside the target set")]
    RangeEscapes { element: String, value: String },

    #[error("target set {0} is not of the form X ∩ ↓x")]
    NotPrincipal(String),

    #[error("{what} budget exceeded (limit {limit})")]
    Budget { what: &'static str, limit: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("Gram matrix is not Hermitian at ({0}, {1})")]
    NotHermitian(usize, usize),

    #[error("anisotropy certificate failed: leading principal minor {0} is not positive")]
    NotPositiveDefinite(usize),

    #[error("vector is orthogonal to the subspace; outside the Sasaki map's domain")]
    OrthogonalToSubspace,

    #[error("zero vector does not span a line")]
    ZeroVector,

    #[error("duplicate line {0}")]
    DuplicateLine(String),

    #[error("cannot parse scalar `{0}`")]
    ScalarParse(String),

    #[error(
        "the two Sasaki-map routes disagree: projection gives {projection}, span-meet gives {span_meet}"
    )]
    RouteMismatch { projection: String, span_meet: String },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::TooManyElements { .. })
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
