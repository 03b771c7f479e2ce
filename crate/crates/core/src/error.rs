use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A generator was asked for a graph of impossible size.
    #[error("invalid size for {family}: n = {n} (minimum {min})")]
    InvalidSize {
        family: &'static str,
        n: usize,
        min: usize,
    },

    /// A vertex index does not exist in the graph.
    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    VertexOutOfRange { vertex: usize, n: usize },

    /// A pebbling move was attempted from a vertex with fewer than two pebbles.
    #[error("insufficient pebbles at vertex {vertex}: have {have}, need 2")]
    InsufficientPebbles { vertex: usize, have: u32 },

    /// A pebbling move was attempted between non-adjacent vertices.
    #[error("vertices {from} and {to} are not adjacent")]
    NotAdjacent { from: usize, to: usize },

    /// Two distributions live on graphs of different shape.
    #[error("distributions are defined on different graphs")]
    GraphMismatch,

    /// An operation requiring disjoint distributions got overlapping ones.
    #[error("distributions are not disjoint: vertex {vertex} is occupied in both")]
    NotDisjoint { vertex: usize },

    /// An operation requiring a nonempty target set got an empty one.
    #[error("target vertex set is empty")]
    EmptySet,

    /// An operation requiring a connected graph got a disconnected one.
    #[error("graph is not connected")]
    Disconnected,

    /// A bound that assumes a solvable distribution got an unsolvable one.
    #[error("distribution is not solvable (vertex {witness} is unreachable)")]
    NotSolvable { witness: usize },

    /// A unit operand was smaller than the operation requires.
    #[error("unit has {size} pebbles, need at least {min}")]
    UnitTooSmall { size: u32, min: u32 },

    /// A degree-based bound was applied to a graph with too-small Δ.
    #[error("maximum degree {delta} too small (need at least {min})")]
    DeltaTooSmall { delta: usize, min: usize },

    /// A torus/grid bound was applied below its validity threshold.
    #[error("side lengths {m}x{n} too small (both must be at least {min})")]
    GraphTooSmall { m: usize, n: usize, min: usize },

    /// Exact rational arithmetic cannot represent the requested quantity.
    #[error("graph diameter {diameter} exceeds the exact-arithmetic limit {max}")]
    DiameterTooLarge { diameter: u32, max: u32 },

    /// An auxiliary-graph transformation was invoked outside its precondition.
    #[error("transformation precondition violated: {0}")]
    PreconditionViolated(String),

    /// The transformation fixpoint loop exceeded its step guard.
    #[error("transformation run exceeded {limit} steps without reaching a fixpoint")]
    StepLimitExceeded { limit: usize },

    /// The exact solver exhausted its node budget.
    #[error("search budget exceeded: optimal pebbling number is in [{lower}, {upper_text}]")]
    BudgetExceeded {
        lower: u32,
        upper: Option<u32>,
        upper_text: String,
    },

    /// A graph/distribution file or spec string failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub(crate) fn budget(lower: u32, upper: Option<u32>) -> Self {
        let upper_text = match upper {
            Some(u) => u.to_string(),
            None => "?".to_string(),
        };
        Error::BudgetExceeded {
            lower,
            upper,
            upper_text,
        }
    }
}
