use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("relator index must be at least {min}, got {got}")]
    RelatorIndexTooSmall { got: u32, min: u32 },

    #[error("delta must lie strictly between 0 and pi/2, got {got} rad")]
    DeltaOutOfRange { got: f64 },

    #[error("angle out of range: {0}")]
    AngleOutOfRange(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("edge length must be positive and finite, got {0}")]
    BadEdgeLength(f64),

    #[error("deduplicated edge `{tag}` re-added with mismatched length ({existing} vs {new})")]
    DedupLengthMismatch {
        tag: String,
        existing: f64,
        new: f64,
    },

    #[error("graph is disconnected; diameter is undefined")]
    Disconnected,

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("brute-force enumeration limited to {max} vertices, graph has {got}")]
    TooManyVertices { got: usize, max: usize },

    #[error("invalid generator label `{0}`: labels must be nonempty and free of `,`, `+`, `-`")]
    BadGeneratorLabel(String),

    #[error("duplicate generator label `{0}`")]
    DuplicateGenerator(String),

    #[error("relation references unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("relation pair must name two distinct generators, got `{0}`, `{0}`")]
    SelfRelation(String),

    #[error("missing delta for relation pair {{{0}, {1}}}")]
    MissingDelta(String, String),

    #[error("unexpected delta entry for pair {{{0}, {1}}}: {reason}", reason = .2)]
    UnexpectedDelta(String, String, String),

    #[error("L-graph parameters invalid: {0}")]
    BadLGraphParams(String),

    #[error("triples reduction inapplicable: {0}")]
    ReductionInapplicable(String),

    #[error("Coxeter matrix invalid: {0}")]
    BadCoxeterMatrix(String),

    #[error("word references generator index {got}, but the representation has rank {rank}")]
    BadWordIndex { got: usize, rank: usize },

    #[error("order undetermined at cap {cap}: {reason}")]
    UndeterminedOrder { cap: u64, reason: String },

    #[error("invalid input: {0}")]
    BadInput(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
