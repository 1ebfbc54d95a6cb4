use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("cannot parse form literal `{0}`")]
    FormSyntax(String),

    #[error("cannot combine forms of different kinds: {0} and {1}")]
    MixedKinds(String, String),

    #[error("no declared orthogonal sum for {0} and {1}")]
    MissingSum(String, String),

    #[error("no declared prime for form {0}")]
    MissingPrime(String),

    #[error("Pfister fold must lie in 1..=30, got {0}")]
    PfisterFold(i64),

    #[error("unknown extension {0}")]
    UnknownExtension(String),

    #[error("unknown form {0}")]
    UnknownForm(String),

    #[error("no Witt index recorded for {form} over {extension}")]
    MissingWitt { form: String, extension: String },

    #[error("the quadric of {0} is empty")]
    EmptyQuadric(String),

    #[error("declared model has no function-field extension of {form} over {parent}")]
    ExtensionAbsent { form: String, parent: String },

    #[error("Grassmannian G({quadric},{n}) out of range, largest admissible plane dimension is {max}")]
    PlaneOutOfRange { quadric: String, n: u32, max: i64 },

    #[error("invalid model: {0}")]
    Model(String),

    #[error("model document: {0}")]
    Json(#[from] serde_json::Error),

    #[error("operation requires the real backend: {0}")]
    RealBackendRequired(String),

    #[error("decomposition of {form} covers rank {got}, motive has rank {expected}")]
    RankMismatch { form: String, expected: u32, got: u32 },

    #[error("unknown Grassmannian key {0}")]
    UnknownKey(String),

    #[error("no decomposition registered for {0}")]
    MissingDecomposition(String),

    #[error("conflicting decomposition already registered for {0}")]
    ConflictingDecomposition(String),

    #[error("projector tower of {form} is not downward closed over {extension}")]
    DownwardClosure { form: String, extension: String },

    #[error("active index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error("element involves Pfister degree {needed} but maxr is {maxr}")]
    InsufficientMaxR { needed: u32, maxr: u32 },

    #[error("elements belong to different lattice contexts")]
    LatticeMismatch,

    #[error("internal disagreement: {0}")]
    Inconsistent(String),
}
