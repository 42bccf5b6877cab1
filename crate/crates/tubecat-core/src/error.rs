use thiserror::Error;

/// Error type shared by all modules of the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("rank deficient: numerical rank {rank} < {cols} columns")]
    RankDeficient { rank: usize, cols: usize },
    #[error("category '{0}' has no F-symbol table")]
    MissingFSymbols(String),
    #[error("not a 3-cocycle: closure relation violated at ({0},{1},{2},{3})")]
    NotACocycle(usize, usize, usize, usize),
    #[error("bicharacter is degenerate")]
    DegenerateBicharacter,
    #[error("{0} is not a square root of 1/|A| = 1/{1}")]
    BadSquareRoot(f64, usize),
    #[error("fusion multiplicity > 1 is not supported by the derived tube path")]
    MultiplicityNotSupported,
    #[error("associativity violated on ingest: {0}")]
    AssociativityViolation(String),
    #[error("dagger structure violated on ingest: {0}")]
    DaggerViolation(String),
    #[error("morphisms are not composable (target/source blocks do not match)")]
    NonComposable,
    #[error("basis mismatch against reference: {0}")]
    BasisMismatch(String),
    #[error("algebra is not semisimple with a positive form: {0}")]
    NonSemisimple(String),
    #[error("unknown category '{0}'")]
    UnknownCategory(String),
    #[error("ambiguous identification: catalog entries {0} and {1} share a character vector")]
    AmbiguousMatch(usize, usize),
    #[error("operation requires a unitary category")]
    NonUnitaryCategory,
    #[error("operation requires a tube category with a dagger")]
    DaggerRequired,
    #[error("density-matrix sector does not match the channel-basis source")]
    SectorMismatch,
    #[error("state vector is zero")]
    ZeroState,
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unknown label '{0}'")]
    UnknownLabel(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
