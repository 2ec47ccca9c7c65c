use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("zero vector")]
    ZeroVector,
    #[error("non-finite amplitude")]
    NonFinite,
    #[error("matrix is not hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not an orthogonal projector")]
    NotProjector,
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("mixture weights invalid: {0}")]
    InvalidWeights(String),
    #[error("basis is not orthonormal")]
    NonOrthonormalBasis,
    #[error("partial trace needs at least one kept factor")]
    EmptyKeep,
    #[error("factor index {index} out of range for {count} factors")]
    FactorOutOfRange { index: usize, count: usize },
    #[error("factor {factor} is not in its ready state")]
    NotReady { factor: usize },
    #[error("{outcomes} outcomes but {pointers} pointer states")]
    PointerCountMismatch { outcomes: usize, pointers: usize },
    #[error("pointer states are not orthonormal")]
    PointersNotOrthonormal,
    #[error("projection has zero probability")]
    ZeroProbability,
    #[error("invalid amplitudes: |alpha|^2 + |beta|^2 = {0}")]
    InvalidAmplitudes(f64),
    #[error("no candidate observable commutes with the interaction")]
    NoPointerBasis,
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("event `{0}` already recorded")]
    DuplicateEvent(String),
    #[error("observer already hung up on event `{0}`")]
    AlreadyHungUp(String),
    #[error("event `{event}` precedes the observer's latest awareness entry")]
    StaleEvent { event: String },
    #[error("no branch extends the observer's awareness")]
    EmptyCandidates,
    #[error("observer `{observer}` did not take part in event `{event}`")]
    NotParticipant { observer: String, event: String },
    #[error("no query interaction by `{asker}` on `{askee}` about `{event}` is recorded")]
    QueryNotRecorded {
        asker: String,
        askee: String,
        event: String,
    },
    #[error("unobservable set contains the pointer record of event `{0}`")]
    PointerRecordHidden(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
