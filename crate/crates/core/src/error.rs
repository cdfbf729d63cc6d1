use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a permutation input: entry repeated at position {position}")]
    NotPermutation { position: usize },

    #[error("element {element} is outside the ground set of size {size}")]
    OutsideGround { element: usize, size: usize },

    #[error("rank {rank} out of range for a ground set of size {size}")]
    RankOutOfRange { rank: usize, size: usize },

    #[error("ground set too large: {size} elements (limit {limit})")]
    GroundTooLarge { size: usize, limit: usize },

    #[error("ground set labels must be distinct and strictly increasing")]
    UnsortedLabels,

    #[error("zero vector is not a {0}")]
    ZeroVector(&'static str),

    #[error("expected {expected} coordinates, found {found}")]
    WrongLength { expected: usize, found: usize },

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("not a matroid: {0}")]
    NotMatroid(String),

    #[error("not a tropical Plücker vector: {0}")]
    NotTropicalPlucker(String),

    #[error("not a chirotope: {0}")]
    NotChirotope(String),

    #[error("not an oriented tropical Plücker vector: {0}")]
    NotOrientedPlucker(String),

    #[error("initial datum is not contained in X\\Y at (X,Y)=({x:?},{y:?})")]
    InitialDatumNotSubset { x: Vec<usize>, y: Vec<usize> },

    #[error("initial datum is not compatible with the underlying matroid (empty cone)")]
    IncompatibleWithMatroid,

    #[error("enumeration guard exceeded: {what} has {size} coordinates (limit {limit}); pass --guard-override to lift it")]
    GuardExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("ground set label collision on {0}")]
    LabelCollision(u128),

    #[error("map is not injective: {0}")]
    NotInjective(String),

    #[error("injection images overlap: {0}")]
    ImagesOverlap(String),

    #[error("invalid simplex point: {0}")]
    InvalidSimplexPoint(String),

    #[error("linear solver inconsistency: {0}")]
    Solver(String),

    #[error("label arithmetic overflow; window exhausted (needs labels beyond {0})")]
    WindowExhausted(String),

    #[error("composition leaves the simplicial complex: {0}")]
    NonSimplicialComposite(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
