use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero scalar")]
    DivisionByZero,

    #[error("input state not normalized")]
    NotNormalized,

    #[error("square root of {0} does not lie in Q(√2, √3)")]
    NoSquareRoot(String),

    #[error("scalar {0} is not a constant")]
    NotConstant(String),

    #[error("particle count mismatch: {left} vs {right}")]
    ParticleCountMismatch { left: usize, right: usize },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("slot {slot} out of range for a {particles}-particle state")]
    SlotOutOfRange { slot: usize, particles: usize },

    #[error("invalid location symbol {0:?}")]
    InvalidLocation(char),

    #[error("state has no symmetric component")]
    NoSymmetricComponent,

    #[error("norm depends on free symbols: {0}")]
    NormDependsOnSymbols(String),

    #[error("zero norm")]
    ZeroNorm,

    #[error("bell vectors need two distinct locations, got {0} twice")]
    IdenticalLocations(char),

    #[error("kets outside the two-location sector of slots ({i}, {j}): {kets:?}")]
    SectorViolation {
        i: usize,
        j: usize,
        kets: Vec<String>,
    },

    #[error("cannot build a projector from an empty list of vectors")]
    EmptySpan,

    #[error("measurement precondition violated by kets: {0:?}")]
    MeasurementPrecondition(Vec<String>),

    #[error("outcome impossible")]
    OutcomeImpossible,

    #[error("expected exactly one particle at {loc} in every ket, offending kets: {kets:?}")]
    LocationOccupancy { loc: char, kets: Vec<String> },

    #[error("probability depends on the input state: {0}")]
    NonConstantProbability(String),
}

pub type Result<T> = std::result::Result<T, Error>;
