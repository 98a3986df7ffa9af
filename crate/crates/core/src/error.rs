use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid mixed profile: {0}")]
    InvalidProfile(String),

    #[error("profile space has {profiles} pure profiles, above the enumeration limit of {limit}")]
    ProfileSpaceTooLarge { profiles: u128, limit: u128 },

    #[error("profile is not a strict Nash equilibrium: player {player} can deviate to action {action} without loss")]
    NotStrict { player: usize, action: usize },

    #[error("non-finite value {0}")]
    NonFinite(f64),

    #[error("invalid quantizer: {0}")]
    InvalidQuantizer(String),

    #[error("invalid regularizer input: {0}")]
    InvalidRegularizerInput(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid noise model: {0}")]
    InvalidNoise(String),

    #[error("invalid feedback channel: {0}")]
    InvalidChannel(String),

    #[error("exploration parameter {0} outside [0, 1]")]
    InvalidExploration(f64),

    #[error("zero sampling probability for chosen action {0}")]
    ZeroSamplingProbability(usize),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("analysis precondition failed: {0}")]
    Analysis(String),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}
