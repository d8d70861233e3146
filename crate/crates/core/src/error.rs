//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a state must contain at least one box")]
    EmptyState,

    #[error("invalid letter {0:?}: states are words over '1' and '2'")]
    BadLetter(char),

    /// The dynamics is only defined for states with at least as many empty
    /// boxes as balls.
    #[error("state of length {len} carries {balls} balls; need len >= 2 * balls")]
    TooManyBalls { len: usize, balls: usize },

    /// The second carrier pass must return the carrier it started from.
    #[error("time evolution ill-defined: second pass ended with {got} balls in the carrier, expected {expected}")]
    WellDefinednessViolation { expected: u32, got: u32 },

    #[error("state is not highest (some prefix has more balls than empty boxes)")]
    NotHighest,

    #[error("no singular string available at letter {position}")]
    InternalSingularityFailure { position: usize },

    #[error("parts must be positive integers")]
    ZeroPart,

    #[error("vacancy number of part {part} is {vacancy} < 0 for system size {system_size}")]
    NegativeVacancy {
        part: u32,
        vacancy: i64,
        system_size: usize,
    },

    #[error("rigging {rigging} of part {part} outside [0, {vacancy}]")]
    InvalidRigging {
        part: u32,
        rigging: i64,
        vacancy: i64,
    },

    #[error("state has no highest cyclic rotation")]
    NoHighestRotation,

    #[error("Bethe matrix is not positive definite: leading {order}x{order} minor is {minor}")]
    NotPositiveDefinite { order: usize, minor: i128 },

    #[error("soliton amplitudes must be distinct; part {part} repeats")]
    RepeatedParts { part: u32 },

    #[error("occupancy at box {position} is {numerator}/2, not 0 or 1")]
    NonBinaryOccupancy { position: i64, numerator: i128 },

    #[error("truncation radius {radius} too small: boundary layer carries {share:.3e} of the sum")]
    RadiusTooSmall { radius: u32, share: f64 },

    #[error("no (d, rigging, n) representative found in the search region")]
    RepresentativeNotFound,

    #[error("system size {system_size} exceeds the cap {cap} on 2^L-dimensional vectors")]
    CapExceeded { system_size: usize, cap: usize },

    #[error("|P(mu)| = {count} but det A = {det}")]
    CountMismatch { det: i128, count: u64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operands live on different phase spaces: {0}")]
    Incompatible(String),

    #[error("rigged configuration data carries no system size")]
    MissingSystemSize,

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
