use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("expected at least {min} particles, got {got}")]
    TooFewParticles { min: usize, got: usize },

    #[error("mass {index} is {value}; masses must be finite and nonzero")]
    InvalidMass { index: usize, value: f64 },

    #[error("masses {i} and {j} sum to zero (m_i = {mi}, m_j = {mj})")]
    ZeroPairMass { i: usize, j: usize, mi: f64, mj: f64 },

    #[error("total mass is zero; no center-of-mass frame exists")]
    ZeroTotalMass,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("wall normal is lightlike (Q(n) = {q}); cannot reflect")]
    DegenerateNormal { q: f64 },

    #[error("positions are not ordered: x[{index}] = {left} > x[{next}] = {right}", next = index + 1)]
    Unordered { index: usize, left: f64, right: f64 },

    #[error("particles {particles:?} meet simultaneously at t = {t}")]
    DirectMultipleCollision { t: f64, particles: Vec<usize> },

    #[error("pair ({i}, {j}) is not in contact (gap {gap})")]
    NotInContact { i: usize, j: usize, gap: f64 },

    #[error("time {t} lies outside the trajectory range [{start}, {end}]")]
    TimeOutOfRange { t: f64, start: f64, end: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
