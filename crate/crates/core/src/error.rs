use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("angle {0} rad lies outside the front half-plane [-pi/2, pi/2]")]
    AngleOutOfRange(f64),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("grating-lobe index k = 0 is the main beam")]
    MainBeamIndex,
    #[error("angles of arrival are not distinct ({0} rad)")]
    NonDistinctAoa(f64),
    #[error("gcd(0, 0) is undefined")]
    GcdUndefined,
    #[error("invalid design request: {0}")]
    InvalidRequest(String),
    #[error("infeasible design: {0}")]
    Infeasible(String),
    #[error("no candidate design passed certification")]
    NoCertifiedCandidate,
    #[error("degenerate channel for user {0}: zero total path gain")]
    DegenerateChannel(usize),
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("failed to parse scenario: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
