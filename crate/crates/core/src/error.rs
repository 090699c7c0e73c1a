use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-physical state: {0}")]
    NonPhysicalState(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("reference domain too small: trailing cells deviated by {deviation:e}")]
    DomainTooSmall { deviation: f64 },

    #[error("numerical solution diverged at t = {time}")]
    Diverged { time: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
