use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size limit exceeded: {what} is {value}, limit {limit}")]
    SizeLimit { what: &'static str, value: usize, limit: usize },

    #[error("generator count mismatch: {0} vs {1}")]
    GeneratorMismatch(usize, usize),

    #[error("invalid antichain: {0}")]
    InvalidAntichain(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("invalid lattice tables: {0}")]
    InvalidLattice(String),

    #[error("lattice is not distributive: {0}")]
    NotDistributive(String),

    #[error("slot mismatch: {0}")]
    SlotMismatch(String),

    #[error("invalid index pattern: {0}")]
    InvalidIndices(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("incompatible partial family: components {0} and {1} do not glue")]
    IncompatiblePartialFamily(usize, usize),

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("extension failed: {0}")]
    ExtensionFailed(String),

    #[error("witness check failed: {0}")]
    WitnessFailed(String),

    #[error("point is not on the unit circle: |s| = {0}")]
    NotOnCircle(f64),

    #[error("point is outside the closed unit disc: |d| = {0}")]
    OutsideDisc(f64),
}
