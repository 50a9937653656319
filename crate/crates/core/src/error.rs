use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("index {index:?} is not canonical for periods {periods:?}")]
    NonCanonicalIndex { index: Vec<i64>, periods: Vec<usize> },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid separability pattern: {0}")]
    InvalidPattern(String),

    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    #[error("torus coordinate z[{0}] is zero")]
    ZeroTorusCoordinate(usize),

    #[error("potential is not separable: |V^({witness:?})| = {magnitude:e}")]
    NotSeparable { witness: Vec<i64>, magnitude: f64 },

    #[error("potential must be real-valued for {0}")]
    NotReal(&'static str),

    #[error("monomial {exponents:?}/{power} outside declared window")]
    OutsideWindow { exponents: Vec<i32>, power: u32 },

    #[error("coefficient recovery residual {residual:e} exceeds {limit:e}")]
    RecoveryResidual { residual: f64, limit: f64 },

    #[error("recovery routes disagree: relative discrepancy {0:e}")]
    CrossCheck(f64),

    #[error("component extraction failed: {0}")]
    Extraction(String),

    #[error("isospectral pair generator failed: residual {0:e}")]
    GeneratorFailed(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
