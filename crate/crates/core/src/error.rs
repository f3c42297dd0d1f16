//! Error types shared across the library.

use thiserror::Error;

/// Failures of the hyperbolic geometry primitives.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("determinant {0:e} is zero or not finite")]
    SingularMatrix(f64),
    #[error("height {0} is not positive")]
    NonPositiveHeight(f64),
    #[error("Busemann probe did not settle after {iterations} doublings (last change {last_change:e})")]
    BusemannNonConvergence { iterations: usize, last_change: f64 },
    #[error("element leaves the N⁻AMN chart (|d| = {0:e})")]
    OutsideChart(f64),
    #[error("Iwasawa recomposition error {0:e}")]
    IwasawaNonConvergence(f64),
}

/// Failures while building or using a Schottky group.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchottkyError {
    #[error("disks {0} and {1} overlap or touch")]
    OverlappingDisks(usize, usize),
    #[error("disk {0} has non-positive or non-finite radius")]
    BadRadius(usize),
    #[error("a Schottky group needs at least {min} generators, got {got}")]
    RankTooSmall { min: usize, got: usize },
    #[error("base point (0,1) lies inside the hemisphere over disk {0}")]
    BasePointCovered(usize),
    #[error("reduction exceeded {0} steps")]
    IterationBudgetExceeded(usize),
    #[error("config table: {0}")]
    Table(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Failures of Poincaré-series and Patterson–Sullivan computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PattersonError {
    #[error("the ratio test does not change sign on [{lo}, {hi}]")]
    NonBracketed { lo: f64, hi: f64 },
    #[error("too few orbit points for a growth fit ({0})")]
    InsufficientOrbit(usize),
    #[error("ball B(ξ, {radius:e}) around sample {index} carries no atoms")]
    EmptyBall { index: usize, radius: f64 },
    #[error("measure has no atoms")]
    EmptyMeasure,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Failures of the measure layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("box spec: {0}")]
    InvalidBox(String),
    #[error("no proposal lands inside the box")]
    ZeroAcceptance,
    #[error("quadrature did not stabilise: {0}")]
    Quadrature(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Schottky(#[from] SchottkyError),
    #[error(transparent)]
    Patterson(#[from] PattersonError),
}

/// Failures of the analysis layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("not enough data: {0}")]
    InsufficientData(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("denominator is zero at every time in the grid")]
    DenominatorZero,
    #[error("no usable scales in the regression range")]
    DegenerateRange,
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Patterson(#[from] PattersonError),
    #[error(transparent)]
    Schottky(#[from] SchottkyError),
}
