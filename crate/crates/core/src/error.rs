use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid grid size {0}: must be a power of two and at least 8")]
    InvalidGrid(usize),
    #[error("degenerate angle field: mean {0} is within 1e-9 of +-pi/2")]
    DegenerateAngle(f64),
    #[error("angle field is identically +-pi/2")]
    NotInT,
    #[error("h + i h~ - i mu0/pi vanishes or leaves the right half-plane near angle {angle}")]
    BranchPointAtBoundary { angle: f64 },
    #[error("rotation field conjugate reaches {value} <= -1 at z = ({re}, {im})")]
    NotInR { value: f64, re: f64, im: f64 },
    #[error("density h is not positive ({value}) at z = ({re}, {im})")]
    NotInH { value: f64, re: f64, im: f64 },
    #[error("internal consistency failure: {0}")]
    InternalConsistencyFailure(String),
    #[error("invalid Mobius parameter: |w0| = {0} >= 1")]
    InvalidMobius(f64),
    #[error("could not classify before r = 1 - 1e-12: {0}")]
    Inconclusive(String),
    #[error("arc spans {0} grid cells, at least 4 are required")]
    ArcTooShort(usize),
    #[error("angle field is not +-pi/2 on the arc at angle {0}")]
    ArcNotTangential(f64),
    #[error("reflection angle reaches +-pi/2 - 1e-6; use the excursion module")]
    UseErbmModule,
    #[error("invalid time step {0}: must lie in (0, {1}]")]
    InvalidStep(f64, f64),
    #[error("starting point lies outside the closed disk")]
    OutsideDomain,
    #[error("path sample {index} coincides with the winding centre")]
    PointOnPath { index: usize },
    #[error("oblique pushback did not return to the disk after repeated resampling")]
    PushbackFailure,
    #[error("invalid scales: delta {delta} must be smaller than eps_dep {eps}")]
    InvalidScales { delta: f64, eps: f64 },
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("density is not bounded away from zero (min {0})")]
    ViolatesLipschitzCondition(f64),
    #[error("density minimum {0} is below 1e-6")]
    NearSingularFlow(f64),
    #[error("map evaluation failed: {0}")]
    MapDomainError(String),
    #[error("map is not univalent: {0}")]
    NotUnivalent(String),
    #[error("clock does not advance over the horizon")]
    DegenerateClock,
    #[error("boundary polyline is invalid: {0}")]
    InvalidBoundary(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
