use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("evaluator returned a non-finite value at {location}")]
    NonFiniteEvaluation { location: String },
    #[error("chart mismatch: expected `{expected}`, found `{found}`")]
    ChartMismatch { expected: String, found: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("missing shift datum `{0}`")]
    MissingShiftDatum(&'static str),
    #[error("pole of the gamma function at w = {0}")]
    PoleError(Complex64),
    #[error("argument {0} lies within the branch-cut margin of the negative real axis")]
    BranchCutError(Complex64),
    #[error("degenerate central charge for charge {0:?}")]
    DegenerateCharge(Vec<i64>),
    #[error("path crosses a degenerate locus: {0}")]
    PathThroughDegenerateLocus(String),
    #[error("invalid BPS structure: {0}")]
    InvalidStructure(String),
    #[error("degenerate discriminant 4a^3 + 27b^2 = {0}")]
    DegenerateDiscriminant(Complex64),
    #[error("quadrature did not converge (last difference {0:e})")]
    QuadratureNonConvergence(f64),
    #[error("contour cannot avoid x = q = {0}")]
    ContourCollision(Complex64),
    #[error("fiber point violates p^2 = q^3 + a q + b (residual {0:e})")]
    FiberConstraint(f64),
    #[error("p vanishes at the fiber point")]
    ZeroP,
    #[error("potential evaluated at its pole x = q = {0}")]
    PoleEvaluation(Complex64),
    #[error("path passes within {margin:e} of the pole x = q")]
    PoleProximity { margin: f64 },
    #[error("ODE step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("sector {0} is degenerate: turning points inside the anchor annulus")]
    SectorDegeneracy(usize),
    #[error("Wronskian w[{0}][{1}] vanishes")]
    DegenerateWronskian(usize, usize),
    #[error("movable pole of the leaf flow near a = {estimate}")]
    MovablePoleEncountered { a: Complex64, estimate: Complex64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFiniteEvaluation { .. } => "NonFiniteEvaluation",
            Error::ChartMismatch { .. } => "ChartMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidPath(_) => "InvalidPath",
            Error::MissingShiftDatum(_) => "MissingShiftDatum",
            Error::PoleError(_) => "PoleError",
            Error::BranchCutError(_) => "BranchCutError",
            Error::DegenerateCharge(_) => "DegenerateCharge",
            Error::PathThroughDegenerateLocus(_) => "PathThroughDegenerateLocus",
            Error::InvalidStructure(_) => "InvalidStructure",
            Error::DegenerateDiscriminant(_) => "DegenerateDiscriminant",
            Error::QuadratureNonConvergence(_) => "QuadratureNonConvergence",
            Error::ContourCollision(_) => "ContourCollision",
            Error::FiberConstraint(_) => "FiberConstraint",
            Error::ZeroP => "ZeroP",
            Error::PoleEvaluation(_) => "PoleEvaluation",
            Error::PoleProximity { .. } => "PoleProximity",
            Error::StepUnderflow(_) => "StepUnderflow",
            Error::SectorDegeneracy(_) => "SectorDegeneracy",
            Error::DegenerateWronskian(..) => "DegenerateWronskian",
            Error::MovablePoleEncountered { .. } => "MovablePoleEncountered",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
