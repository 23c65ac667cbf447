use thiserror::Error;

use crate::expr::ExprError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports. Geometric degeneracies carry the
/// parameter value at which they were detected.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("DegenerateVector (norm {norm:e})")]
    DegenerateVector { norm: f64 },
    #[error("DegenerateSpan (|a x b| = {cross_norm:e})")]
    DegenerateSpan { cross_norm: f64 },
    #[error("OutOfDomain at t={t} (domain [{t0}, {t1}])")]
    OutOfDomain { t: f64, t0: f64, t1: f64 },
    #[error("OrderUnsupported: derivative order {0}")]
    OrderUnsupported(u8),
    #[error("UnknownCurve: {0}")]
    UnknownCurve(String),
    #[error("BadParameters: {0}")]
    BadParameters(String),
    #[error("NonMonotonic: reparametrization derivative changes sign near h={h}")]
    NonMonotonic { h: f64 },
    #[error("CenterOnCurve at t={t}")]
    CenterOnCurve { t: f64 },
    #[error("DegenerateChord at t={t}, dt={dt}")]
    DegenerateChord { t: f64, dt: f64 },
    #[error("SingularPoint at t={t}")]
    SingularPoint { t: f64 },
    #[error("AxisProjectionDegenerate at t={t} (plane {plane})")]
    AxisProjectionDegenerate { t: f64, plane: &'static str },
    #[error("DegenerateFrame at t={t} (triple product {triple:e})")]
    DegenerateFrame { t: f64, triple: f64 },
    #[error("DegenerateProjection at t={t} ({which})")]
    DegenerateProjection { t: f64, which: &'static str },
    #[error("CurvesIntersect at t={t}")]
    CurvesIntersect { t: f64 },
    #[error("IrregularNet at (u,v)=({u}, {v})")]
    IrregularNet { u: f64, v: f64 },
    #[error("NonTangentField at t={t} (|f.e| = {defect:e})")]
    NonTangentField { t: f64, defect: f64 },
    #[error("StepTooLarge at t={t} (step {step_index}): distance became {d}")]
    StepTooLarge { t: f64, step_index: usize, d: f64 },
    #[error("ProjectionCollapse at t={t} (step {step_index}, plane {plane})")]
    ProjectionCollapse { t: f64, step_index: usize, plane: &'static str },
    #[error("InconsistentDirections at t={t}: residual {residual:e}")]
    InconsistentDirections { t: f64, residual: f64 },
    #[error("RootCountMismatch: expected {expected}, found {found}")]
    RootCountMismatch { expected: usize, found: usize },
    #[error("InvalidProblem: {0}")]
    InvalidProblem(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl Error {
    /// Whether this is a configuration problem (bad input) rather than a
    /// numerical degeneracy met while evaluating valid input.
    pub fn is_config_error(&self) -> bool {
        match self {
            Error::UnknownCurve(_)
            | Error::BadParameters(_)
            | Error::NonMonotonic { .. }
            | Error::InvalidProblem(_)
            | Error::OrderUnsupported(_) => true,
            Error::Expr(e) => !matches!(e, ExprError::EvalDomain { .. }),
            _ => false,
        }
    }
}
