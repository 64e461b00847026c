use thiserror::Error;

/// Errors produced by construction, evaluation and verification routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("scaling-instability violation: exponents sum to {sum}, the static energy is scale invariant only for 3/4")]
    ScalingCondition { sum: f64 },

    #[error("trivial topology not admitted by the boundary conditions: zero winding number in field {index}")]
    ZeroWinding { index: usize },

    #[error("inconsistent field parameters: {detail}")]
    ShapeMismatch { detail: String },

    #[error("scale must be a positive finite length, got {value}")]
    InvalidScale { value: f64 },

    #[error("point at infinity: eta = 0, xi = 0 is excluded from the toroidal chart")]
    PointAtInfinity,

    #[error("point lies on the focal ring (eta -> infinity); the inverse map is singular there")]
    FocalRing,

    #[error("invalid toroidal point: {detail}")]
    InvalidPoint { detail: String },

    #[error("axis limit: field modulus diverges as eta -> 0")]
    AxisLimit,

    #[error("jet rejected at eta = {eta:e}: gradients are singular on the symmetry axis")]
    AxisPoint { eta: f64 },

    #[error("unsupported branch: closed forms require 0 < |q| < 1, got |q| = {q_abs}")]
    UnsupportedBranch { q_abs: f64 },

    #[error(
        "winding ratio q_i^2 is not constant across fields; this branch needs explicit constants"
    )]
    NonConstantRatio,

    #[error("no valid profile for these constants: {detail}")]
    InvalidProfile { detail: String },

    #[error("quadrature did not reach the requested accuracy: achieved {achieved:e}, requested {requested:e}")]
    QuadratureAccuracy { achieved: f64, requested: f64 },

    #[error("fractional power of a non-positive energy factor: {value:e} at a sampled point")]
    NonPositiveEnergyFactor { value: f64 },

    #[error("finite-difference step {h:e} is too small: roundoff dominates the stencil")]
    StepTooSmall { h: f64 },

    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
