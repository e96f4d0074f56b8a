use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid cone dimensions (k, h) = ({k}, {h})")]
    InvalidCone { k: usize, h: usize },

    #[error("cone ({k}, {h}) is not one of the certified pairs")]
    UncertifiedPair { k: usize, h: usize },

    #[error("point lies at the apex of the cone")]
    SingularApex,

    #[error("point is not on the cone (relative gap {gap:e})")]
    NotOnCone { gap: f64 },

    #[error("power variable vanishes on the {branch} branch with exponent {d} < 1")]
    DegenerateAxis { branch: &'static str, d: f64 },

    #[error("gradient of the calibration function vanishes")]
    ZeroGradient,

    #[error("finite-difference step {step:e} too large for distance {distance:e}")]
    OracleUnreliable { step: f64, distance: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("interval enclosure too wide on [{lo}, {hi}] after refinement")]
    IntervalTooWide { lo: f64, hi: f64 },

    #[error("chain step `{step}` fails: {lhs} vs {rhs}")]
    ChainStepViolation { step: String, lhs: String, rhs: String },

    #[error("profile support [{a}, {b}] is invalid: {reason}")]
    ProfileSupport { a: f64, b: f64, reason: &'static str },

    #[error("normal graph leaves the quarter plane at r = {r} (t = {t})")]
    Embeddedness { r: f64, t: f64 },

    #[error("competitor is not compactly contained in the window H_R (R = {radius})")]
    NotInWindow { radius: f64 },

    #[error("curve leaves the quarter plane")]
    OutsideQuarterPlane,

    #[error("unbounded region")]
    UnboundedRegion,

    #[error("eigensolver did not converge after {iterations} iterations")]
    Eigensolver { iterations: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("output error: {0}")]
    Output(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
