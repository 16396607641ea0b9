//! Numerical tolerances shared across the crate.

/// Slack on containment in the closed unit ball.
pub const EPS_BALL: f64 = 1e-12;

/// Minimum separation between the added point and the existing points that
/// verification harnesses accept.
pub const EPS_GAP: f64 = 1e-9;

/// Collinearity tolerance for the between-or-off-line test.
pub const EPS_COL: f64 = 1e-9;

/// Vectors shorter than this are treated as collisions by the winding engine.
pub const EPS_WIND: f64 = 1e-9;

/// Random configurations closer than this are rejected by the sampler.
pub const SAMPLER_MIN_GAP: f64 = 1e-3;
