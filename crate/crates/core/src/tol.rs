//! Numerical tolerances used across the crate.
//!
//! Every reported quantity carries one of these in its metadata so that
//! downstream comparisons are self-describing. Internal solves run tighter
//! than the advertised figure where cheap, never looser.

/// Relative residual required of Perron eigenpairs: `||Mr - rho r|| / ||r||`.
pub const EIGEN_RESIDUAL: f64 = 1e-12;

/// Advertised tolerance of the volume-entropy bisection on `s`.
pub const ENTROPY_BISECTION: f64 = 1e-10;

/// Internal bisection width actually used for entropy-type root finding.
pub(crate) const BISECTION_INTERNAL: f64 = 1e-13;

/// Advertised tolerance of the minimum-cycle-ratio search.
pub const CYCLE_RATIO: f64 = 1e-10;

/// Consistency identities (left/right shift compatibility of cylinder
/// weights) must hold to this accuracy on every enumerated support path.
pub const CONSISTENCY: f64 = 1e-10;

/// Flip invariance of symmetric currents, checked path by path.
pub const FLIP: f64 = 1e-10;

/// Two length functions are considered projectively equal when the extremal
/// candidate ratios agree to this accuracy.
pub const PROJECTIVE_EQUALITY: f64 = 1e-10;

/// Margin demanded of strict inequalities (witness comparisons).
pub const STRICT_MARGIN: f64 = 1e-12;

/// Agreement required between the two routes to the entropy of a
/// Patterson-Sullivan current (direct cycle ratio vs. extremal distortion).
pub const CROSS_CHECK: f64 = 1e-8;

/// Total-mass slack accepted when an operation requires a probability
/// normalization.
pub const MASS: f64 = 1e-9;

/// Hard cap on exhaustive path enumerations (growth counting, brute-force
/// entropy envelopes). Soft-fails with a partial result when exceeded.
pub const ENUMERATION_CAP: usize = 10_000_000;
