//! Central tolerance constants. Each one is contract-bearing; change with care.

/// Relative residual allowed on curve/surface defining equations.
pub const EPS_CURVE: f64 = 1e-10;

/// Target relative accuracy for adaptive quadrature.
pub const EPS_QUAD: f64 = 1e-10;

/// Quadrature results worse than this are reported as failures.
pub const EPS_QUAD_FAIL: f64 = 1e-7;

/// Equality threshold on the Jacobian torus, in fractional coordinates
/// (wrap-around distance).
pub const EPS_LAT: f64 = 1e-7;

/// Closure gap allowed for a traced geodesic, in normalized
/// hyperplane-coefficient distance.
pub const EPS_GEO: f64 = 1e-6;

/// A nullspace fit is well-separated when (second smallest singular value) /
/// (smallest) exceeds this.
pub const NULLSPACE_GAP: f64 = 1e4;

/// Relative threshold for certifying a double root of the restricted
/// polynomial (node certificate).
pub const EPS_NODE: f64 = 1e-8;

/// Imaginary-block condition numbers above this raise a configuration
/// warning (nearly colliding branch points).
pub const COND_WARN: f64 = 1e8;

/// Newton iteration budget for torus solves.
pub const NEWTON_MAX_STEPS: usize = 50;

/// Damped restarts allowed before a torus solve reports NoConvergence.
pub const NEWTON_RESTARTS: usize = 5;
