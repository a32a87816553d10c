//! Numerical thresholds used across the crate.

/// Relative gap below which a relation is reported as an equality.
pub const EQUALITY_REL: f64 = 1e-6;

/// Degree-schedule stopping rule: |Δvalue| ≤ this · value.
pub const SCHEDULE_REL: f64 = 1e-8;

/// Diagonal pivot floor of the equilibrated Gram factorization.
pub const PIVOT_FLOOR: f64 = 1e-13;

/// Relative threshold for the constraint-rank test.
pub const RANK_REL: f64 = 1e-12;

/// Points closer than this are treated as coincident.
pub const COINCIDENT: f64 = 1e-12;

/// Bisection target width for sublevel-set boundaries along rays.
pub const ROOT_WIDTH: f64 = 1e-14;

/// Default tolerance for the annulus Fourier tail.
pub const SERIES_TAIL: f64 = 1e-15;
