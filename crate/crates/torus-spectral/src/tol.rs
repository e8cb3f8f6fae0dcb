//! Centralized numeric tolerances.
//!
//! Every tolerance used by the library lives here with its rationale, so that
//! tests and callers share one source of truth.

/// Default absolute tolerance for coefficient classification.
///
/// A polynomial counts as positive definite when every coefficient has real
/// part ≥ −`PD_TOLERANCE` and imaginary part within ±`PD_TOLERANCE`, and as
/// idempotent when every stored coefficient lies within `PD_TOLERANCE` of 1.
/// The value leaves three orders of magnitude of headroom above f64 roundoff
/// accumulated by the longest supported convolution chains.
pub const PD_TOLERANCE: f64 = 1e-12;

/// Absolute tolerance for endpoint mirroring when validating that a set is
/// symmetric about 0. Interval endpoints are user-supplied f64 values; exact
/// mirroring can be off by one or two ulps after arithmetic such as `k/l − 1`,
/// which at magnitudes below 1/2 is under 2e−16.
pub const SYMMETRY_TOLERANCE: f64 = 1e-15;

/// Measures of a set and of its complement must sum to 1 within this bound.
pub const MEASURE_ADDITIVITY_TOLERANCE: f64 = 1e-12;

/// Squared moduli below this threshold are treated as exactly 0 when raising
/// |f| to a real power, so that `exp((p/2)·ln|f|²)` never sees a subnormal or
/// zero argument.
pub const TINY_MODULUS_SQ: f64 = 1e-300;

/// Default oversampling factor: the quadrature grid has at least
/// `DEFAULT_OVERSAMPLE × (2·degree + 1)` points.
pub const DEFAULT_OVERSAMPLE: u32 = 16;
