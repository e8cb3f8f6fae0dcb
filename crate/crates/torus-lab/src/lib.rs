//! Experiment harness over the `torus-spectral` library: seeded, reportable
//! desk-scale experiments on trigonometric polynomials, each emitting one
//! machine-readable JSON report.
//!
//! The three experiments are Shapiro-inequality verification (with the comb
//! sharpness sweep), strong-concentration demonstrations (sign-search and
//! Riesz-product assemblies), and truncated gap-series builds exhibiting the
//! failure of Wiener's property at non-even exponents. Everything is
//! deterministic given (experiment, parameters, seed).

pub mod cli;
pub mod experiments;
pub mod report;
