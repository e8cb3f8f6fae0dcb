//! Desk-scale computational harmonic analysis on the torus T = R/Z.
//!
//! The crate provides four building blocks:
//!
//! * [`poly`] — exact sparse spectral algebra for trigonometric polynomials
//!   (construction, modulation, dilation, products, filtering, grid synthesis,
//!   classification, and an exact-round-trip file format);
//! * [`sets`] — finite unions of open intervals on the torus that are symmetric
//!   about 0, with measure, complement, indicator, and a Diophantine-exclusion
//!   builder;
//! * [`norms`] — midpoint-rule L^p integrals of |f|^p over such sets with
//!   rigorous error bounds, exact even-power integrals via spectral convolution,
//!   concentration ratios, Poisson regularization, and a Hardy-space quasi-norm
//!   estimator;
//! * [`construct`] — the classical construction toolbox: Dirichlet-kernel combs,
//!   triangle (Fejér-type) kernels, Khintchine sign searches, the
//!   Mockenhaupt–Schlag majorant pair, Riesz products, strong-concentration
//!   assemblies for low and high exponents, and block gap series.
//!
//! Everything is deterministic: identical inputs (including seeds) produce
//! bit-identical outputs on every platform. All randomness flows through
//! explicitly seeded ChaCha20 generators, all floating-point reductions use a
//! fixed pairwise summation order, and grid sizes are pure functions of the
//! polynomial degree and the requested oversampling factor.

pub mod construct;
pub mod fft;
pub mod norms;
pub mod poly;
pub mod sets;
pub mod sum;
pub mod tol;

pub use num_complex::Complex64;
