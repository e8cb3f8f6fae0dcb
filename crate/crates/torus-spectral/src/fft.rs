//! Grid synthesis of sparse spectra.
//!
//! A trigonometric polynomial f(t) = Σ_h a_h e(h t) (with e(x) = e^{2πix}) is
//! sampled on the uniform grid t_j = j/M, j = 0..M−1. Two engines are
//! provided:
//!
//! * [`synth_fft`] — places each coefficient a_h at buffer index h mod M and
//!   applies one unnormalized inverse FFT, so sample j equals
//!   Σ_h a_h e(h·j/M) exactly. Used whenever the whole grid fits comfortably
//!   in memory.
//! * [`synth_chunk`] — direct evaluation of one contiguous block of samples,
//!   one complex rotation per frequency per sample, re-anchored exactly at the
//!   chunk start through integer phase arithmetic. Used by the streaming
//!   integrator for very large grids and small supports; drift over a chunk is
//!   bounded by chunk_len·ulp and each chunk restarts from an exact phase.
//!
//! Both engines are bit-deterministic for fixed inputs.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::poly::TrigPoly;

/// Number of samples per streamed chunk (see [`synth_chunk`] callers).
pub const STREAM_CHUNK: usize = 1 << 16;

/// Samples `f` on the M-point grid via one inverse FFT.
///
/// Sample j equals Σ_h a_h e(h·j/M). Callers guarantee M ≥ 2·degree + 1 so
/// that distinct frequencies occupy distinct buffer slots (the implementation
/// still accumulates, so nothing is silently overwritten).
pub fn synth_fft(f: &TrigPoly, m: usize) -> Vec<Complex64> {
    assert!(m >= 1, "grid must have at least one point");
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let mi = m as i64;
    for (&h, &a) in f.iter() {
        let slot = h.rem_euclid(mi) as usize;
        buf[slot] += a;
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_inverse(m);
    fft.process(&mut buf);
    buf
}

/// Evaluates `len ≤ out.len()` samples of `f` starting at grid index `j0`,
/// writing into `out[..len]`.
///
/// For each frequency h the phase at the chunk start is computed exactly from
/// the integer residue (h·j0) mod M, then advanced by one unit-modulus
/// rotation per sample. Using i128 for the residue keeps the anchor exact for
/// every |h| < 2^63 and M < 2^63.
pub fn synth_chunk(f: &TrigPoly, m: usize, j0: usize, len: usize, out: &mut [Complex64]) {
    assert!(len <= out.len());
    for z in out[..len].iter_mut() {
        *z = Complex64::new(0.0, 0.0);
    }
    let m_i128 = m as i128;
    let two_pi = std::f64::consts::TAU;
    for (&h, &a) in f.iter() {
        let residue = ((h as i128) * (j0 as i128)).rem_euclid(m_i128) as f64;
        let theta0 = two_pi * residue / (m as f64);
        let step = two_pi * (h.rem_euclid(m as i64) as f64) / (m as f64);
        let omega = Complex64::new(step.cos(), step.sin());
        let mut z = a * Complex64::new(theta0.cos(), theta0.sin());
        for slot in out[..len].iter_mut() {
            *slot += z;
            z *= omega;
        }
    }
}
