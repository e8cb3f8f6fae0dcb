//! Sparse spectral algebra for trigonometric polynomials.
//!
//! A trigonometric polynomial is a finitely supported map from integer
//! frequencies to complex coefficients, f(t) = Σ_h a_h e(h t) with
//! e(x) = e^{2πix} and t on the torus R/Z. The representation is exact: all
//! operations below act on coefficients only, so products, modulations,
//! dilations and filters incur no rounding beyond the coefficient arithmetic
//! itself. Coefficients that are exactly 0 are never stored.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::fft;
use crate::sum::pairwise_sum;

/// A finitely supported spectrum, ordered by frequency.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigPoly {
    coeffs: BTreeMap<i64, Complex64>,
}

/// Classification flags and shape statistics produced by [`classify`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumReport {
    /// All coefficients are real and nonnegative within the given tolerance.
    pub is_positive_definite: bool,
    /// All stored coefficients lie within the given tolerance of 1, i.e. the
    /// coefficient set is {0, 1} up to tolerance.
    pub is_idempotent: bool,
    /// Minimum difference between consecutive frequencies of the support;
    /// 0 when the support has fewer than two points.
    pub min_gap: i64,
    /// Maximum |frequency| over the support; 0 for the zero polynomial.
    pub degree: i64,
    /// Number of stored (nonzero) coefficients.
    pub support_size: usize,
}

impl TrigPoly {
    /// The zero polynomial (empty spectrum).
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a polynomial from (frequency, coefficient) pairs. Duplicate
    /// frequencies are summed; coefficients equal to exactly 0 are dropped.
    pub fn from_entries<I: IntoIterator<Item = (i64, Complex64)>>(entries: I) -> Self {
        let mut coeffs: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (h, a) in entries {
            *coeffs.entry(h).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        coeffs.retain(|_, a| a.re != 0.0 || a.im != 0.0);
        TrigPoly { coeffs }
    }

    /// The coefficient at frequency `h` (0 when absent).
    pub fn coeff(&self, h: i64) -> Complex64 {
        self.coeffs
            .get(&h)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Iterates over (frequency, coefficient) pairs in increasing frequency
    /// order.
    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Complex64)> {
        self.coeffs.iter()
    }

    /// Number of stored coefficients.
    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    /// True when the spectrum is empty.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest frequency of the support.
    pub fn min_frequency(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Largest frequency of the support.
    pub fn max_frequency(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Maximum |frequency| over the support; 0 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs
            .keys()
            .map(|h| h.abs())
            .max()
            .unwrap_or(0)
    }

    /// Minimum difference between consecutive frequencies; 0 when the support
    /// has fewer than two points.
    pub fn min_gap(&self) -> i64 {
        let freqs: Vec<i64> = self.coeffs.keys().copied().collect();
        freqs
            .windows(2)
            .map(|w| w[1] - w[0])
            .min()
            .unwrap_or(0)
    }

    /// Σ_h |a_h| (pairwise-summed).
    pub fn coeff_abs_sum(&self) -> f64 {
        let mags: Vec<f64> = self.coeffs.values().map(|a| a.norm()).collect();
        pairwise_sum(&mags)
    }

    /// Σ_h |a_h|² (pairwise-summed).
    pub fn coeff_sq_sum(&self) -> f64 {
        let mags: Vec<f64> = self.coeffs.values().map(|a| a.norm_sqr()).collect();
        pairwise_sum(&mags)
    }

    /// Multiplies every coefficient by a complex scalar.
    pub fn scaled(&self, factor: Complex64) -> TrigPoly {
        TrigPoly::from_entries(self.iter().map(|(&h, &a)| (h, a * factor)))
    }
}

/// Builds a polynomial from a slice of (frequency, coefficient) records.
/// Duplicates are summed; exact zeros are dropped.
pub fn make_poly(entries: &[(i64, Complex64)]) -> TrigPoly {
    TrigPoly::from_entries(entries.iter().copied())
}

/// The Dirichlet kernel D_n(t) = Σ_{ν=0}^{n−1} e(νt): the all-ones idempotent
/// of length n.
///
/// Panics when n = 0.
pub fn dirichlet(n: u64) -> TrigPoly {
    assert!(n >= 1, "dirichlet kernel needs n >= 1");
    TrigPoly {
        coeffs: (0..n as i64)
            .map(|h| (h, Complex64::new(1.0, 0.0)))
            .collect(),
    }
}

/// Frequency shift: modulate(f, K)(t) = e(K t)·f(t), i.e. every frequency
/// moves by +K while coefficients are unchanged.
pub fn modulate(f: &TrigPoly, k: i64) -> TrigPoly {
    TrigPoly {
        coeffs: f.iter().map(|(&h, &a)| (h + k, a)).collect(),
    }
}

/// Dilation: dilate(f, N)(t) = f(N t), i.e. every frequency is multiplied by
/// N while coefficients are unchanged.
///
/// Panics when N < 1.
pub fn dilate(f: &TrigPoly, n: i64) -> TrigPoly {
    assert!(n >= 1, "dilation factor must be >= 1");
    TrigPoly {
        coeffs: f.iter().map(|(&h, &a)| (h * n, a)).collect(),
    }
}

/// Pointwise product, computed exactly as the convolution of spectra.
pub fn multiply(f: &TrigPoly, g: &TrigPoly) -> TrigPoly {
    let mut coeffs: BTreeMap<i64, Complex64> = BTreeMap::new();
    for (&hf, &af) in f.iter() {
        for (&hg, &ag) in g.iter() {
            *coeffs
                .entry(hf + hg)
                .or_insert(Complex64::new(0.0, 0.0)) += af * ag;
        }
    }
    coeffs.retain(|_, a| a.re != 0.0 || a.im != 0.0);
    TrigPoly { coeffs }
}

/// Linear combination a·f + b·g.
pub fn combine(a: Complex64, f: &TrigPoly, b: Complex64, g: &TrigPoly) -> TrigPoly {
    TrigPoly::from_entries(
        f.iter()
            .map(|(&h, &c)| (h, a * c))
            .chain(g.iter().map(|(&h, &c)| (h, b * c))),
    )
}

/// Keeps exactly the frequencies divisible by k (the spectral action of
/// convolving with the uniform measure on the k-th roots of unity).
///
/// Panics when k < 1.
pub fn filter_multiples(f: &TrigPoly, k: i64) -> TrigPoly {
    assert!(k >= 1, "filter modulus must be >= 1");
    TrigPoly {
        coeffs: f
            .iter()
            .filter(|(&h, _)| h.rem_euclid(k) == 0)
            .map(|(&h, &a)| (h, a))
            .collect(),
    }
}

/// Samples f at t_j = j/M for j = 0..M−1 via inverse-FFT synthesis.
///
/// Panics when M < 2·degree + 1 (the anti-aliasing floor: below it distinct
/// frequencies of f would land in the same residue class mod M).
pub fn evaluate_grid(f: &TrigPoly, m: usize) -> Vec<Complex64> {
    let need = 2 * f.degree() as usize + 1;
    assert!(
        m >= need,
        "grid size {m} is below the anti-aliasing floor 2*degree+1 = {need}"
    );
    fft::synth_fft(f, m)
}

/// Classifies the spectrum with the given absolute coefficient tolerance.
///
/// The zero polynomial is vacuously positive definite and idempotent, with
/// degree 0 and min_gap 0.
pub fn classify(f: &TrigPoly, tolerance: f64) -> SpectrumReport {
    assert!(tolerance >= 0.0, "tolerance must be nonnegative");
    let is_positive_definite = f
        .iter()
        .all(|(_, a)| a.re >= -tolerance && a.im.abs() <= tolerance);
    let is_idempotent = f.iter().all(|(_, a)| {
        (a - Complex64::new(1.0, 0.0)).norm() <= tolerance
    });
    SpectrumReport {
        is_positive_definite,
        is_idempotent,
        min_gap: f.min_gap(),
        degree: f.degree(),
        support_size: f.support_size(),
    }
}

/// Error produced when reading a polynomial file.
#[derive(Debug)]
pub enum PolyFileError {
    Io(std::io::Error),
    Parse { line: usize, message: String },
}

impl std::fmt::Display for PolyFileError {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PolyFileError::Io(e) => write!(out, "i/o error: {e}"),
            PolyFileError::Parse { line, message } => {
                write!(out, "parse error on line {line}: {message}")
            }
        }
    }
}

impl std::error::Error for PolyFileError {}

impl From<std::io::Error> for PolyFileError {
    fn from(e: std::io::Error) -> Self {
        PolyFileError::Io(e)
    }
}

/// Renders the spectrum as one `[frequency, real, imag]` record per line.
///
/// Floats are printed with Rust's shortest round-trip formatting, so reading
/// the text back reproduces every coefficient bit-for-bit.
pub fn to_records(f: &TrigPoly) -> String {
    let mut out = String::new();
    for (&h, &a) in f.iter() {
        let _ = writeln!(out, "[{}, {}, {}]", h, a.re, a.im);
    }
    out
}

/// Parses the record format produced by [`to_records`].
///
/// Accepts bracketed or bare triples, comma or whitespace separated, blank
/// lines, `#` comments, and both ASCII `-` and U+2212 `−` minus signs.
/// Duplicate frequencies are summed, exact zeros dropped.
pub fn from_records(text: &str) -> Result<TrigPoly, PolyFileError> {
    let mut entries: Vec<(i64, Complex64)> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.replace('\u{2212}', "-");
        let stripped: String = line
            .chars()
            .map(|c| match c {
                '[' | ']' | ',' => ' ',
                other => other,
            })
            .collect();
        let stripped = stripped.trim();
        if stripped.is_empty() || stripped.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = stripped.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(PolyFileError::Parse {
                line: idx + 1,
                message: format!("expected 3 fields, found {}", parts.len()),
            });
        }
        let h: i64 = parts[0].parse().map_err(|e| PolyFileError::Parse {
            line: idx + 1,
            message: format!("bad frequency `{}`: {e}", parts[0]),
        })?;
        let re: f64 = parts[1].parse().map_err(|e| PolyFileError::Parse {
            line: idx + 1,
            message: format!("bad real part `{}`: {e}", parts[1]),
        })?;
        let im: f64 = parts[2].parse().map_err(|e| PolyFileError::Parse {
            line: idx + 1,
            message: format!("bad imaginary part `{}`: {e}", parts[2]),
        })?;
        entries.push((h, Complex64::new(re, im)));
    }
    Ok(TrigPoly::from_entries(entries))
}

/// Writes the record format to a file.
pub fn write_poly(f: &TrigPoly, path: &Path) -> Result<(), PolyFileError> {
    std::fs::write(path, to_records(f))?;
    Ok(())
}

/// Reads the record format from a file.
pub fn read_poly(path: &Path) -> Result<TrigPoly, PolyFileError> {
    let text = std::fs::read_to_string(path)?;
    from_records(&text)
}
