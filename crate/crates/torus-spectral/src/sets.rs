//! Symmetric unions of open intervals on the torus.
//!
//! A [`SymmetricSet`] is a finite union of disjoint open intervals inside
//! [−1/2, 1/2], symmetric about 0, with positive measure. Sets enter the
//! library through [`make_set`], which sorts, merges overlaps, and *verifies*
//! symmetry — asymmetric input is an error, never silently symmetrized.
//!
//! The torus is identified with [−1/2, 1/2); the uniform grid point
//! t_j = j/M is mapped into that window by [`grid_point`]. Membership is
//! always strict (open intervals), decided by f64 comparisons on the mapped
//! point itself, and the same code path powers both [`SymmetricSet::contains`]
//! and [`SymmetricSet::indicator_on_grid`], so every consumer sees identical
//! masks.

use crate::sum::pairwise_sum;
use crate::tol::SYMMETRY_TOLERANCE;

/// A finite union of disjoint open intervals in [−1/2, 1/2], symmetric
/// about 0.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricSet {
    /// Sorted, pairwise disjoint open intervals (lo, hi) with lo < hi.
    intervals: Vec<(f64, f64)>,
}

/// Validation errors for set construction.
#[derive(Debug, Clone, PartialEq)]
pub enum SetError {
    /// No intervals supplied.
    Empty,
    /// An interval has lo ≥ hi or a non-finite endpoint.
    BadInterval { lo: f64, hi: f64 },
    /// An endpoint lies outside [−1/2, 1/2].
    OutOfRange { lo: f64, hi: f64 },
    /// The union is not symmetric about 0 within the tolerance.
    Asymmetric { detail: String },
    /// Complement requested for a set of full measure.
    FullMeasure,
    /// Text input could not be parsed.
    Syntax { detail: String },
}

impl std::fmt::Display for SetError {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SetError::Empty => write!(out, "set must contain at least one interval"),
            SetError::BadInterval { lo, hi } => {
                write!(out, "interval ({lo}, {hi}) is empty or not finite")
            }
            SetError::OutOfRange { lo, hi } => {
                write!(out, "interval ({lo}, {hi}) leaves [-1/2, 1/2]")
            }
            SetError::Asymmetric { detail } => {
                write!(out, "set is not symmetric about 0: {detail}")
            }
            SetError::FullMeasure => {
                write!(out, "complement of a full-measure set is empty")
            }
            SetError::Syntax { detail } => write!(out, "bad set syntax: {detail}"),
        }
    }
}

impl std::error::Error for SetError {}

/// Maps grid index j of an M-point grid to the torus window [−1/2, 1/2).
pub fn grid_point(j: usize, m: usize) -> f64 {
    let t = (j as f64) / (m as f64);
    if t >= 0.5 {
        t - 1.0
    } else {
        t
    }
}

/// Validates, sorts, merges, and wraps a list of open intervals.
///
/// Overlapping intervals are merged (their union is again an open interval);
/// intervals that merely touch at an endpoint stay separate, since the union
/// of open intervals omits the shared endpoint. Symmetry about 0 is verified
/// endpoint-by-endpoint within [`SYMMETRY_TOLERANCE`].
pub fn make_set(intervals: &[(f64, f64)]) -> Result<SymmetricSet, SetError> {
    if intervals.is_empty() {
        return Err(SetError::Empty);
    }
    for &(lo, hi) in intervals {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(SetError::BadInterval { lo, hi });
        }
        if lo < -0.5 || hi > 0.5 {
            return Err(SetError::OutOfRange { lo, hi });
        }
    }
    let mut sorted: Vec<(f64, f64)> = intervals.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite endpoints"));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
    for (lo, hi) in sorted {
        match merged.last_mut() {
            Some(last) if lo < last.1 => {
                last.1 = last.1.max(hi);
            }
            _ => merged.push((lo, hi)),
        }
    }
    // Symmetry: interval i must mirror interval n−1−i.
    let n = merged.len();
    for i in 0..n {
        let (lo_a, hi_a) = merged[i];
        let (lo_b, hi_b) = merged[n - 1 - i];
        let err_lo = (lo_a + hi_b).abs();
        let err_hi = (hi_a + lo_b).abs();
        if err_lo > SYMMETRY_TOLERANCE || err_hi > SYMMETRY_TOLERANCE {
            return Err(SetError::Asymmetric {
                detail: format!(
                    "interval ({lo_a}, {hi_a}) has no mirror within {SYMMETRY_TOLERANCE:e} \
                     (nearest candidate ({lo_b}, {hi_b}))"
                ),
            });
        }
    }
    Ok(SymmetricSet { intervals: merged })
}

impl SymmetricSet {
    /// The sorted, disjoint open intervals.
    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Lebesgue measure: Σ (hi − lo).
    pub fn measure(&self) -> f64 {
        let lens: Vec<f64> = self.intervals.iter().map(|&(lo, hi)| hi - lo).collect();
        pairwise_sum(&lens)
    }

    /// Strict membership of a point of [−1/2, 1/2).
    pub fn contains(&self, t: f64) -> bool {
        // Index of the first interval with lo >= t; the candidate is the one
        // before it.
        let idx = self.intervals.partition_point(|&(lo, _)| lo < t);
        if idx == 0 {
            return false;
        }
        let (_, hi) = self.intervals[idx - 1];
        t < hi
    }

    /// Membership mask of the M-point grid t_j = j/M (mapped to
    /// [−1/2, 1/2)), with strict inequalities at interval endpoints.
    pub fn indicator_on_grid(&self, m: usize) -> Vec<bool> {
        (0..m).map(|j| self.contains(grid_point(j, m))).collect()
    }

    /// The complement within [−1/2, 1/2], as a symmetric set.
    ///
    /// Fails with [`SetError::FullMeasure`] when no gap of positive width
    /// remains.
    pub fn complement(&self) -> Result<SymmetricSet, SetError> {
        let mut gaps: Vec<(f64, f64)> = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = -0.5;
        for &(lo, hi) in &self.intervals {
            if lo > cursor {
                gaps.push((cursor, lo));
            }
            cursor = cursor.max(hi);
        }
        if cursor < 0.5 {
            gaps.push((cursor, 0.5));
        }
        if gaps.is_empty() {
            return Err(SetError::FullMeasure);
        }
        make_set(&gaps)
    }

    /// True when every interval of `inner` sits inside one interval of
    /// `self` (inclusive endpoint comparisons).
    pub fn contains_set(&self, inner: &SymmetricSet) -> bool {
        inner.intervals.iter().all(|&(lo, hi)| {
            self.intervals
                .iter()
                .any(|&(olo, ohi)| olo <= lo && hi <= ohi)
        })
    }

    /// Renders the set in the CLI syntax `lo,hi;lo,hi`.
    pub fn to_syntax(&self) -> String {
        self.intervals
            .iter()
            .map(|&(lo, hi)| format!("{lo},{hi}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Parses the CLI set syntax `lo,hi;lo,hi`, accepting both ASCII `-` and
/// U+2212 `−` minus signs, then validates through [`make_set`].
pub fn parse_set(text: &str) -> Result<SymmetricSet, SetError> {
    let normalized = text.replace('\u{2212}', "-");
    let mut intervals = Vec::new();
    for part in normalized.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let fields: Vec<&str> = part.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(SetError::Syntax {
                detail: format!("`{part}` is not of the form lo,hi"),
            });
        }
        let lo: f64 = fields[0].parse().map_err(|e| SetError::Syntax {
            detail: format!("bad endpoint `{}`: {e}", fields[0]),
        })?;
        let hi: f64 = fields[1].parse().map_err(|e| SetError::Syntax {
            detail: format!("bad endpoint `{}`: {e}", fields[1]),
        })?;
        intervals.push((lo, hi));
    }
    if intervals.is_empty() {
        return Err(SetError::Syntax {
            detail: "no intervals given".to_string(),
        });
    }
    make_set(&intervals)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// The torus minus all balls of radius l^(−exponent) around irreducible
/// fractions k/l with l_floor < l ≤ l_max and k not divisible by l.
///
/// Fractions are mapped into (−1/2, 1/2]; balls crossing ±1/2 wrap around.
/// The resulting set is symmetric because irreducible fractions come in
/// mirror pairs k/l, (l−k)/l. A large `l_floor` keeps the removed measure
/// small: the measure of the result is at least 1 − 4/l_floor for
/// exponent ≥ 3.
///
/// Panics when l_floor < 1 or l_max ≤ l_floor or exponent < 1.
pub fn diophantine_set(l_floor: u64, l_max: u64, exponent: f64) -> SymmetricSet {
    assert!(l_floor >= 1, "l_floor must be >= 1");
    assert!(l_max > l_floor, "l_max must exceed l_floor");
    assert!(exponent >= 1.0, "exponent must be >= 1");
    let mut removed: Vec<(f64, f64)> = Vec::new();
    for l in (l_floor + 1)..=l_max {
        let radius = (l as f64).powf(-exponent);
        for k in 1..l {
            if gcd(k, l) != 1 {
                continue;
            }
            let mut center = (k as f64) / (l as f64);
            if center > 0.5 {
                center -= 1.0;
            }
            let lo = center - radius;
            let hi = center + radius;
            // Clip to the window and wrap the overhang to the other side.
            removed.push((lo.max(-0.5), hi.min(0.5)));
            if hi > 0.5 {
                removed.push((-0.5, hi - 1.0));
            }
            if lo < -0.5 {
                removed.push((lo + 1.0, 0.5));
            }
        }
    }
    if removed.is_empty() {
        return SymmetricSet {
            intervals: vec![(-0.5, 0.5)],
        };
    }
    removed.sort_by(|a, b| a.partial_cmp(b).expect("finite endpoints"));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(removed.len());
    for (lo, hi) in removed {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => {
                last.1 = last.1.max(hi);
            }
            _ => merged.push((lo, hi)),
        }
    }
    // Complement of the removed union within [−1/2, 1/2].
    let mut kept: Vec<(f64, f64)> = Vec::with_capacity(merged.len() + 1);
    let mut cursor = -0.5;
    for &(lo, hi) in &merged {
        if lo > cursor {
            kept.push((cursor, lo));
        }
        cursor = cursor.max(hi);
    }
    if cursor < 0.5 {
        kept.push((cursor, 0.5));
    }
    make_set(&kept).expect("diophantine exclusion set is symmetric by construction")
}
