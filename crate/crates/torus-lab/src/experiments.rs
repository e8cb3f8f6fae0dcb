//! The experiments: Shapiro-inequality verification with the comb sharpness
//! sweep, strong-concentration demonstrations, the majorant-margin
//! measurement, and the truncated gap series exhibiting the failure of
//! Wiener's property at non-even exponents.
//!
//! Every experiment is a pure function of (parameters, seed, quadrature
//! options) up to the measured `runtime_ms`; reports compare byte-identical
//! across reruns once that field is zeroed (see
//! [`crate::report::Report::to_canonical_json`]).

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use torus_spectral::construct::{
    gap_series, highp_concentrator, lowp_concentrator, ms_pair, shapiro_counterexample,
    ConstructError, GapBuilder, GapSeriesParams, HighpParams, LowpParams,
};
use torus_spectral::norms::{
    concentration_ratio, hq_estimate, lp_integral, lp_integral_on_grid, Domain, NormError,
    QuadratureOptions,
};
use torus_spectral::poly::{classify, combine, modulate, TrigPoly};
use torus_spectral::sets::{make_set, SetError, SymmetricSet};
use torus_spectral::tol::PD_TOLERANCE;

use crate::report::{ParamValue, Quantity, Report, Verdict};

/// Poisson radii used by every Hardy-space sweep, densest near the boundary
/// where the quasi-norm supremum lives (and attained exactly at r = 1 for
/// polynomials).
pub const HQ_RADII: [f64; 4] = [0.9, 0.99, 0.999, 1.0];

/// Comb lengths of the sharpness sweep: 2^8 through 2^12.
pub const SHARPNESS_SWEEP: [u64; 5] = [256, 512, 1024, 2048, 4096];

/// Errors surfaced by the experiment layer.
#[derive(Debug)]
pub enum ExperimentError {
    /// A parameter violates an experiment precondition (usage-level).
    InvalidParameter(String),
    Norm(NormError),
    Set(SetError),
    Construct(ConstructError),
}

impl std::fmt::Display for ExperimentError {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExperimentError::InvalidParameter(msg) => write!(out, "invalid parameter: {msg}"),
            ExperimentError::Norm(e) => write!(out, "{e}"),
            ExperimentError::Set(e) => write!(out, "{e}"),
            ExperimentError::Construct(e) => write!(out, "{e}"),
        }
    }
}

impl std::error::Error for ExperimentError {}

impl From<NormError> for ExperimentError {
    fn from(e: NormError) -> Self {
        ExperimentError::Norm(e)
    }
}

impl From<SetError> for ExperimentError {
    fn from(e: SetError) -> Self {
        ExperimentError::Set(e)
    }
}

impl From<ConstructError> for ExperimentError {
    fn from(e: ConstructError) -> Self {
        ExperimentError::Construct(e)
    }
}

fn invalid(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::InvalidParameter(msg.into())
}

/// True when x is within tol of some even integer 2, 4, 6, ….
fn near_even(x: f64, tol: f64) -> bool {
    if x < 2.0 - tol {
        return false;
    }
    let half = x / 2.0;
    (half - half.round()).abs() <= tol / 2.0 && half.round() >= 1.0
}

/// Draws a random positive definite polynomial: a support of `size` distinct
/// frequencies in [−degree_cap, degree_cap] (size uniform in 1..=max_support)
/// with i.i.d. uniform-[0,1) coefficients. Duplicate frequency draws are
/// skipped (their coefficient draw is consumed and discarded), keeping the
/// stream deterministic.
pub fn random_pd_poly(
    rng: &mut ChaCha20Rng,
    degree_cap: i64,
    max_support: usize,
) -> TrigPoly {
    let size = rng.gen_range(1..=max_support);
    let mut seen = BTreeSet::new();
    let mut entries = Vec::with_capacity(size);
    while seen.len() < size {
        let h = rng.gen_range(-degree_cap..=degree_cap);
        let c = rng.gen::<f64>();
        if seen.insert(h) {
            entries.push((h, Complex64::new(c, 0.0)));
        }
    }
    TrigPoly::from_entries(entries)
}

/// Draws a random complex polynomial the same way, with coefficients uniform
/// in the square [−1, 1) × [−1, 1)i.
pub fn random_complex_poly(
    rng: &mut ChaCha20Rng,
    degree_cap: i64,
    max_support: usize,
) -> TrigPoly {
    let size = rng.gen_range(1..=max_support);
    let mut seen = BTreeSet::new();
    let mut entries = Vec::with_capacity(size);
    while seen.len() < size {
        let h = rng.gen_range(-degree_cap..=degree_cap);
        let re = 2.0 * rng.gen::<f64>() - 1.0;
        let im = 2.0 * rng.gen::<f64>() - 1.0;
        if seen.insert(h) {
            entries.push((h, Complex64::new(re, im)));
        }
    }
    TrigPoly::from_entries(entries)
}

/// (most negative coefficient real part, largest |imaginary part|) over the
/// stored spectrum — the two numbers behind the positive-definiteness claim.
fn pd_extremes(f: &TrigPoly) -> (f64, f64) {
    let mut min_re = f64::INFINITY;
    let mut max_im = 0.0f64;
    for (_, a) in f.iter() {
        min_re = min_re.min(a.re);
        max_im = max_im.max(a.im.abs());
    }
    if !min_re.is_finite() {
        min_re = 0.0;
    }
    (min_re, max_im)
}

fn push_spectrum_quantities(
    quantities: &mut Vec<Quantity>,
    verdicts: &mut Vec<Verdict>,
    f: &TrigPoly,
) {
    let (min_re, max_im) = pd_extremes(f);
    quantities.push(Quantity {
        label: "assembled degree".into(),
        value: f.degree() as f64,
        error_bound: None,
    });
    quantities.push(Quantity {
        label: "assembled support size".into(),
        value: f.support_size() as f64,
        error_bound: None,
    });
    quantities.push(Quantity {
        label: "assembled minimum spectral gap".into(),
        value: f.min_gap() as f64,
        error_bound: None,
    });
    quantities.push(Quantity {
        label: "most negative coefficient real part".into(),
        value: min_re,
        error_bound: None,
    });
    quantities.push(Quantity {
        label: "largest coefficient imaginary magnitude".into(),
        value: max_im,
        error_bound: None,
    });
    let report = classify(f, PD_TOLERANCE);
    verdicts.push(Verdict {
        claim: "positive definite coefficientwise: most negative coefficient real part >= -1e-12 \
                and largest coefficient imaginary magnitude <= 1e-12"
            .into(),
        pass: report.is_positive_definite,
    });
}

// ---------------------------------------------------------------------------
// verify-shapiro
// ---------------------------------------------------------------------------

/// Parameters of the Shapiro-inequality experiment.
#[derive(Clone, Debug)]
pub struct ShapiroParams {
    /// Even exponent: 2, 4, or 6.
    pub p: u32,
    /// Window half-width, 0 < a < 1/2; the window is (−a, a).
    pub a: f64,
    /// Number of random positive definite corpus samples.
    pub corpus: u32,
    /// Degree cap of corpus samples.
    pub degree_cap: i64,
    /// Comb modulus of the sharpness sweep.
    pub sharpness_k: i64,
}

impl Default for ShapiroParams {
    fn default() -> Self {
        ShapiroParams {
            p: 2,
            a: 0.25,
            corpus: 500,
            degree_cap: 64,
            sharpness_k: 4,
        }
    }
}

/// Verifies the Shapiro inequality
/// (1/2a)·∫_{−a}^{a} |f|^p ≥ (1/2)·∫_T |f|^p − combined error bounds
/// over a seeded corpus of random positive definite polynomials, and runs the
/// comb sharpness sweep recording the concentration-ratio trajectory toward
/// 1/k. The trajectory verdicts attach only when a < 1/k — for wider windows
/// the window captures neighbouring comb peaks and the limit is larger.
pub fn verify_shapiro(
    params: &ShapiroParams,
    seed: u64,
    opts: &QuadratureOptions,
) -> Result<Report, ExperimentError> {
    if !matches!(params.p, 2 | 4 | 6) {
        return Err(invalid("p must be one of the even exponents 2, 4, 6"));
    }
    if !(params.a > 0.0 && params.a < 0.5) {
        return Err(invalid("a must lie strictly between 0 and 1/2"));
    }
    if params.corpus == 0 {
        return Err(invalid("corpus size must be at least 1"));
    }
    if params.degree_cap < 1 {
        return Err(invalid("degree cap must be at least 1"));
    }
    if params.sharpness_k < 2 || params.sharpness_k > SHARPNESS_SWEEP[0] as i64 {
        return Err(invalid("sharpness comb modulus must lie in [2, 256]"));
    }
    let t0 = Instant::now();
    let pf = params.p as f64;
    let window = make_set(&[(-params.a, params.a)])?;

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut violations: u32 = 0;
    let mut min_rel_margin = f64::INFINITY;
    for _ in 0..params.corpus {
        let f = random_pd_poly(&mut rng, params.degree_cap, 32);
        let on_window = lp_integral(&f, pf, Domain::Set(&window), opts)?;
        let on_torus = lp_integral(&f, pf, Domain::Torus, opts)?;
        let lhs = on_window.value / (2.0 * params.a);
        let rhs = 0.5 * on_torus.value;
        let slack = on_window.error_bound / (2.0 * params.a) + 0.5 * on_torus.error_bound;
        if lhs < rhs - slack {
            violations += 1;
        }
        let rel = (lhs - rhs) / rhs.max(f64::MIN_POSITIVE);
        if rel < min_rel_margin {
            min_rel_margin = rel;
        }
    }

    let mut quantities = vec![
        Quantity {
            label: "corpus violations beyond error bounds".into(),
            value: violations as f64,
            error_bound: None,
        },
        Quantity {
            label: "corpus min relative margin".into(),
            value: min_rel_margin,
            error_bound: None,
        },
    ];
    let mut verdicts = vec![Verdict {
        claim: "corpus violations beyond error bounds = 0".into(),
        pass: violations == 0,
    }];

    // Sharpness sweep: the comb's concentration ratio on the window.
    let target = 1.0 / params.sharpness_k as f64;
    let mut deviations = Vec::with_capacity(SHARPNESS_SWEEP.len());
    for &n in &SHARPNESS_SWEEP {
        let comb = shapiro_counterexample(n, params.sharpness_k);
        let r = concentration_ratio(&comb, pf, &window, opts)?;
        quantities.push(Quantity {
            label: format!("sharpness ratio at n={n}"),
            value: r.ratio,
            error_bound: None,
        });
        deviations.push((r.ratio - target).abs());
    }
    let final_dev = *deviations.last().expect("sweep is nonempty");
    quantities.push(Quantity {
        label: "sharpness final deviation from 1/k".into(),
        value: final_dev,
        error_bound: None,
    });
    if params.a < target {
        verdicts.push(Verdict {
            claim: "sharpness final deviation from 1/k <= 0.02".into(),
            pass: final_dev <= 0.02,
        });
        let monotone = deviations.windows(2).all(|w| w[1] <= w[0] + 1e-15);
        verdicts.push(Verdict {
            claim: "sharpness final deviation from 1/k is reached monotonically across the sweep"
                .into(),
            pass: monotone,
        });
    }

    let mut parameters = BTreeMap::new();
    parameters.insert("p".into(), ParamValue::UInt(params.p as u64));
    parameters.insert("a".into(), ParamValue::Float(params.a));
    parameters.insert("corpus".into(), ParamValue::UInt(params.corpus as u64));
    parameters.insert("degree_cap".into(), ParamValue::Int(params.degree_cap));
    parameters.insert("sharpness_k".into(), ParamValue::Int(params.sharpness_k));
    parameters.insert(
        "oversample".into(),
        ParamValue::UInt(opts.oversample as u64),
    );
    Ok(Report {
        experiment_id: "verify-shapiro".into(),
        parameters,
        quantities,
        verdicts,
        seed,
        runtime_ms: t0.elapsed().as_millis() as u64,
    })
}

// ---------------------------------------------------------------------------
// demo-conc
// ---------------------------------------------------------------------------

/// Which strong-concentration assembly to demonstrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConcMode {
    Lowp,
    Highp,
}

/// Parameters of the strong-concentration demonstration.
#[derive(Clone, Debug)]
pub struct ConcParams {
    pub mode: ConcMode,
    /// Sign-polynomial length (lowp).
    pub n: u64,
    /// Sign-search trial budget (lowp).
    pub budget: u32,
    /// Odd base frequency of the majorant pair (highp).
    pub j: u64,
    /// Riesz amplification levels (highp).
    pub levels: u32,
    /// log2 of the grid for the majorant-pair integrals (highp).
    pub margin_grid_pow: u32,
    /// Dilation scale: the window is (a − 1/(2N), a + 1/(2N)).
    pub big_n: u64,
    pub a: f64,
    pub p: f64,
    pub q: f64,
    /// Target concentration ratio ε.
    pub eps: f64,
    pub tail_budget: f64,
}

impl ConcParams {
    /// The low-exponent demonstration at the canonical scale: n = N′ = 2^14
    /// bounded, window (0.3, 0.4) ∪ (−0.4, −0.3).
    pub fn lowp_defaults() -> Self {
        ConcParams {
            mode: ConcMode::Lowp,
            n: 1 << 14,
            budget: 64,
            j: 3,
            levels: 0,
            margin_grid_pow: 20,
            big_n: 10,
            a: 0.35,
            p: 1.5,
            q: 1.2,
            eps: 0.1,
            tail_budget: 0.05,
        }
    }

    /// The high-exponent demonstration: the Riesz-amplified majorant pair.
    pub fn highp_defaults() -> Self {
        ConcParams {
            mode: ConcMode::Highp,
            n: 0,
            budget: 0,
            j: 3,
            levels: 2,
            margin_grid_pow: 20,
            big_n: 8,
            a: 0.35,
            p: 3.0,
            q: 3.0,
            eps: 1.0,
            tail_budget: 0.05,
        }
    }
}

/// Runs the strong-concentration demonstration: assembles the concentrator,
/// computes both sides of the inequality ∫_{∁E}|f|^p ≤ ε·(∫_T|f|^q)^{p/q}
/// for E = (a − 1/2N, a + 1/2N) ∪ mirror, and reports the achieved ratio,
/// the positive-definiteness certificate, and the spectrum structure.
///
/// A sign search that exhausts its budget does not abort the experiment: the
/// best trial is assembled and measured, and the convergence verdict fails.
pub fn demo_strong_concentration(
    params: &ConcParams,
    seed: u64,
    opts: &QuadratureOptions,
) -> Result<Report, ExperimentError> {
    if params.big_n < 1 {
        return Err(invalid("N must be at least 1"));
    }
    if !(params.a > 0.0 && params.a < 0.5) {
        return Err(invalid("a must lie strictly between 0 and 1/2"));
    }
    let half = 1.0 / (2.0 * params.big_n as f64);
    if params.a - half <= 0.0 || params.a + half >= 0.5 {
        return Err(invalid(
            "the window (a - 1/2N, a + 1/2N) must sit strictly inside (0, 1/2)",
        ));
    }
    if !(params.eps > 0.0) {
        return Err(invalid("eps must be positive"));
    }
    if !(params.tail_budget > 0.0 && params.tail_budget < 1.0) {
        return Err(invalid("tail budget must lie in (0, 1)"));
    }
    match params.mode {
        ConcMode::Lowp => {
            if !(params.q > 0.0 && params.q <= params.p && params.p < 2.0) {
                return Err(invalid("lowp mode needs 0 < q <= p < 2"));
            }
        }
        ConcMode::Highp => {
            if !(params.p > 2.0) || near_even(params.p, 1e-9) {
                return Err(invalid("highp mode needs p > 2 and p not an even integer"));
            }
            if !(params.q > 0.0) {
                return Err(invalid("highp mode needs q > 0"));
            }
            if params.j % 2 == 0 {
                return Err(invalid("the majorant base frequency j must be odd"));
            }
        }
    }

    let t0 = Instant::now();
    let window = make_set(&[
        (params.a - half, params.a + half),
        (-params.a - half, -params.a + half),
    ])?;
    let comp = window.complement()?;

    let mut quantities = Vec::new();
    let mut verdicts = Vec::new();

    let ratio_of = |f: &TrigPoly| -> Result<(f64, f64, f64, f64, f64), ExperimentError> {
        let off = lp_integral(f, params.p, Domain::Set(&comp), opts)?;
        let den = lp_integral(f, params.q, Domain::Torus, opts)?;
        let denom = den.value.powf(params.p / params.q);
        Ok((
            off.value,
            off.error_bound,
            den.value,
            den.error_bound,
            off.value / denom,
        ))
    };

    let poly = match params.mode {
        ConcMode::Lowp => {
            let lp = LowpParams {
                n: params.n,
                big_n: params.big_n,
                a: params.a,
                p: params.p,
                q: params.q,
                eps: params.eps,
                tail_budget: params.tail_budget,
                budget: params.budget,
                seed,
            };
            let conc = lowp_concentrator(&lp, opts)?;
            quantities.push(Quantity {
                label: "sign search trials used".into(),
                value: conc.sign_trials as f64,
                error_bound: None,
            });
            quantities.push(Quantity {
                label: "sign search achieved ratio".into(),
                value: conc.sign_ratio.unwrap_or(f64::INFINITY),
                error_bound: None,
            });
            verdicts.push(Verdict {
                claim: "sign search trials used stayed within budget and met the target ratio"
                    .into(),
                pass: conc.sign_search_converged,
            });
            conc.poly
        }
        ConcMode::Highp => {
            // Amplification sweep: the achieved ratio at every level up to
            // the requested one.
            for lv in 0..params.levels {
                let hp = HighpParams {
                    j: params.j,
                    levels: lv,
                    big_n: params.big_n,
                    a: params.a,
                    tail_budget: params.tail_budget,
                    growth: 3,
                };
                let stage = highp_concentrator(&hp)?;
                let (_, _, _, _, r) = ratio_of(&stage.poly)?;
                quantities.push(Quantity {
                    label: format!("achieved concentration ratio at K={lv}"),
                    value: r,
                    error_bound: None,
                });
            }
            let hp = HighpParams {
                j: params.j,
                levels: params.levels,
                big_n: params.big_n,
                a: params.a,
                tail_budget: params.tail_budget,
                growth: 3,
            };
            highp_concentrator(&hp)?.poly
        }
    };

    let (off_v, off_e, den_v, den_e, achieved) = ratio_of(&poly)?;
    quantities.push(Quantity {
        label: "off-target integral at exponent p".into(),
        value: off_v,
        error_bound: Some(off_e),
    });
    quantities.push(Quantity {
        label: "torus integral at exponent q".into(),
        value: den_v,
        error_bound: Some(den_e),
    });
    if params.mode == ConcMode::Highp {
        quantities.push(Quantity {
            label: format!("achieved concentration ratio at K={}", params.levels),
            value: achieved,
            error_bound: None,
        });
    }
    quantities.push(Quantity {
        label: "achieved concentration ratio".into(),
        value: achieved,
        error_bound: None,
    });
    verdicts.push(Verdict {
        claim: "achieved concentration ratio <= target eps".into(),
        pass: achieved <= params.eps,
    });
    push_spectrum_quantities(&mut quantities, &mut verdicts, &poly);

    if params.mode == ConcMode::Highp {
        let (g0, cap0) = ms_pair(params.j);
        let m = 1usize << params.margin_grid_pow;
        let ig = lp_integral_on_grid(&g0, params.p, Domain::Torus, m)?;
        let icap = lp_integral_on_grid(&cap0, params.p, Domain::Torus, m)?;
        quantities.push(Quantity {
            label: "majorant pair integral of g0".into(),
            value: ig.value,
            error_bound: Some(ig.error_bound),
        });
        quantities.push(Quantity {
            label: "majorant pair integral of G0".into(),
            value: icap.value,
            error_bound: Some(icap.error_bound),
        });
        quantities.push(Quantity {
            label: "majorant pair margin".into(),
            value: ig.value - icap.value,
            error_bound: Some(ig.error_bound + icap.error_bound),
        });
        verdicts.push(Verdict {
            claim: "majorant pair margin is strictly positive".into(),
            pass: icap.value < ig.value,
        });
    }

    let mut parameters = BTreeMap::new();
    parameters.insert(
        "mode".into(),
        ParamValue::Text(
            match params.mode {
                ConcMode::Lowp => "lowp",
                ConcMode::Highp => "highp",
            }
            .into(),
        ),
    );
    parameters.insert("N".into(), ParamValue::UInt(params.big_n));
    parameters.insert("a".into(), ParamValue::Float(params.a));
    parameters.insert("p".into(), ParamValue::Float(params.p));
    parameters.insert("q".into(), ParamValue::Float(params.q));
    parameters.insert("eps".into(), ParamValue::Float(params.eps));
    parameters.insert("tail_budget".into(), ParamValue::Float(params.tail_budget));
    parameters.insert("window".into(), ParamValue::Text(window.to_syntax()));
    parameters.insert(
        "oversample".into(),
        ParamValue::UInt(opts.oversample as u64),
    );
    match params.mode {
        ConcMode::Lowp => {
            parameters.insert("n".into(), ParamValue::UInt(params.n));
            parameters.insert("budget".into(), ParamValue::UInt(params.budget as u64));
        }
        ConcMode::Highp => {
            parameters.insert("j".into(), ParamValue::UInt(params.j));
            parameters.insert("K".into(), ParamValue::UInt(params.levels as u64));
            parameters.insert(
                "margin_grid_pow".into(),
                ParamValue::UInt(params.margin_grid_pow as u64),
            );
        }
    }
    Ok(Report {
        experiment_id: "demo-conc".into(),
        parameters,
        quantities,
        verdicts,
        seed,
        runtime_ms: t0.elapsed().as_millis() as u64,
    })
}

// ---------------------------------------------------------------------------
// ms-margin
// ---------------------------------------------------------------------------

/// Measures the majorant-pair margin ∫|g₀|^p − ∫|G₀|^p on a 2^grid_pow
/// grid, with verdicts for strictness and for the margin exceeding 10× the
/// combined rigorous quadrature error bounds. The bounds shrink like 1/M, so
/// certification needs a fine grid (the degree-7 pair streams cheaply even at
/// 2^27).
pub fn ms_margin(j: u64, p: f64, grid_pow: u32) -> Result<Report, ExperimentError> {
    if j % 2 == 0 {
        return Err(invalid("the majorant base frequency j must be odd"));
    }
    if !(p > 2.0) || near_even(p, 1e-9) {
        return Err(invalid("the margin experiment needs p > 2 and p not an even integer"));
    }
    if grid_pow > 30 {
        return Err(invalid("grid exponent beyond 2^30 is not desk scale"));
    }
    let (g0, cap0) = ms_pair(j);
    let floor = 2 * g0.degree() as usize + 1;
    if (1usize << grid_pow) < floor {
        return Err(invalid("grid is below the anti-aliasing floor for this j"));
    }
    let t0 = Instant::now();
    let m = 1usize << grid_pow;
    let ig = lp_integral_on_grid(&g0, p, Domain::Torus, m)?;
    let icap = lp_integral_on_grid(&cap0, p, Domain::Torus, m)?;
    let margin = ig.value - icap.value;
    let combined = ig.error_bound + icap.error_bound;
    let quantities = vec![
        Quantity {
            label: "integral of g0 power p".into(),
            value: ig.value,
            error_bound: Some(ig.error_bound),
        },
        Quantity {
            label: "integral of G0 power p".into(),
            value: icap.value,
            error_bound: Some(icap.error_bound),
        },
        Quantity {
            label: "majorant margin".into(),
            value: margin,
            error_bound: Some(combined),
        },
        Quantity {
            label: "combined quadrature error bound".into(),
            value: combined,
            error_bound: None,
        },
    ];
    let verdicts = vec![
        Verdict {
            claim: "strict majorant inequality: integral of G0 power p < integral of g0 power p"
                .into(),
            pass: icap.value < ig.value,
        },
        Verdict {
            claim: "majorant margin exceeds 10x the combined quadrature error bound".into(),
            pass: margin >= 10.0 * combined,
        },
    ];
    let mut parameters = BTreeMap::new();
    parameters.insert("j".into(), ParamValue::UInt(j));
    parameters.insert("p".into(), ParamValue::Float(p));
    parameters.insert("grid_pow".into(), ParamValue::UInt(grid_pow as u64));
    Ok(Report {
        experiment_id: "ms-margin".into(),
        parameters,
        quantities,
        verdicts,
        seed: 0,
        runtime_ms: t0.elapsed().as_millis() as u64,
    })
}

// ---------------------------------------------------------------------------
// demo-wiener
// ---------------------------------------------------------------------------

/// Parameters of the Wiener-failure truncation experiment.
#[derive(Clone, Debug)]
pub struct WienerParams {
    pub p: f64,
    pub q: f64,
    pub target: SymmetricSet,
    pub blocks: u32,
    /// Gap exponent; None derives the smallest admissible integer.
    pub alpha: Option<u32>,
    pub builder: GapBuilder,
    pub enforce_intra_gap: bool,
}

/// Builds the truncated gap series and reports the proof-chain quantities:
/// per-block L^p mass of the assembled series on the windows E_k against the
/// growth thresholds 2^(k/2) − Σ_j 2^(−j/2), the complement mass, the gap
/// schedule, and the Hardy-space estimates of the partial sums.
///
/// Verdicts are builder-specific: the ring and bump families carry the
/// growth, boundedness, and Hardy-growth claims; the comb family carries the
/// concentration-ratio claim (ratio near 1/l on the target). The gap and
/// positive-definiteness claims attach always.
pub fn demo_wiener_failure(
    params: &WienerParams,
    seed: u64,
    opts: &QuadratureOptions,
) -> Result<Report, ExperimentError> {
    if near_even(params.p, 1e-9) {
        return Err(invalid("p must not be an even integer"));
    }
    if !(params.q > 0.0 && params.q < params.p) {
        return Err(invalid("need 0 < q < p"));
    }
    if params.blocks == 0 {
        return Err(invalid("need at least one block"));
    }
    let t0 = Instant::now();
    let gp = GapSeriesParams {
        blocks: params.blocks,
        p: params.p,
        q: params.q,
        alpha: params.alpha,
        builder: params.builder,
        seed,
        enforce_intra_gap: params.enforce_intra_gap,
    };
    let gs = gap_series(&params.target, &gp, opts)?;
    let assembled = &gs.poly;
    let growth_claims = !matches!(params.builder, GapBuilder::ShapiroComb { .. });

    let mut quantities = Vec::new();
    let mut verdicts = Vec::new();

    let threshold_sum: f64 = (1..=params.blocks)
        .map(|j| 2f64.powf(-(j as f64) / 2.0))
        .sum();
    for b in &gs.blocks {
        let on_ek = lp_integral(assembled, params.p, Domain::Set(&b.e_k), opts)?;
        let norm = on_ek.value.powf(1.0 / params.p);
        let lower = (on_ek.value - on_ek.error_bound).max(0.0).powf(1.0 / params.p);
        let slack = norm - lower;
        let threshold = b.target_norm - threshold_sum;
        let k = b.k;
        quantities.push(Quantity {
            label: format!("block {k} norm on its window"),
            value: norm,
            error_bound: Some(slack),
        });
        quantities.push(Quantity {
            label: format!("block {k} growth threshold"),
            value: threshold,
            error_bound: None,
        });
        if growth_claims {
            verdicts.push(Verdict {
                claim: format!(
                    "block {k} norm on its window >= block {k} growth threshold"
                ),
                pass: norm >= threshold,
            });
            verdicts.push(Verdict {
                claim: format!(
                    "block {k} norm on its window >= block {k} growth threshold minus quadrature allowance"
                ),
                pass: norm >= threshold - slack,
            });
        }
    }

    let comp = params.target.complement()?;
    let on_comp = lp_integral(assembled, params.p, Domain::Set(&comp), opts)?;
    let comp_norm = on_comp.value.powf(1.0 / params.p);
    let comp_lower = (on_comp.value - on_comp.error_bound)
        .max(0.0)
        .powf(1.0 / params.p);
    quantities.push(Quantity {
        label: "complement integral".into(),
        value: on_comp.value,
        error_bound: Some(on_comp.error_bound),
    });
    quantities.push(Quantity {
        label: "complement norm".into(),
        value: comp_norm,
        error_bound: Some(comp_norm - comp_lower),
    });
    if growth_claims {
        verdicts.push(Verdict {
            claim: "complement integral <= 2".into(),
            pass: on_comp.value <= 2.0,
        });
        verdicts.push(Verdict {
            claim: "complement norm <= 2".into(),
            pass: comp_norm <= 2.0,
        });
    }

    for (i, &g) in gs.gaps.iter().enumerate() {
        let k = (i + 1) as i64;
        quantities.push(Quantity {
            label: format!("gap opened at block {k}"),
            value: g as f64,
            error_bound: None,
        });
        verdicts.push(Verdict {
            claim: format!("gap opened at block {k} >= {k}"),
            pass: g >= k,
        });
    }
    if params.enforce_intra_gap {
        for b in &gs.blocks {
            let k = b.k;
            let intra = b.poly.min_gap();
            quantities.push(Quantity {
                label: format!("block {k} intra-block minimum gap"),
                value: intra as f64,
                error_bound: None,
            });
            verdicts.push(Verdict {
                claim: format!("block {k} intra-block minimum gap >= {k}"),
                pass: intra >= k as i64,
            });
        }
    }

    // Hardy-space estimates of the partial sums.
    let mut partial = TrigPoly::zero();
    let one = Complex64::new(1.0, 0.0);
    let mut previous = f64::NEG_INFINITY;
    let mut hq_increasing = true;
    for b in &gs.blocks {
        partial = combine(one, &partial, one, &modulate(&b.poly, b.offset));
        let est = hq_estimate(&partial, params.q, &HQ_RADII, opts)?;
        let k = b.k;
        quantities.push(Quantity {
            label: format!("hq estimate after block {k}"),
            value: est.value,
            error_bound: None,
        });
        if k > 1 {
            let step_ok = est.value > previous;
            hq_increasing = hq_increasing && step_ok;
            if growth_claims {
                verdicts.push(Verdict {
                    claim: format!(
                        "hq estimate after block {k} exceeds hq estimate after block {}",
                        k - 1
                    ),
                    pass: step_ok,
                });
            }
        }
        previous = est.value;
    }
    let _ = hq_increasing;

    if let GapBuilder::ShapiroComb { l } = params.builder {
        let reciprocal = 1.0 / l as f64;
        for b in &gs.blocks {
            let r = concentration_ratio(&b.poly, params.p, &params.target, opts)?;
            let k = b.k;
            quantities.push(Quantity {
                label: format!("block {k} concentration ratio on target"),
                value: r.ratio,
                error_bound: None,
            });
            verdicts.push(Verdict {
                claim: format!(
                    "block {k} concentration ratio on target is within 0.03 of the reciprocal comb modulus"
                ),
                pass: (r.ratio - reciprocal).abs() <= 0.03,
            });
        }
    }

    push_spectrum_quantities(&mut quantities, &mut verdicts, assembled);

    let mut parameters = BTreeMap::new();
    parameters.insert("p".into(), ParamValue::Float(params.p));
    parameters.insert("q".into(), ParamValue::Float(params.q));
    parameters.insert(
        "target".into(),
        ParamValue::Text(params.target.to_syntax()),
    );
    parameters.insert("K".into(), ParamValue::UInt(params.blocks as u64));
    parameters.insert(
        "alpha".into(),
        match params.alpha {
            Some(a) => ParamValue::UInt(a as u64),
            None => ParamValue::Text("auto".into()),
        },
    );
    parameters.insert(
        "alpha_in_force".into(),
        ParamValue::UInt(gs.alpha as u64),
    );
    let builder_name = match params.builder {
        GapBuilder::Ring => "ring".to_string(),
        GapBuilder::ShapiroComb { l } => {
            parameters.insert("comb_modulus".into(), ParamValue::UInt(l));
            "comb".to_string()
        }
        GapBuilder::Lowp { tail_budget } => {
            parameters.insert("builder_tail_budget".into(), ParamValue::Float(tail_budget));
            "lowp".to_string()
        }
        GapBuilder::Highp { j, tail_budget } => {
            parameters.insert("builder_j".into(), ParamValue::UInt(j));
            parameters.insert("builder_tail_budget".into(), ParamValue::Float(tail_budget));
            "highp".to_string()
        }
    };
    parameters.insert("builder".into(), ParamValue::Text(builder_name));
    parameters.insert(
        "enforce_intra_gap".into(),
        ParamValue::Flag(params.enforce_intra_gap),
    );
    parameters.insert(
        "oversample".into(),
        ParamValue::UInt(opts.oversample as u64),
    );
    Ok(Report {
        experiment_id: "demo-wiener".into(),
        parameters,
        quantities,
        verdicts,
        seed,
        runtime_ms: t0.elapsed().as_millis() as u64,
    })
}
