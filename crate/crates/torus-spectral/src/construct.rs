//! The construction toolbox: Dirichlet combs, triangle kernels, Khintchine
//! sign searches, the Mockenhaupt–Schlag majorant pair, Riesz products,
//! strong-concentration assemblies, and block gap series.
//!
//! Everything here is deterministic. The only randomness is the ChaCha20
//! stream consumed by [`sign_search`] (and by the sign draws of the gap-series
//! builders that use it), always seeded explicitly.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::norms::{
    lp_integral, Domain, NormError, QuadratureOptions,
};
use crate::poly::{dilate, dirichlet, filter_multiples, modulate, multiply, TrigPoly};
use crate::sets::{make_set, SetError, SymmetricSet};

/// Cap on the half-width of a truncated triangle kernel spectrum. The cutoff
/// grows like 8N²/(π²·tail_budget), so desk-scale parameters stay far below
/// this; anything above it would not be materializable as a sparse spectrum.
const TRIANGLE_CUTOFF_CAP: usize = 1 << 22;

/// Errors from the construction layer.
#[derive(Debug)]
pub enum ConstructError {
    /// The triangle kernel would need more than [`TRIANGLE_CUTOFF_CAP`]
    /// coefficients per side to meet the tail budget.
    TriangleCutoff { cap: usize },
    /// No sign vector within the trial budget met the target ratio; the best
    /// trial is carried along.
    SignSearchExhausted { budget: u32, best: SignSearchOutcome },
    /// Quadrature failure.
    Norm(NormError),
    /// Set construction failure.
    Set(SetError),
    /// A block's concentration window leaves the target set.
    EkNotContained { k: u32 },
    /// A block's concentration window is too large for the gap exponent.
    EkTooLarge { k: u32, measure: f64, bound: f64 },
    /// The default gap exponent formula needs q < p.
    AlphaUnderivable { p: f64, q: f64 },
    /// Requested parameters exceed desk scale for the chosen builder.
    Scale { detail: String },
}

impl std::fmt::Display for ConstructError {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstructError::TriangleCutoff { cap } => {
                write!(out, "triangle kernel cutoff exceeds the cap of {cap} coefficients")
            }
            ConstructError::SignSearchExhausted { budget, best } => write!(
                out,
                "sign search exhausted {budget} trials; best ratio {:.6e}",
                best.ratio
            ),
            ConstructError::Norm(e) => write!(out, "{e}"),
            ConstructError::Set(e) => write!(out, "{e}"),
            ConstructError::EkNotContained { k } => {
                write!(out, "concentration window of block {k} leaves the target set")
            }
            ConstructError::EkTooLarge { k, measure, bound } => write!(
                out,
                "concentration window of block {k} has measure {measure:.3e} ≥ 2^-αk = {bound:.3e}"
            ),
            ConstructError::AlphaUnderivable { p, q } => write!(
                out,
                "no finite gap exponent satisfies α(1 - q/p) ≥ q + 1 for p={p}, q={q}; pass α explicitly"
            ),
            ConstructError::Scale { detail } => write!(out, "beyond desk scale: {detail}"),
        }
    }
}

impl std::error::Error for ConstructError {}

impl From<NormError> for ConstructError {
    fn from(e: NormError) -> Self {
        ConstructError::Norm(e)
    }
}

impl From<SetError> for ConstructError {
    fn from(e: SetError) -> Self {
        ConstructError::Set(e)
    }
}

/// The Dirichlet comb: D_n filtered to frequencies divisible by k, i.e. the
/// idempotent with spectrum {0, k, 2k, …} ∩ [0, n).
///
/// Panics unless n ≥ k ≥ 1.
pub fn shapiro_counterexample(n: u64, k: i64) -> TrigPoly {
    assert!(k >= 1, "comb modulus must be >= 1");
    assert!(n >= k as u64, "comb needs n >= k");
    filter_multiples(&dirichlet(n), k)
}

/// Truncated triangle kernel of base half-height h = 1/(2N): coefficients
/// Δ̂(0) = h and Δ̂(m) = (1/h)(sin(πmh)/(πm))², truncated at the smallest
/// cutoff whose dropped coefficient tail is at most tail_budget·h.
///
/// The full coefficient sum is exactly Δ(0) = 1, so the minimal cutoff is
/// found by accumulating the retained sum until 1 − retained ≤ tail_budget·h.
///
/// Panics unless N ≥ 1 and 0 < tail_budget < 1; fails when the required
/// cutoff exceeds the internal cap.
pub fn triangle_poly(big_n: u64, tail_budget: f64) -> Result<TrigPoly, ConstructError> {
    assert!(big_n >= 1, "triangle kernel needs N >= 1");
    assert!(
        tail_budget > 0.0 && tail_budget < 1.0,
        "tail budget must lie in (0, 1)"
    );
    let h = 1.0 / (2.0 * big_n as f64);
    let target = tail_budget * h;
    let mut retained = h;
    let mut entries: Vec<(i64, Complex64)> = vec![(0, Complex64::new(h, 0.0))];
    let mut m: i64 = 0;
    while 1.0 - retained > target {
        if m as usize >= TRIANGLE_CUTOFF_CAP {
            return Err(ConstructError::TriangleCutoff {
                cap: TRIANGLE_CUTOFF_CAP,
            });
        }
        m += 1;
        // sin(πmh) vanishes exactly at multiples of 2N; write the zero rather
        // than keep the ~1e-34 rounding residue the sine would produce.
        if m % (2 * big_n as i64) == 0 {
            continue;
        }
        let s = (std::f64::consts::PI * m as f64 * h).sin();
        let c = (s / (std::f64::consts::PI * m as f64)).powi(2) / h;
        retained += 2.0 * c;
        entries.push((m, Complex64::new(c, 0.0)));
        entries.push((-m, Complex64::new(c, 0.0)));
    }
    Ok(TrigPoly::from_entries(entries))
}

/// Outcome of a Khintchine sign search.
#[derive(Clone, Debug)]
pub struct SignSearchOutcome {
    /// The sign vector η_0, …, η_n (entries ±1).
    pub signs: Vec<i8>,
    /// Number of trials consumed (1-based; equals the index of the returned
    /// vector).
    pub trials: u32,
    /// Achieved ‖D_{n+1}‖_p / ‖Σ η_k e_k‖_q.
    pub ratio: f64,
    /// ‖D_{n+1}‖_p (quadrature).
    pub dirichlet_norm: f64,
    /// ‖Σ η_k e_k‖_q (quadrature).
    pub sign_poly_norm: f64,
}

/// Searches seeded random ±1 vectors η of length n+1 for one with
/// ‖D_{n+1}‖_p ≤ ε · ‖Σ_{k=0}^{n} η_k e_k‖_q.
///
/// Returns the first success; if the budget is exhausted the error carries
/// the best trial seen. Panics unless 0 < p < 2, q > 0, ε > 0, budget ≥ 1.
pub fn sign_search(
    n: u64,
    p: f64,
    q: f64,
    eps: f64,
    budget: u32,
    seed: u64,
    opts: &QuadratureOptions,
) -> Result<SignSearchOutcome, ConstructError> {
    assert!(p > 0.0 && p < 2.0, "sign search needs 0 < p < 2");
    assert!(q > 0.0, "sign search needs q > 0");
    assert!(eps > 0.0, "target ratio must be positive");
    assert!(budget >= 1, "trial budget must be >= 1");
    let kernel = dirichlet(n + 1);
    let num = lp_integral(&kernel, p, Domain::Torus, opts)?
        .value
        .powf(1.0 / p);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut best: Option<SignSearchOutcome> = None;
    for trial in 1..=budget {
        let signs: Vec<i8> = (0..=n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        let g = TrigPoly::from_entries(
            signs
                .iter()
                .enumerate()
                .map(|(k, &s)| (k as i64, Complex64::new(s as f64, 0.0))),
        );
        let den = lp_integral(&g, q, Domain::Torus, opts)?
            .value
            .powf(1.0 / q);
        let ratio = num / den;
        let outcome = SignSearchOutcome {
            signs,
            trials: trial,
            ratio,
            dirichlet_norm: num,
            sign_poly_norm: den,
        };
        if ratio <= eps {
            return Ok(outcome);
        }
        if best.as_ref().map_or(true, |b| ratio < b.ratio) {
            best = Some(outcome);
        }
    }
    Err(ConstructError::SignSearchExhausted {
        budget,
        best: best.expect("budget >= 1 guarantees at least one trial"),
    })
}

/// Shared bump assembly. Given the triangle kernel Δ, an upper spectrum
/// {(κ, σ_κ)} with |σ_κ| ≤ 1, a dilation 2N, and a center a, builds
///
///   f(t) = h(t − a) + h(t + a) + 2·Δ(t)·S(2Nt),
///
/// where h = Δ·(σ-weighted sum)(2N·) and S is the all-ones majorant over the
/// same κ's. By the translation rule the coefficient at ν = 2Nκ + m is
/// 2·Δ̂(m)·(1 + σ_κ·cos(2πaν)) ≥ 0, so the result is positive definite by
/// construction; it is assembled directly from that closed form so the ±a
/// pair never materializes separately (which would reintroduce cancelling
/// imaginary parts).
fn bump_assembly(
    delta: &TrigPoly,
    sigma: &[(i64, f64)],
    big_n: u64,
    a: f64,
) -> TrigPoly {
    let two_n = 2 * big_n as i64;
    let delta_terms: Vec<(i64, f64)> = delta.iter().map(|(&m, &c)| (m, c.re)).collect();
    let kappa_max = sigma.iter().map(|&(k, _)| k).max().unwrap_or(0);
    let m_max = delta.degree();
    let lo = -m_max;
    let hi = two_n * kappa_max + m_max;
    let len = (hi - lo + 1) as usize;
    let mut dense = vec![0.0f64; len];
    let tau = std::f64::consts::TAU;
    for &(kappa, sk) in sigma {
        let base = two_n * kappa;
        for &(m, dm) in &delta_terms {
            let nu = base + m;
            let coeff = 2.0 * dm * (1.0 + sk * (tau * a * nu as f64).cos());
            dense[(nu - lo) as usize] += coeff;
        }
    }
    TrigPoly::from_entries(
        dense
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, &c)| (lo + i as i64, Complex64::new(c, 0.0))),
    )
}

/// Low-exponent concentrator assembly with an explicit sign vector:
/// signs[κ] for κ = 0..=n weights the dilated sign polynomial, the all-ones
/// Dirichlet majorant fills the center bump.
///
/// Exposed separately so deterministic sign vectors can be tested against
/// independent oracles; [`lowp_concentrator`] feeds it the searched signs.
pub fn lowp_with_signs(
    n: u64,
    big_n: u64,
    a: f64,
    tail_budget: f64,
    signs: &[i8],
) -> Result<TrigPoly, ConstructError> {
    assert_eq!(signs.len() as u64, n + 1, "need n+1 signs");
    assert!(a > 0.0 && a < 0.5, "bump center must lie in (0, 1/2)");
    let delta = triangle_poly(big_n, tail_budget)?;
    let sigma: Vec<(i64, f64)> = signs
        .iter()
        .enumerate()
        .map(|(k, &s)| (k as i64, s as f64))
        .collect();
    Ok(bump_assembly(&delta, &sigma, big_n, a))
}

/// Parameters of the low-exponent strong-concentration assembly.
#[derive(Clone, Copy, Debug)]
pub struct LowpParams {
    /// Sign polynomial length parameter (n+1 terms).
    pub n: u64,
    /// Dilation scale: the window half-width is 1/(2N).
    pub big_n: u64,
    /// Bump center; the window is I = (a − 1/(2N), a + 1/(2N)).
    pub a: f64,
    pub p: f64,
    pub q: f64,
    /// Target ratio handed to the sign search.
    pub eps: f64,
    pub tail_budget: f64,
    /// Sign search trial budget.
    pub budget: u32,
    pub seed: u64,
}

/// A strong-concentration assembly together with its construction pedigree.
#[derive(Clone, Debug)]
pub struct Concentrator {
    pub poly: TrigPoly,
    /// Sign weights along the upper spectrum (lowp: η_0..η_n; highp: the
    /// Riesz coefficients over the sorted product spectrum).
    pub signs: Vec<i8>,
    /// The right-hand concentration window I = (a − 1/(2N), a + 1/(2N)).
    pub interval: (f64, f64),
    pub big_n: u64,
    pub a: f64,
    /// Sign-search trials consumed (0 when no search ran).
    pub sign_trials: u32,
    /// Best sign-search ratio (None when no search ran).
    pub sign_ratio: Option<f64>,
    /// False when the sign search exhausted its budget and the best trial
    /// was used instead.
    pub sign_search_converged: bool,
}

/// Builds the low-exponent concentrator: a Khintchine sign search followed by
/// the triangle-window bump assembly.
///
/// When the sign search exhausts its budget the best trial found is used and
/// `sign_search_converged` is false — the assembly is always produced, so the
/// caller can measure how far it falls short.
pub fn lowp_concentrator(
    params: &LowpParams,
    opts: &QuadratureOptions,
) -> Result<Concentrator, ConstructError> {
    assert!(
        params.q > 0.0 && params.q <= params.p && params.p < 2.0,
        "low-exponent assembly needs 0 < q <= p < 2"
    );
    let (outcome, converged) = match sign_search(
        params.n,
        params.p,
        params.q,
        params.eps,
        params.budget,
        params.seed,
        opts,
    ) {
        Ok(o) => (o, true),
        Err(ConstructError::SignSearchExhausted { best, .. }) => (best, false),
        Err(other) => return Err(other),
    };
    let poly = lowp_with_signs(
        params.n,
        params.big_n,
        params.a,
        params.tail_budget,
        &outcome.signs,
    )?;
    let half = 1.0 / (2.0 * params.big_n as f64);
    Ok(Concentrator {
        poly,
        signs: outcome.signs,
        interval: (params.a - half, params.a + half),
        big_n: params.big_n,
        a: params.a,
        sign_trials: outcome.trials,
        sign_ratio: Some(outcome.ratio),
        sign_search_converged: converged,
    })
}

/// The Mockenhaupt–Schlag pair at odd j:
/// g₀ = (1 + e_j)(1 − e_{j+1}) and its coefficientwise majorant
/// G₀ = (1 + e_j)(1 + e_{j+1}).
///
/// Panics unless j is odd (j ≥ 1).
pub fn ms_pair(j: u64) -> (TrigPoly, TrigPoly) {
    assert!(j >= 1 && j % 2 == 1, "majorant pair needs odd j >= 1");
    let one = Complex64::new(1.0, 0.0);
    let e0 = TrigPoly::from_entries([(0, one), (j as i64, one)]);
    let minus = TrigPoly::from_entries([(0, one), ((j + 1) as i64, -one)]);
    let plus = TrigPoly::from_entries([(0, one), ((j + 1) as i64, one)]);
    (multiply(&e0, &minus), multiply(&e0, &plus))
}

/// Riesz products over the Mockenhaupt–Schlag pair: `levels` successive
/// multiplications by the base pair dilated to fresh scales
/// N_i = growth·degree + 1, keeping all coefficient products multiplicative
/// (every coefficient is ±1) and the support exactly 4^(levels+1).
///
/// Panics unless j is odd and growth ≥ 1.
pub fn riesz_pair(j: u64, levels: u32, growth: u64) -> (TrigPoly, TrigPoly) {
    assert!(growth >= 1, "scale growth must be >= 1");
    let (base_g, base_cap) = ms_pair(j);
    let mut g = base_g.clone();
    let mut cap = base_cap.clone();
    for _ in 0..levels {
        let scale = (growth * cap.degree() as u64 + 1) as i64;
        g = multiply(&g, &dilate(&base_g, scale));
        cap = multiply(&cap, &dilate(&base_cap, scale));
    }
    debug_assert_eq!(g.support_size() as u128, 4u128.pow(levels + 1));
    debug_assert_eq!(cap.support_size() as u128, 4u128.pow(levels + 1));
    (g, cap)
}

/// Parameters of the high-exponent concentrator assembly.
#[derive(Clone, Copy, Debug)]
pub struct HighpParams {
    /// Odd base frequency of the majorant pair.
    pub j: u64,
    /// Riesz amplification levels (0 = bare pair).
    pub levels: u32,
    pub big_n: u64,
    pub a: f64,
    pub tail_budget: f64,
    /// Riesz scale growth factor.
    pub growth: u64,
}

/// Builds the high-exponent concentrator: the Riesz-amplified pair in the
/// same triangle-window bump assembly, with the majorant filling the center.
pub fn highp_concentrator(params: &HighpParams) -> Result<Concentrator, ConstructError> {
    assert!(params.a > 0.0 && params.a < 0.5, "bump center must lie in (0, 1/2)");
    let (g, _cap) = riesz_pair(params.j, params.levels, params.growth);
    let delta = triangle_poly(params.big_n, params.tail_budget)?;
    let sigma: Vec<(i64, f64)> = g.iter().map(|(&k, &c)| (k, c.re)).collect();
    let poly = bump_assembly(&delta, &sigma, params.big_n, params.a);
    let half = 1.0 / (2.0 * params.big_n as f64);
    Ok(Concentrator {
        poly,
        signs: sigma.iter().map(|&(_, s)| s as i8).collect(),
        interval: (params.a - half, params.a + half),
        big_n: params.big_n,
        a: params.a,
        sign_trials: 0,
        sign_ratio: None,
        sign_search_converged: true,
    })
}

/// Block family used by [`gap_series`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GapBuilder {
    /// One-sided Fejér–comb rings: block k is e((R−1)t)·F_R(t)·(1 + e(2N_k t))
    /// with N_k = 8·4^k and R = N_k/2 — a positive definite wave packet whose
    /// L^p mass concentrates on the annulus pair ±(0.3/N_k, 1.15/N_k).
    Ring,
    /// Dirichlet combs filtered to multiples of l (block k has length
    /// 256·2^k); their mass concentrates near the peak at 0 when the target
    /// set excludes every other rational peak.
    ShapiroComb { l: u64 },
    /// Low-exponent bump concentrators at per-block scales (desk-scale cap:
    /// at most 2 blocks).
    Lowp { tail_budget: f64 },
    /// High-exponent bump concentrators over the majorant pair at per-block
    /// scales (desk-scale cap: at most 2 blocks).
    Highp { j: u64, tail_budget: f64 },
}

/// One placed block of a gap series.
#[derive(Clone, Debug)]
pub struct GapBlock {
    /// Block index k = 1, 2, ….
    pub k: u32,
    /// The builder's scale parameter for this block (N_k or comb length).
    pub scale_param: u64,
    /// Modulation offset m_k of the block's one-sided spectrum.
    pub offset: i64,
    /// Degree of the (shifted, possibly dilated) block before modulation.
    pub degree: i64,
    /// Multiplicative normalization applied to reach the target norm.
    pub norm_scale: f64,
    /// Target L^p norm 2^(k/2).
    pub target_norm: f64,
    /// The block's concentration window pair E_k.
    pub e_k: SymmetricSet,
    /// The normalized block before modulation (one-sided).
    pub poly: TrigPoly,
}

/// A truncated gap series f = Σ_k e(m_k t)·f_k.
#[derive(Clone, Debug)]
pub struct GapSeries {
    /// The assembled polynomial.
    pub poly: TrigPoly,
    pub blocks: Vec<GapBlock>,
    /// The gap exponent in force (explicit or derived).
    pub alpha: u32,
    /// gaps[k−1] = m_k − (m_{k−1} + deg_{k−1}): the spectral gap opened at
    /// block k. The schedule m_k = m_{k−1} + deg_{k−1} + k + 1 makes this
    /// exactly k + 1.
    pub gaps: Vec<i64>,
    pub p: f64,
    pub q: f64,
}

/// Parameters of [`gap_series`].
#[derive(Clone, Debug)]
pub struct GapSeriesParams {
    pub blocks: u32,
    pub p: f64,
    pub q: f64,
    /// Gap exponent; None derives the smallest integer α ≥ 1 with
    /// α(1 − q/p) ≥ q + 1 (needs q < p).
    pub alpha: Option<u32>,
    pub builder: GapBuilder,
    pub seed: u64,
    /// When set, block k is additionally dilated by k + 1 before placement so
    /// that intra-block gaps also reach k + 1. Dilation replicates the
    /// block's mass around the torus, so localization (and with it the
    /// complement bound) is deliberately sacrificed; off by default.
    pub enforce_intra_gap: bool,
}

fn derive_alpha(p: f64, q: f64) -> Result<u32, ConstructError> {
    if !(q < p) {
        return Err(ConstructError::AlphaUnderivable { p, q });
    }
    let needed = (q + 1.0) / (1.0 - q / p);
    // Snap to the nearest integer when representation error leaves the
    // quotient a few ulps away from it (e.g. 3/(1 − 2/2.5) evaluates to
    // 15.000000000000002), so the ceiling matches the real-arithmetic value.
    let snapped = if (needed - needed.round()).abs() < 1e-9 * needed.abs().max(1.0) {
        needed.round()
    } else {
        needed.ceil()
    };
    Ok((snapped as u32).max(1))
}

struct BlockRecipe {
    raw: TrigPoly,
    e_k: SymmetricSet,
    scale_param: u64,
}

fn ring_block(k: u32) -> Result<BlockRecipe, ConstructError> {
    if k > 6 {
        return Err(ConstructError::Scale {
            detail: "ring blocks beyond k = 6 exceed the FFT quadrature ceiling".into(),
        });
    }
    let n_k: u64 = 8 * 4u64.pow(k);
    let r = (n_k / 2) as i64;
    let two_n = 2 * n_k as i64;
    let mut entries: Vec<(i64, Complex64)> = Vec::with_capacity(2 * (2 * r - 1) as usize);
    for s in 0..(2 * r - 1) {
        let w = ((r - (s - (r - 1)).abs()) as f64) / (r as f64);
        entries.push((s, Complex64::new(w, 0.0)));
        entries.push((two_n + s, Complex64::new(w, 0.0)));
    }
    let nf = n_k as f64;
    let e_k = make_set(&[
        (0.3 / nf, 1.15 / nf),
        (-1.15 / nf, -0.3 / nf),
    ])?;
    Ok(BlockRecipe {
        raw: TrigPoly::from_entries(entries),
        e_k,
        scale_param: n_k,
    })
}

fn shapiro_block(k: u32, l: u64) -> Result<BlockRecipe, ConstructError> {
    if k > 6 {
        return Err(ConstructError::Scale {
            detail: "comb blocks beyond k = 6 exceed the FFT quadrature ceiling".into(),
        });
    }
    let n_k = 256u64 << k;
    if n_k < l {
        return Err(ConstructError::Scale {
            detail: format!("comb length {n_k} is below the modulus {l}"),
        });
    }
    let raw = shapiro_counterexample(n_k, l as i64);
    let w = 0.01 * 0.25f64.powi(k as i32);
    let e_k = make_set(&[(w, 2.0 * w), (-2.0 * w, -w)])?;
    Ok(BlockRecipe {
        raw,
        e_k,
        scale_param: n_k,
    })
}

fn bump_block(
    k: u32,
    target: &SymmetricSet,
    alpha: u32,
    builder: &GapBuilder,
    rng: &mut ChaCha20Rng,
    blocks: u32,
) -> Result<BlockRecipe, ConstructError> {
    if blocks > 2 {
        return Err(ConstructError::Scale {
            detail: "bump builders support at most 2 blocks at desk scale".into(),
        });
    }
    // Place bump centers on the positive part of the rightmost interval of
    // the target (symmetry puts the mirror window in the leftmost part).
    let &(lo, hi) = target
        .intervals()
        .last()
        .expect("sets are nonempty");
    let lo = lo.max(0.0);
    debug_assert!(hi > lo, "rightmost interval of a symmetric set reaches past 0");
    let spacing = (hi - lo) / (blocks as f64 + 1.0);
    let a_k = lo + spacing * k as f64;
    // Window half-width 1/(2N): the window pair has measure 2/N, which must
    // beat the gap-exponent bound, and the half-width must stay below half
    // the center spacing so consecutive windows are disjoint and positive.
    let mut n_scale: u64 = 4;
    let bound = 0.5f64.powi((alpha * k) as i32);
    while 2.0 / (n_scale as f64) >= bound || 1.0 / (2.0 * n_scale as f64) >= spacing / 2.0 {
        n_scale *= 2;
        if n_scale > (1 << 12) {
            return Err(ConstructError::Scale {
                detail: "bump block window would need N beyond 2^12".into(),
            });
        }
    }
    let raw = match builder {
        GapBuilder::Lowp { tail_budget } => {
            let n_signs = 64u64 << k;
            let signs: Vec<i8> = (0..=n_signs)
                .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
                .collect();
            lowp_with_signs(n_signs, n_scale, a_k, *tail_budget, &signs)?
        }
        GapBuilder::Highp { j, tail_budget } => {
            let params = HighpParams {
                j: *j,
                levels: 0,
                big_n: n_scale,
                a: a_k,
                tail_budget: *tail_budget,
                growth: 3,
            };
            highp_concentrator(&params)?.poly
        }
        _ => unreachable!("bump_block is only called for bump builders"),
    };
    let half = 1.0 / (2.0 * n_scale as f64);
    let e_k = make_set(&[
        (a_k - half, a_k + half),
        (-(a_k + half), -(a_k - half)),
    ])?;
    Ok(BlockRecipe {
        raw,
        e_k,
        scale_param: n_scale,
    })
}

/// Builds the truncated gap series: per-block concentrators normalized to
/// L^p norm 2^(k/2), each shifted one-sided and modulated to the offset
/// schedule m_k = m_{k−1} + deg_{k−1} + k + 1, which opens a spectral gap of
/// exactly k + 1 at block k.
///
/// Each block's concentration window E_k must sit inside the target set and
/// have measure below 2^(−αk).
pub fn gap_series(
    target: &SymmetricSet,
    params: &GapSeriesParams,
    opts: &QuadratureOptions,
) -> Result<GapSeries, ConstructError> {
    assert!(params.blocks >= 1, "need at least one block");
    assert!(params.p > 0.0 && params.q > 0.0, "exponents must be positive");
    let alpha = match params.alpha {
        Some(a) => a.max(1),
        None => derive_alpha(params.p, params.q)?,
    };
    let mut rng = ChaCha20Rng::seed_from_u64(params.seed);
    let norm_opts = QuadratureOptions {
        oversample: 4,
        ..*opts
    };
    let mut blocks: Vec<GapBlock> = Vec::with_capacity(params.blocks as usize);
    let mut assembled: Vec<(i64, Complex64)> = Vec::new();
    let mut gaps: Vec<i64> = Vec::with_capacity(params.blocks as usize);
    let mut prev_offset: i64 = 0;
    let mut prev_degree: i64 = 0;
    for k in 1..=params.blocks {
        let recipe = match &params.builder {
            GapBuilder::Ring => ring_block(k)?,
            GapBuilder::ShapiroComb { l } => shapiro_block(k, *l)?,
            bump => bump_block(k, target, alpha, bump, &mut rng, params.blocks)?,
        };
        if !target.contains_set(&recipe.e_k) {
            return Err(ConstructError::EkNotContained { k });
        }
        let bound = 0.5f64.powi((alpha * k) as i32);
        let e_measure = recipe.e_k.measure();
        if e_measure >= bound {
            return Err(ConstructError::EkTooLarge {
                k,
                measure: e_measure,
                bound,
            });
        }
        // Shift one-sided (a pure modulation: |f| and coefficients unchanged).
        let shift = match recipe.raw.min_frequency() {
            Some(mn) if mn < 0 => -mn,
            _ => 0,
        };
        let one_sided = modulate(&recipe.raw, shift);
        let target_norm = 2f64.powf(k as f64 / 2.0);
        let raw_integral = lp_integral(&one_sided, params.p, Domain::Torus, &norm_opts)?;
        let raw_norm = raw_integral.value.powf(1.0 / params.p);
        let norm_scale = target_norm / raw_norm;
        let normalized = one_sided.scaled(Complex64::new(norm_scale, 0.0));
        let placed = if params.enforce_intra_gap {
            dilate(&normalized, (k + 1) as i64)
        } else {
            normalized
        };
        let degree = placed.max_frequency().unwrap_or(0);
        let offset = prev_offset + prev_degree + (k as i64) + 1;
        gaps.push(offset - (prev_offset + prev_degree));
        assembled.extend(placed.iter().map(|(&h, &c)| (h + offset, c)));
        blocks.push(GapBlock {
            k,
            scale_param: recipe.scale_param,
            offset,
            degree,
            norm_scale,
            target_norm,
            e_k: recipe.e_k,
            poly: placed,
        });
        prev_offset = offset;
        prev_degree = degree;
    }
    Ok(GapSeries {
        poly: TrigPoly::from_entries(assembled),
        blocks,
        alpha,
        gaps,
        p: params.p,
        q: params.q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{concentration_ratio, lp_integral_on_grid};
    use crate::poly::{classify, combine, evaluate_grid};
    use crate::sets::diophantine_set;
    use crate::tol::PD_TOLERANCE;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shapiro_comb_is_the_filtered_dirichlet_kernel() {
        let f = shapiro_counterexample(8, 4);
        let freqs: Vec<i64> = f.iter().map(|(&h, _)| h).collect();
        assert_eq!(freqs, vec![0, 4]);
        let g = shapiro_counterexample(4096, 5);
        assert_eq!(g.support_size(), 820);
        assert_eq!(g.min_gap(), 5);
        assert!(classify(&g, PD_TOLERANCE).is_idempotent);
    }

    #[test]
    #[should_panic(expected = "n >= k")]
    fn shapiro_comb_rejects_short_kernels() {
        shapiro_counterexample(3, 4);
    }

    #[test]
    fn triangle_kernel_frozen_shape() {
        // N=2, tail budget 0.1: cutoff 17, frozen against an independent
        // oracle. Coefficients at multiples of 2N vanish exactly.
        let t = triangle_poly(2, 0.1).unwrap();
        assert_eq!(t.degree(), 17);
        assert_eq!(t.support_size(), 27);
        assert_eq!(t.coeff(0), c(0.25, 0.0));
        assert!((t.coeff(1).re - 0.202_642_367_284_675_52).abs() < 1e-15);
        assert_eq!(t.coeff(1), t.coeff(-1));
        assert_eq!(t.coeff(4), c(0.0, 0.0));
        let retained = t.coeff_abs_sum();
        assert!((retained - 0.976_153_062_430_483_28).abs() < 1e-12);
        assert!(retained >= 1.0 - 0.1 && retained <= 1.0);
        assert!(classify(&t, PD_TOLERANCE).is_positive_definite);
    }

    #[test]
    fn triangle_kernel_cutoff_is_minimal() {
        // One side-coefficient less must violate the tail budget.
        let t = triangle_poly(2, 0.1).unwrap();
        let h = 0.25;
        let last = t.degree();
        let dropped_one_more = 1.0 - (t.coeff_abs_sum() - 2.0 * t.coeff(last).re);
        assert!(dropped_one_more > 0.1 * h);
    }

    #[test]
    fn sign_search_first_trial_succeeds_at_acceptance_parameters() {
        // ‖Σ η e‖₂ = √257 for every sign vector, so the ratio is identical
        // across trials; frozen against an independent oracle.
        let opts = QuadratureOptions::default();
        let out = sign_search(256, 1.0, 2.0, 0.5, 64, 0, &opts).unwrap();
        assert_eq!(out.trials, 1);
        assert_eq!(out.signs.len(), 257);
        assert!(out.signs.iter().all(|&s| s == 1 || s == -1));
        assert!(
            (out.ratio - 0.202_006_038_223_562_22).abs() < 1e-9,
            "ratio {}",
            out.ratio
        );
        assert!((out.sign_poly_norm - 257f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn sign_search_exhaustion_carries_best_trial() {
        let opts = QuadratureOptions::default();
        let err = sign_search(16, 1.0, 2.0, 1e-9, 3, 0, &opts).unwrap_err();
        match err {
            ConstructError::SignSearchExhausted { budget, best } => {
                assert_eq!(budget, 3);
                assert!(best.ratio > 1e-9);
                assert_eq!(best.signs.len(), 17);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn sign_search_is_seed_deterministic() {
        let opts = QuadratureOptions::default();
        let a = sign_search(32, 1.5, 1.2, 10.0, 4, 7, &opts).unwrap();
        let b = sign_search(32, 1.5, 1.2, 10.0, 4, 7, &opts).unwrap();
        assert_eq!(a.signs, b.signs);
        assert_eq!(a.ratio.to_bits(), b.ratio.to_bits());
    }

    #[test]
    fn lowp_assembly_matches_frozen_unit_oracle() {
        // η ≡ +1, n=4, N=10, a=0.35, tail budget 0.1 — frozen against an
        // independent FFT oracle on the same 16384-point grid.
        let signs = vec![1i8; 5];
        let f = lowp_with_signs(4, 10, 0.35, 0.1, &signs).unwrap();
        assert_eq!(f.degree(), 488);
        assert!(classify(&f, PD_TOLERANCE).is_positive_definite);
        let e = make_set(&[(0.3, 0.4), (-0.4, -0.3)]).unwrap();
        let comp = e.complement().unwrap();
        let opts = QuadratureOptions::default();
        let off = lp_integral(&f, 1.5, Domain::Set(&comp), &opts).unwrap();
        assert_eq!(off.grid_size, 16384);
        assert!(
            (off.value - 0.346_717_999_774_323_38).abs() < 1e-9,
            "{}",
            off.value
        );
        let tq = lp_integral(&f, 1.2, Domain::Torus, &opts).unwrap();
        assert!(
            (tq.value - 0.402_414_619_117_351_88).abs() < 1e-9,
            "{}",
            tq.value
        );
        let tp = lp_integral(&f, 1.5, Domain::Torus, &opts).unwrap();
        assert!(
            (tp.value - 0.591_880_958_500_542_23).abs() < 1e-9,
            "{}",
            tp.value
        );
    }

    #[test]
    fn lowp_closed_form_matches_operator_assembly() {
        // Rebuild h(t−a) + h(t+a) + 2Δ(t)·D(2Nt) from the primitive
        // operations (translation = coefficientwise phase) and compare.
        let n = 3u64;
        let big_n = 5u64;
        let a = 0.2;
        let signs = vec![1i8, -1, -1, 1];
        let f = lowp_with_signs(n, big_n, a, 0.3, &signs).unwrap();

        let delta = triangle_poly(big_n, 0.3).unwrap();
        let g = TrigPoly::from_entries(
            signs
                .iter()
                .enumerate()
                .map(|(k, &s)| (k as i64, c(s as f64, 0.0))),
        );
        let h = multiply(&delta, &dilate(&g, 2 * big_n as i64));
        let translate = |f: &TrigPoly, shift: f64| {
            TrigPoly::from_entries(f.iter().map(|(&nu, &co)| {
                let theta = -std::f64::consts::TAU * (nu as f64) * shift;
                (nu, co * c(theta.cos(), theta.sin()))
            }))
        };
        let center = multiply(&delta, &dilate(&dirichlet(n + 1), 2 * big_n as i64));
        let ops = combine(
            c(1.0, 0.0),
            &combine(c(1.0, 0.0), &translate(&h, a), c(1.0, 0.0), &translate(&h, -a)),
            c(2.0, 0.0),
            &center,
        );
        // Compare over the union of supports: where real arithmetic gives an
        // exact zero, one assembly may keep a few-ulp residue the other drops.
        let union: std::collections::BTreeSet<i64> = f
            .iter()
            .map(|(&nu, _)| nu)
            .chain(ops.iter().map(|(&nu, _)| nu))
            .collect();
        for nu in union {
            assert!(
                (f.coeff(nu) - ops.coeff(nu)).norm() < 1e-12,
                "mismatch at {nu}: {} vs {}",
                f.coeff(nu),
                ops.coeff(nu)
            );
        }
    }

    #[test]
    fn lowp_concentrator_proceeds_best_effort_when_search_fails() {
        let params = LowpParams {
            n: 32,
            big_n: 10,
            a: 0.35,
            p: 1.5,
            q: 1.2,
            eps: 1e-9,
            tail_budget: 0.1,
            budget: 2,
            seed: 0,
        };
        let out = lowp_concentrator(&params, &QuadratureOptions::default()).unwrap();
        assert!(!out.sign_search_converged);
        assert_eq!(out.sign_trials, 1);
        assert!(out.sign_ratio.unwrap() > 1e-9);
        assert!(classify(&out.poly, PD_TOLERANCE).is_positive_definite);
        assert!((out.interval.0 - 0.3).abs() < 1e-15);
        assert!((out.interval.1 - 0.4).abs() < 1e-15);
    }

    #[test]
    fn ms_pair_shape_and_strict_majorant_inequality() {
        let (g0, cap0) = ms_pair(3);
        assert_eq!(g0.coeff(0), c(1.0, 0.0));
        assert_eq!(g0.coeff(3), c(1.0, 0.0));
        assert_eq!(g0.coeff(4), c(-1.0, 0.0));
        assert_eq!(g0.coeff(7), c(-1.0, 0.0));
        for (&h, &a) in cap0.iter() {
            assert_eq!(a, c(1.0, 0.0), "majorant coefficient at {h}");
            assert_eq!(g0.coeff(h).norm(), 1.0);
        }
        // The majorant has the *smaller* cube integral; certified with a
        // margin in the acceptance gate, confirmed here on a fine grid.
        let m = 1 << 20;
        let ig = lp_integral_on_grid(&g0, 3.0, Domain::Torus, m).unwrap();
        let icap = lp_integral_on_grid(&cap0, 3.0, Domain::Torus, m).unwrap();
        assert!(
            icap.value < ig.value,
            "majorant {} vs {}",
            icap.value,
            ig.value
        );
    }

    #[test]
    #[should_panic(expected = "odd j")]
    fn ms_pair_rejects_even_j() {
        ms_pair(4);
    }

    #[test]
    fn riesz_pair_is_multiplicative_with_exact_support() {
        let (g, cap) = riesz_pair(3, 1, 3);
        assert_eq!(g.support_size(), 16);
        assert_eq!(cap.support_size(), 16);
        assert_eq!(g.degree(), 161); // 7 + (3·7+1)·7
        // Coefficients are exactly ±1 and the majorant dominates.
        for (&h, &a) in g.iter() {
            assert!(a.im == 0.0 && a.re.abs() == 1.0, "coefficient {a} at {h}");
            assert_eq!(cap.coeff(h), c(1.0, 0.0));
        }
        // Multiplicativity: each frequency splits uniquely as κ₀ + 22·κ₁ with
        // κ₀, κ₁ in the base support, and the sign is the product.
        let (base, _) = ms_pair(3);
        for (&h, &a) in g.iter() {
            let k1 = base
                .iter()
                .map(|(&b, _)| b)
                .find(|&b| base.coeff(h - 22 * b).norm() > 0.0)
                .expect("decomposable");
            let k0 = h - 22 * k1;
            let want = base.coeff(k0) * base.coeff(k1);
            assert_eq!(a, want, "at {h} = {k0} + 22·{k1}");
        }
        let (g2, cap2) = riesz_pair(3, 2, 3);
        assert_eq!(g2.support_size(), 64);
        assert_eq!(cap2.support_size(), 64);
    }

    #[test]
    fn highp_concentrator_is_positive_definite() {
        let params = HighpParams {
            j: 3,
            levels: 0,
            big_n: 8,
            a: 0.35,
            tail_budget: 0.05,
            growth: 3,
        };
        let out = highp_concentrator(&params).unwrap();
        assert!(classify(&out.poly, PD_TOLERANCE).is_positive_definite);
        assert_eq!(out.interval, (0.35 - 1.0 / 16.0, 0.35 + 1.0 / 16.0));
        assert!(out.sign_ratio.is_none());
    }

    #[test]
    fn derived_alpha_matches_formula() {
        assert_eq!(derive_alpha(2.5, 2.0).unwrap(), 15);
        assert_eq!(derive_alpha(3.0, 1.0).unwrap(), 3);
        assert!(matches!(
            derive_alpha(2.0, 2.0),
            Err(ConstructError::AlphaUnderivable { .. })
        ));
    }

    #[test]
    fn ring_gap_series_frozen_schedule_and_norms() {
        let target = make_set(&[(-0.3, 0.3)]).unwrap();
        let params = GapSeriesParams {
            blocks: 6,
            p: 2.5,
            q: 2.0,
            alpha: Some(2),
            builder: GapBuilder::Ring,
            seed: 0,
            enforce_intra_gap: false,
        };
        let gs = gap_series(&target, &params, &QuadratureOptions::default()).unwrap();
        let offsets: Vec<i64> = gs.blocks.iter().map(|b| b.offset).collect();
        assert_eq!(offsets, vec![2, 99, 485, 2024, 8172, 32753]);
        let degrees: Vec<i64> = gs.blocks.iter().map(|b| b.degree).collect();
        assert_eq!(degrees, vec![94, 382, 1534, 6142, 24574, 98302]);
        assert_eq!(gs.gaps, vec![2, 3, 4, 5, 6, 7]);
        assert_eq!(gs.poly.degree(), 131055);
        assert_eq!(gs.poly.support_size(), 87348);
        assert!(classify(&gs.poly, PD_TOLERANCE).is_positive_definite);
        // Normalization scales frozen against an independent oracle.
        let want_scales = [
            0.224_558_118_923_886_39,
            0.138_324_354_497_066_95,
            0.085_152_178_823_680_855,
            0.052_417_451_184_004_316,
            0.032_266_731_347_351_245,
            0.019_862_503_219_729_415,
        ];
        for (b, want) in gs.blocks.iter().zip(want_scales) {
            assert!(
                ((b.norm_scale - want) / want).abs() < 1e-9,
                "block {}: scale {} vs {want}",
                b.k,
                b.norm_scale
            );
            // The normalized block hits its target norm on its own grid.
            let opts = QuadratureOptions::with_oversample(4);
            let i = lp_integral(&b.poly, 2.5, Domain::Torus, &opts).unwrap();
            let norm = i.value.powf(1.0 / 2.5);
            assert!(
                (norm - b.target_norm).abs() < 1e-10,
                "block {} norm {} vs {}",
                b.k,
                norm,
                b.target_norm
            );
        }
        // Every window pair sits inside the target with the α-mandated decay.
        for b in &gs.blocks {
            assert!(target.contains_set(&b.e_k));
            assert!(b.e_k.measure() < 0.5f64.powi(2 * b.k as i32));
        }
    }

    #[test]
    fn ring_gap_series_rejects_too_many_blocks() {
        let target = make_set(&[(-0.3, 0.3)]).unwrap();
        let params = GapSeriesParams {
            blocks: 7,
            p: 2.5,
            q: 2.0,
            alpha: Some(2),
            builder: GapBuilder::Ring,
            seed: 0,
            enforce_intra_gap: false,
        };
        assert!(matches!(
            gap_series(&target, &params, &QuadratureOptions::default()),
            Err(ConstructError::Scale { .. })
        ));
    }

    #[test]
    fn comb_gap_series_concentrates_near_one_over_l() {
        let target = diophantine_set(4, 32, 3.0);
        let params = GapSeriesParams {
            blocks: 2,
            p: 2.0,
            q: 1.5,
            alpha: Some(2),
            builder: GapBuilder::ShapiroComb { l: 5 },
            seed: 0,
            enforce_intra_gap: false,
        };
        let gs = gap_series(&target, &params, &QuadratureOptions::default()).unwrap();
        assert_eq!(gs.gaps, vec![2, 3]);
        for b in &gs.blocks {
            let r = concentration_ratio(&b.poly, 2.0, &target, &QuadratureOptions::default())
                .unwrap();
            assert!(
                (r.ratio - 0.2).abs() < 0.03,
                "block {}: ratio {}",
                b.k,
                r.ratio
            );
        }
    }

    #[test]
    fn intra_gap_enforcement_dilates_blocks() {
        let target = make_set(&[(-0.3, 0.3)]).unwrap();
        let params = GapSeriesParams {
            blocks: 2,
            p: 2.5,
            q: 2.0,
            alpha: Some(2),
            builder: GapBuilder::Ring,
            seed: 0,
            enforce_intra_gap: true,
        };
        let gs = gap_series(&target, &params, &QuadratureOptions::default()).unwrap();
        for b in &gs.blocks {
            assert!(b.poly.min_gap() >= (b.k as i64) + 1, "block {}", b.k);
        }
    }

    #[test]
    fn grid_evaluation_of_assembled_series_stays_finite() {
        // Smoke: the assembled K=2 series synthesizes without surprises.
        let target = make_set(&[(-0.3, 0.3)]).unwrap();
        let params = GapSeriesParams {
            blocks: 2,
            p: 2.5,
            q: 2.0,
            alpha: Some(2),
            builder: GapBuilder::Ring,
            seed: 0,
            enforce_intra_gap: false,
        };
        let gs = gap_series(&target, &params, &QuadratureOptions::default()).unwrap();
        let m = crate::norms::grid_size_for(gs.poly.degree(), 4);
        let v = evaluate_grid(&gs.poly, m);
        assert!(v.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        let peak = v.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        assert!(peak > 0.0);
    }

    #[test]
    fn lowp_gap_builder_respects_desk_cap() {
        let target = make_set(&[(-0.3, 0.3)]).unwrap();
        let mut params = GapSeriesParams {
            blocks: 3,
            p: 1.5,
            q: 1.2,
            alpha: Some(1),
            builder: GapBuilder::Lowp { tail_budget: 0.1 },
            seed: 0,
            enforce_intra_gap: false,
        };
        assert!(matches!(
            gap_series(&target, &params, &QuadratureOptions::default()),
            Err(ConstructError::Scale { .. })
        ));
        params.blocks = 2;
        let gs = gap_series(&target, &params, &QuadratureOptions::default()).unwrap();
        assert_eq!(gs.blocks.len(), 2);
        assert_eq!(gs.gaps, vec![2, 3]);
        for b in &gs.blocks {
            assert!(target.contains_set(&b.e_k));
            assert!(classify(&b.poly, PD_TOLERANCE).is_positive_definite);
        }
    }
}
