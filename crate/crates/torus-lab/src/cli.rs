//! Command-line front end: flag parsing, dispatch, report emission, exit
//! codes.
//!
//! Exit codes: 0 — the run completed and every verdict passed; 1 — the run
//! completed but at least one verdict failed; 2 — usage error (unknown
//! flag/subcommand, unparsable or out-of-range parameter); 3 — runtime
//! failure (I/O, quadrature cap, construction dead-end, output verification).

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde_json::json;

use torus_spectral::construct::{
    gap_series, lowp_concentrator, ms_pair, riesz_pair, shapiro_counterexample, GapBuilder,
    GapSeriesParams, LowpParams,
};
use torus_spectral::norms::{lp_integral, Domain, QuadratureOptions};
use torus_spectral::poly::{classify, write_poly, TrigPoly};
use torus_spectral::sets::parse_set;
use torus_spectral::tol::PD_TOLERANCE;

use crate::experiments::{
    demo_strong_concentration, demo_wiener_failure, verify_shapiro, ConcParams, ExperimentError,
    ShapiroParams, WienerParams,
};
use crate::report::{to_sci_json, Report};

const USAGE: &str = "torus-lab — desk-scale spectral experiments on the torus

USAGE: torus-lab <subcommand> [flags]

GLOBAL FLAGS
  --seed <u64>        RNG seed (default 0)
  --oversample <u32>  quadrature oversampling factor (default 16)
  --threads <n>       accepted for compatibility; results never depend on it
  --csv <path>        also write `label,value` rows for the run's quantities

SUBCOMMANDS
  verify-shapiro  [--p 2] [--a 0.25] [--corpus 500] [--degree-cap 64]
                  [--sharpness-k 4]
  demo-conc       --mode lowp  [--n 16384] [--N 10] [--a 0.35] [--p 1.5]
                               [--q 1.2] [--eps 0.1] [--tail-budget 0.05]
                               [--budget 64]
                  --mode highp [--j 3] [--K 2] [--N 8] [--a 0.35] [--p 3]
                               [--q 3] [--eps 1] [--tail-budget 0.05]
                               [--margin-grid-pow 20]
  demo-wiener     [--p 2.5] [--q 2] [--set \"-0.3,0.3\"] [--K 6]
                  [--alpha 2|auto] [--builder ring|comb|lowp|highp]
                  [--l 5] [--j 3] [--tail-budget 0.1] [--enforce-intra-gap]
  construct       shapiro   --n <u64> --k <i64>            [--out shapiro.poly]
                  lowp      --n --N --a --p --q --eps
                            [--tail-budget 0.05] [--budget 64] [--out lowp.poly]
                  ms        --j <odd>                      [--out ms.poly]
                  riesz     --j <odd> --K <levels> [--growth 3] [--out riesz.poly]
                  gapseries --set <syntax> --K <blocks> --p --q
                            [--alpha 2|auto] [--builder ring|comb|lowp|highp]
                            [--l 5] [--j 3] [--tail-budget 0.1]
                            [--enforce-intra-gap] [--out gapseries.poly]
  norm            --poly <path> --p <real> [--set <syntax>]

Set syntax: `lo,hi` pairs joined by `;` (e.g. \"0.3,0.4;-0.4,-0.3\").
Experiments print one JSON report to stdout; `construct` writes the
polynomial file plus a `<out>.json` sidecar (ms/riesz also `<out>.majorant`).";

/// Entry point: parses `args` (without the program name), runs the
/// subcommand, and returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    match dispatch(args) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `torus-lab help` for usage");
            2
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            3
        }
    }
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::InvalidParameter(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn usage_err(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn runtime_err(msg: impl Into<String>) -> CliError {
    CliError::Runtime(msg.into())
}

/// Flags that never take a value.
const BOOLEAN_FLAGS: &[&str] = &["enforce-intra-gap", "help"];

struct Flags(BTreeMap<String, String>);

/// Splits the arguments into positionals and `--flag value` / `--flag=value`
/// pairs; flags may appear anywhere. Repeated flags keep the last value.
fn lex(args: &[String]) -> Result<(Vec<String>, Flags), CliError> {
    let mut positionals = Vec::new();
    let mut flags = BTreeMap::new();
    let mut i = 0;
    while i < args.len() {
        let tok = &args[i];
        if let Some(rest) = tok.strip_prefix("--") {
            if rest.is_empty() {
                return Err(usage_err("bare `--` is not a flag"));
            }
            if let Some((k, v)) = rest.split_once('=') {
                flags.insert(k.to_string(), v.to_string());
            } else if BOOLEAN_FLAGS.contains(&rest) {
                flags.insert(rest.to_string(), "true".to_string());
            } else {
                i += 1;
                if i >= args.len() {
                    return Err(usage_err(format!("flag --{rest} expects a value")));
                }
                flags.insert(rest.to_string(), args[i].clone());
            }
        } else {
            positionals.push(tok.clone());
        }
        i += 1;
    }
    Ok((positionals, Flags(flags)))
}

impl Flags {
    fn take_raw(&mut self, name: &str) -> Option<String> {
        self.0.remove(name)
    }

    /// Parses `--name` if present, else returns the default.
    fn take<T: FromStr>(&mut self, name: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.0.remove(name) {
            None => Ok(default),
            Some(text) => text
                .parse()
                .map_err(|e| usage_err(format!("--{name} {text}: {e}"))),
        }
    }

    /// Parses `--name`, requiring its presence.
    fn require<T: FromStr>(&mut self, name: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.0.remove(name) {
            None => Err(usage_err(format!("missing required flag --{name}"))),
            Some(text) => text
                .parse()
                .map_err(|e| usage_err(format!("--{name} {text}: {e}"))),
        }
    }

    fn take_bool(&mut self, name: &str) -> bool {
        self.0.remove(name).is_some()
    }

    /// Errors on any flag nothing consumed — catches typos.
    fn finish(&mut self) -> Result<(), CliError> {
        if let Some(name) = self.0.keys().next() {
            return Err(usage_err(format!("unknown flag --{name}")));
        }
        Ok(())
    }
}

struct Globals {
    seed: u64,
    opts: QuadratureOptions,
    csv: Option<String>,
}

fn take_globals(flags: &mut Flags) -> Result<Globals, CliError> {
    let seed: u64 = flags.take("seed", 0)?;
    let oversample: u32 = flags.take("oversample", 16)?;
    if !(1..=1024).contains(&oversample) {
        return Err(usage_err("--oversample must lie in 1..=1024"));
    }
    if let Some(text) = flags.take_raw("threads") {
        let threads: usize = text
            .parse()
            .map_err(|e| usage_err(format!("--threads {text}: {e}")))?;
        if threads == 0 {
            return Err(usage_err("--threads must be at least 1"));
        }
        // Accepted for interface stability; execution is single-threaded and
        // results never depend on it.
    }
    let csv = flags.take_raw("csv");
    Ok(Globals {
        seed,
        opts: QuadratureOptions::with_oversample(oversample),
        csv,
    })
}

fn dispatch(args: &[String]) -> Result<i32, CliError> {
    let (positionals, mut flags) = lex(args)?;
    if flags.take_bool("help") {
        println!("{USAGE}");
        return Ok(0);
    }
    let Some(sub) = positionals.first() else {
        return Err(usage_err("missing subcommand"));
    };
    if sub == "help" {
        println!("{USAGE}");
        return Ok(0);
    }
    let globals = take_globals(&mut flags)?;
    let extra_positionals_limit = if sub == "construct" { 2 } else { 1 };
    if positionals.len() > extra_positionals_limit {
        return Err(usage_err(format!(
            "unexpected argument `{}`",
            positionals[extra_positionals_limit]
        )));
    }
    match sub.as_str() {
        "verify-shapiro" => {
            let defaults = ShapiroParams::default();
            let params = ShapiroParams {
                p: flags.take("p", defaults.p)?,
                a: flags.take("a", defaults.a)?,
                corpus: flags.take("corpus", defaults.corpus)?,
                degree_cap: flags.take("degree-cap", defaults.degree_cap)?,
                sharpness_k: flags.take("sharpness-k", defaults.sharpness_k)?,
            };
            flags.finish()?;
            let report = verify_shapiro(&params, globals.seed, &globals.opts)?;
            emit(&report, globals.csv.as_deref())
        }
        "demo-conc" => {
            let mode_text: String = flags.take("mode", "lowp".to_string())?;
            let defaults = match mode_text.as_str() {
                "lowp" => ConcParams::lowp_defaults(),
                "highp" => ConcParams::highp_defaults(),
                other => return Err(usage_err(format!("--mode must be lowp or highp, got `{other}`"))),
            };
            let params = ConcParams {
                mode: defaults.mode,
                n: flags.take("n", defaults.n)?,
                budget: flags.take("budget", defaults.budget)?,
                j: flags.take("j", defaults.j)?,
                levels: flags.take("K", defaults.levels)?,
                margin_grid_pow: flags.take("margin-grid-pow", defaults.margin_grid_pow)?,
                big_n: flags.take("N", defaults.big_n)?,
                a: flags.take("a", defaults.a)?,
                p: flags.take("p", defaults.p)?,
                q: flags.take("q", defaults.q)?,
                eps: flags.take("eps", defaults.eps)?,
                tail_budget: flags.take("tail-budget", defaults.tail_budget)?,
            };
            flags.finish()?;
            let report = demo_strong_concentration(&params, globals.seed, &globals.opts)?;
            emit(&report, globals.csv.as_deref())
        }
        "demo-wiener" => {
            let set_text: String = flags.take("set", "-0.3,0.3".to_string())?;
            let target = parse_set(&set_text)
                .map_err(|e| usage_err(format!("--set {set_text}: {e}")))?;
            let builder = take_builder(&mut flags, 0.1)?;
            let params = WienerParams {
                p: flags.take("p", 2.5)?,
                q: flags.take("q", 2.0)?,
                target,
                blocks: flags.take("K", 6)?,
                alpha: take_alpha(&mut flags, "2")?,
                builder,
                enforce_intra_gap: flags.take_bool("enforce-intra-gap"),
            };
            flags.finish()?;
            let report = demo_wiener_failure(&params, globals.seed, &globals.opts)?;
            emit(&report, globals.csv.as_deref())
        }
        "construct" => {
            let Some(family) = positionals.get(1) else {
                return Err(usage_err(
                    "construct needs a family: shapiro, lowp, ms, riesz, or gapseries",
                ));
            };
            construct_cmd(family, &mut flags, &globals)
        }
        "norm" => {
            let path: String = flags.require("poly")?;
            let p: f64 = flags.require("p")?;
            if !(p > 0.0) {
                return Err(usage_err("--p must be positive"));
            }
            let set = match flags.take_raw("set") {
                None => None,
                Some(text) => Some(
                    parse_set(&text).map_err(|e| usage_err(format!("--set {text}: {e}")))?,
                ),
            };
            flags.finish()?;
            let f = torus_spectral::poly::read_poly(Path::new(&path))
                .map_err(|e| runtime_err(format!("reading {path}: {e}")))?;
            let domain = match &set {
                Some(s) => Domain::Set(s),
                None => Domain::Torus,
            };
            let result = lp_integral(&f, p, domain, &globals.opts)
                .map_err(|e| runtime_err(e.to_string()))?;
            println!(
                "{}",
                to_sci_json(&json!({
                    "value": result.value,
                    "error_bound": result.error_bound,
                    "grid_size": result.grid_size,
                    "p": result.p,
                }))
            );
            if let Some(csv_path) = globals.csv.as_deref() {
                let rows = format!(
                    "label,value\nintegral,{:.16e}\nerror_bound,{:.16e}\n",
                    result.value, result.error_bound
                );
                std::fs::write(csv_path, rows)
                    .map_err(|e| runtime_err(format!("writing {csv_path}: {e}")))?;
            }
            Ok(0)
        }
        other => Err(usage_err(format!("unknown subcommand `{other}`"))),
    }
}

/// Reads --builder plus its family-specific flags (--l, --j, --tail-budget).
fn take_builder(flags: &mut Flags, default_tail: f64) -> Result<GapBuilder, CliError> {
    let name: String = flags.take("builder", "ring".to_string())?;
    match name.as_str() {
        "ring" => Ok(GapBuilder::Ring),
        "comb" => Ok(GapBuilder::ShapiroComb {
            l: flags.take("l", 5)?,
        }),
        "lowp" => Ok(GapBuilder::Lowp {
            tail_budget: flags.take("tail-budget", default_tail)?,
        }),
        "highp" => Ok(GapBuilder::Highp {
            j: flags.take("j", 3)?,
            tail_budget: flags.take("tail-budget", default_tail)?,
        }),
        other => Err(usage_err(format!(
            "--builder must be ring, comb, lowp, or highp, got `{other}`"
        ))),
    }
}

/// Reads --alpha: a positive integer or the literal `auto`.
fn take_alpha(flags: &mut Flags, default: &str) -> Result<Option<u32>, CliError> {
    let text: String = flags.take("alpha", default.to_string())?;
    if text == "auto" {
        return Ok(None);
    }
    let value: u32 = text
        .parse()
        .map_err(|e| usage_err(format!("--alpha {text}: {e}")))?;
    if value == 0 {
        return Err(usage_err("--alpha must be at least 1 (or `auto`)"));
    }
    Ok(Some(value))
}

fn emit(report: &Report, csv: Option<&str>) -> Result<i32, CliError> {
    println!("{}", report.to_json());
    if let Some(path) = csv {
        std::fs::write(path, report.to_csv())
            .map_err(|e| runtime_err(format!("writing {path}: {e}")))?;
    }
    Ok(if report.all_pass() { 0 } else { 1 })
}

/// Writes `f` to `path`, with I/O errors mapped to exit 3.
fn write_poly_file(f: &TrigPoly, path: &str) -> Result<(), CliError> {
    write_poly(f, Path::new(path)).map_err(|e| runtime_err(format!("writing {path}: {e}")))
}

fn write_sidecar(out: &str, sidecar: &serde_json::Value) -> Result<(), CliError> {
    let path = format!("{out}.json");
    let text = to_sci_json(sidecar);
    std::fs::write(&path, &text).map_err(|e| runtime_err(format!("writing {path}: {e}")))?;
    println!("{text}");
    Ok(())
}

fn spectrum_summary(f: &TrigPoly) -> serde_json::Value {
    let report = classify(f, PD_TOLERANCE);
    json!({
        "is_positive_definite": report.is_positive_definite,
        "is_idempotent": report.is_idempotent,
        "degree": report.degree,
        "support_size": report.support_size,
        "min_gap": report.min_gap,
    })
}

/// Coefficientwise |ĝ(h)| ≤ Ĝ(h) + tolerance over the union of supports.
fn dominates(cap: &TrigPoly, g: &TrigPoly, tol: f64) -> bool {
    let mut freqs: Vec<i64> = g.iter().map(|(&h, _)| h).collect();
    freqs.extend(cap.iter().map(|(&h, _)| h));
    freqs.sort_unstable();
    freqs.dedup();
    freqs
        .into_iter()
        .all(|h| cap.coeff(h).re + tol >= g.coeff(h).norm())
}

fn construct_cmd(family: &str, flags: &mut Flags, globals: &Globals) -> Result<i32, CliError> {
    match family {
        "shapiro" => {
            let n: u64 = flags.require("n")?;
            let k: i64 = flags.require("k")?;
            let out: String = flags.take("out", "shapiro.poly".to_string())?;
            flags.finish()?;
            if k < 1 || n < k as u64 {
                return Err(usage_err("construct shapiro needs k >= 1 and n >= k"));
            }
            let f = shapiro_counterexample(n, k);
            let summary = spectrum_summary(&f);
            if !summary["is_idempotent"].as_bool().unwrap_or(false) {
                return Err(runtime_err("output failed the idempotency check"));
            }
            write_poly_file(&f, &out)?;
            write_sidecar(
                &out,
                &json!({
                    "family": "shapiro",
                    "output": out,
                    "parameters": { "n": n, "k": k },
                    "verification": summary,
                }),
            )?;
            Ok(0)
        }
        "lowp" => {
            let params = LowpParams {
                n: flags.require("n")?,
                big_n: flags.require("N")?,
                a: flags.require("a")?,
                p: flags.require("p")?,
                q: flags.require("q")?,
                eps: flags.require("eps")?,
                tail_budget: flags.take("tail-budget", 0.05)?,
                budget: flags.take("budget", 64)?,
                seed: globals.seed,
            };
            let out: String = flags.take("out", "lowp.poly".to_string())?;
            flags.finish()?;
            validate_lowp(&params)?;
            let conc =
                lowp_concentrator(&params, &globals.opts).map_err(|e| runtime_err(e.to_string()))?;
            let summary = spectrum_summary(&conc.poly);
            if !summary["is_positive_definite"].as_bool().unwrap_or(false) {
                return Err(runtime_err("output failed the positive-definiteness check"));
            }
            write_poly_file(&conc.poly, &out)?;
            write_sidecar(
                &out,
                &json!({
                    "family": "lowp",
                    "output": out,
                    "parameters": {
                        "n": params.n, "N": params.big_n, "a": params.a,
                        "p": params.p, "q": params.q, "eps": params.eps,
                        "tail_budget": params.tail_budget, "budget": params.budget,
                        "seed": params.seed,
                    },
                    "window": [conc.interval.0, conc.interval.1],
                    "sign_trials": conc.sign_trials,
                    "sign_ratio": conc.sign_ratio,
                    "sign_search_converged": conc.sign_search_converged,
                    "verification": summary,
                }),
            )?;
            Ok(0)
        }
        "ms" => {
            let j: u64 = flags.require("j")?;
            let out: String = flags.take("out", "ms.poly".to_string())?;
            flags.finish()?;
            if j % 2 == 0 || j == 0 {
                return Err(usage_err("construct ms needs an odd j >= 1"));
            }
            let (g, cap) = ms_pair(j);
            write_pair(&g, &cap, &out, &json!({ "family": "ms", "j": j }))
        }
        "riesz" => {
            let j: u64 = flags.require("j")?;
            let levels: u32 = flags.require("K")?;
            let growth: u64 = flags.take("growth", 3)?;
            let out: String = flags.take("out", "riesz.poly".to_string())?;
            flags.finish()?;
            if j % 2 == 0 || j == 0 {
                return Err(usage_err("construct riesz needs an odd j >= 1"));
            }
            if growth < 1 {
                return Err(usage_err("--growth must be at least 1"));
            }
            if levels > 9 {
                return Err(usage_err("--K beyond 9 is not desk scale (4^(K+1) coefficients)"));
            }
            let (g, cap) = riesz_pair(j, levels, growth);
            write_pair(
                &g,
                &cap,
                &out,
                &json!({ "family": "riesz", "j": j, "K": levels, "growth": growth }),
            )
        }
        "gapseries" => {
            let set_text: String = flags.require("set")?;
            let target = parse_set(&set_text)
                .map_err(|e| usage_err(format!("--set {set_text}: {e}")))?;
            let builder = take_builder(flags, 0.1)?;
            let params = GapSeriesParams {
                blocks: flags.require("K")?,
                p: flags.require("p")?,
                q: flags.require("q")?,
                alpha: take_alpha(flags, "auto")?,
                builder,
                seed: globals.seed,
                enforce_intra_gap: flags.take_bool("enforce-intra-gap"),
            };
            let out: String = flags.take("out", "gapseries.poly".to_string())?;
            flags.finish()?;
            if params.blocks == 0 {
                return Err(usage_err("--K must be at least 1"));
            }
            if !(params.p > 0.0 && params.q > 0.0) {
                return Err(usage_err("--p and --q must be positive"));
            }
            let gs = gap_series(&target, &params, &globals.opts)
                .map_err(|e| runtime_err(e.to_string()))?;
            let summary = spectrum_summary(&gs.poly);
            if !summary["is_positive_definite"].as_bool().unwrap_or(false) {
                return Err(runtime_err("output failed the positive-definiteness check"));
            }
            write_poly_file(&gs.poly, &out)?;
            let blocks: Vec<serde_json::Value> = gs
                .blocks
                .iter()
                .map(|b| {
                    json!({
                        "k": b.k,
                        "scale_param": b.scale_param,
                        "offset": b.offset,
                        "degree": b.degree,
                        "norm_scale": b.norm_scale,
                        "target_norm": b.target_norm,
                        "window": b.e_k.to_syntax(),
                    })
                })
                .collect();
            write_sidecar(
                &out,
                &json!({
                    "family": "gapseries",
                    "output": out,
                    "parameters": {
                        "set": set_text, "K": params.blocks, "p": params.p,
                        "q": params.q, "alpha_in_force": gs.alpha,
                        "enforce_intra_gap": params.enforce_intra_gap,
                        "seed": params.seed,
                    },
                    "blocks": blocks,
                    "gaps": gs.gaps,
                    "verification": summary,
                }),
            )?;
            Ok(0)
        }
        other => Err(usage_err(format!(
            "unknown construct family `{other}` (shapiro, lowp, ms, riesz, gapseries)"
        ))),
    }
}

fn validate_lowp(params: &LowpParams) -> Result<(), CliError> {
    if !(params.q > 0.0 && params.q <= params.p && params.p < 2.0) {
        return Err(usage_err("construct lowp needs 0 < q <= p < 2"));
    }
    if !(params.a > 0.0 && params.a < 0.5) {
        return Err(usage_err("--a must lie strictly between 0 and 1/2"));
    }
    let half = 1.0 / (2.0 * params.big_n.max(1) as f64);
    if params.big_n < 1 || params.a - half <= 0.0 || params.a + half >= 0.5 {
        return Err(usage_err(
            "the window (a - 1/2N, a + 1/2N) must sit strictly inside (0, 1/2)",
        ));
    }
    if !(params.eps > 0.0) {
        return Err(usage_err("--eps must be positive"));
    }
    if !(params.tail_budget > 0.0 && params.tail_budget < 1.0) {
        return Err(usage_err("--tail-budget must lie in (0, 1)"));
    }
    if params.n < 1 || params.budget < 1 {
        return Err(usage_err("--n and --budget must be at least 1"));
    }
    Ok(())
}

/// Writes a majorant pair: `out` gets the dominated polynomial,
/// `out.majorant` its coefficient majorant, one shared sidecar.
fn write_pair(
    g: &TrigPoly,
    cap: &TrigPoly,
    out: &str,
    meta: &serde_json::Value,
) -> Result<i32, CliError> {
    if !dominates(cap, g, PD_TOLERANCE) {
        return Err(runtime_err("majorant output failed the domination check"));
    }
    let cap_summary = spectrum_summary(cap);
    if !cap_summary["is_positive_definite"].as_bool().unwrap_or(false) {
        return Err(runtime_err("majorant output failed the positive-definiteness check"));
    }
    let majorant_path = format!("{out}.majorant");
    write_poly_file(g, out)?;
    write_poly_file(cap, &majorant_path)?;
    let mut sidecar = json!({
        "output": out,
        "majorant_output": majorant_path,
        "coefficientwise_domination": true,
        "verification": spectrum_summary(g),
        "majorant_verification": cap_summary,
    });
    if let (Some(obj), Some(meta_obj)) = (sidecar.as_object_mut(), meta.as_object()) {
        for (k, v) in meta_obj {
            obj.insert(k.clone(), v.clone());
        }
    }
    write_sidecar(out, &sidecar)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn lexer_handles_both_flag_forms_and_positionals() {
        let (pos, mut flags) =
            lex(&argv(&["demo-conc", "--mode", "lowp", "--eps=0.5", "--enforce-intra-gap"]))
                .map_err(|_| ())
                .unwrap();
        assert_eq!(pos, vec!["demo-conc".to_string()]);
        assert_eq!(flags.take_raw("mode").as_deref(), Some("lowp"));
        assert_eq!(flags.take_raw("eps").as_deref(), Some("0.5"));
        assert!(flags.take_bool("enforce-intra-gap"));
        assert!(flags.finish().is_ok());
    }

    #[test]
    fn unknown_flags_and_subcommands_are_usage_errors() {
        assert_eq!(run(&argv(&["verify-shapiro", "--bogus", "1"])), 2);
        assert_eq!(run(&argv(&["no-such-command"])), 2);
        assert_eq!(run(&argv(&["verify-shapiro", "--p"])), 2);
        assert_eq!(run(&argv(&["verify-shapiro", "--p", "3"])), 2);
        assert_eq!(run(&argv(&["demo-conc", "--mode", "sideways"])), 2);
        assert_eq!(run(&argv(&["construct", "shapiro", "--n", "16"])), 2);
        assert_eq!(run(&argv(&[])), 2);
    }

    #[test]
    fn help_exits_cleanly() {
        assert_eq!(run(&argv(&["help"])), 0);
        assert_eq!(run(&argv(&["demo-wiener", "--help"])), 0);
    }

    #[test]
    fn alpha_parses_auto_and_integers() {
        let (_, mut flags) = lex(&argv(&["--alpha", "auto"])).map_err(|_| ()).unwrap();
        assert_eq!(take_alpha(&mut flags, "2").map_err(|_| ()).unwrap(), None);
        let (_, mut flags) = lex(&argv(&["--alpha", "7"])).map_err(|_| ()).unwrap();
        assert_eq!(take_alpha(&mut flags, "2").map_err(|_| ()).unwrap(), Some(7));
        let (_, mut flags) = lex(&argv(&[])).map_err(|_| ()).unwrap();
        assert_eq!(take_alpha(&mut flags, "2").map_err(|_| ()).unwrap(), Some(2));
        let (_, mut flags) = lex(&argv(&["--alpha", "0"])).map_err(|_| ()).unwrap();
        assert!(take_alpha(&mut flags, "2").is_err());
    }
}
