use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use anyhow::{Context, Result};
use num_rational::Ratio;
use serde_json::json;

use super::*;
use crate::codes::{
    biased_to_code, code_to_biased, entropy_lower_bound, parse_ratio, read_bset, read_code, welch_entropy_check,
    write_bset, write_code, CodeFromBiased,
};
use crate::construct::{
    build_bernoulli_baseline, build_legendre_deterministic, build_legendre_seeded, plan_parameters, read_ripm,
    write_ripm, DesignParams, Overrides, Seed, SignMatrix,
};
use crate::ntheory::{next_prime_geq, BigNat, PrimeCert};
use crate::recovery::{omp_recover, phase_sweep, Ensemble, SparseSignal, VALUE_TOLERANCE};
use crate::report::{Record, Report, Severity};
use crate::verify::{
    bias_exact, bias_sampled, charsum_check, coherence, conjecture_scan, fro_constant, matching_coloring_count,
    provenance_check, rip_constant, PrimeSelection, RipMode, CHARSUM_SOFT_BELOW,
};

/// Largest matrix `gen` will materialize.
const MAX_ENTRIES: u64 = 1 << 28;

/// Malformed flag combinations that clap cannot express.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Primary output of a command besides its report.
struct Artifact {
    text: String,
    out: Option<std::path::PathBuf>,
}

pub(super) fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let config = serde_json::to_value(cli).context("serializing the resolved configuration")?;
    let mut report = Report::new(config);
    let artifact = match &cli.command {
        Command::Plan(a) => plan(a, &mut report)?,
        Command::Gen(a) => gen(a, &mut report)?,
        Command::Verify(a) => verify(a, &mut report)?,
        Command::Bias(a) => bias(a, &mut report)?,
        Command::Charsum(a) => charsum(a, &mut report)?,
        Command::ScanConjecture(a) => scan(a, &mut report)?,
        Command::CodeConvert(a) => code_convert(a, &mut report)?,
        Command::Recover(a) => recover(a, &mut report)?,
        Command::Sweep(a) => sweep(a, &mut report)?,
        Command::Matching(a) => matching(a, &mut report)?,
    };

    let mut artifact_on_stdout = false;
    if let Some(a) = artifact {
        match &a.out {
            Some(path) => write_file(path, &a.text)?,
            None => {
                stdout.write_all(a.text.as_bytes())?;
                artifact_on_stdout = true;
            }
        }
    }
    let rendered = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    match &cli.report {
        Some(path) => write_file(path, &rendered)?,
        None if artifact_on_stdout => stderr.write_all(rendered.as_bytes())?,
        None => stdout.write_all(rendered.as_bytes())?,
    }
    Ok(if report.has_hard_failure() { EXIT_FAILURE } else { EXIT_OK })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_matrix(path: &Path) -> Result<SignMatrix> {
    let text = read_file(path)?;
    read_ripm(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_prime(s: &str) -> Result<PrimeCert> {
    let p = BigNat::from_str(s).map_err(|_| usage(format!("--prime expects a decimal number or `auto`, got `{s}`")))?;
    Ok(PrimeCert::certify(&p)?)
}

fn parse_span(s: &str, flag: &str) -> Result<(u64, u64)> {
    let parsed = s
        .split_once(':')
        .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)));
    match parsed {
        Some((lo, hi)) if lo <= hi => Ok((lo, hi)),
        _ => Err(usage(format!("{flag} expects LO:HI with LO <= HI, got `{s}`"))),
    }
}

fn cert_json(cert: &PrimeCert) -> serde_json::Value {
    json!({"p": cert.p(), "method": cert.method().as_str(), "rounds": cert.rounds()})
}

fn plan(a: &PlanArgs, report: &mut Report) -> Result<Option<Artifact>> {
    let params = plan_parameters(
        a.n,
        a.k,
        a.delta,
        Overrides {
            m: a.m,
            h: a.h,
            c1: Some(a.c1),
        },
    )?;
    report.push(Record::new("plan", Severity::Info).params(json!({"n": a.n, "k": a.k, "delta": a.delta})).value(&params));
    Ok(None)
}

fn gen(a: &GenArgs, report: &mut Report) -> Result<Option<Artifact>> {
    let require_m = || a.m.ok_or_else(|| usage("--m is required unless --k and --delta plan it"));
    let check_size = |m: u64, n: u64| -> Result<()> {
        match m.checked_mul(n) {
            Some(e) if e <= MAX_ENTRIES => Ok(()),
            _ => Err(usage(format!("an {m} x {n} matrix exceeds the {MAX_ENTRIES}-entry limit"))),
        }
    };
    let (mat, record) = if a.bernoulli {
        let m = require_m()?;
        check_size(m, a.n)?;
        let mat = build_bernoulli_baseline(m as usize, a.n as usize, a.rng_seed)?;
        let rec = Record::new("gen", Severity::Info)
            .value(json!({"provenance": mat.provenance(), "m": m, "n": a.n}))
            .seed(a.rng_seed);
        (mat, rec)
    } else if a.deterministic {
        let m = require_m()?;
        check_size(m, a.n)?;
        let cert = match a.prime.as_str() {
            "auto" => next_prime_geq(&BigNat::from(m * a.n + 1))?,
            s => parse_prime(s)?,
        };
        let mat = build_legendre_deterministic(m as usize, a.n as usize, &cert)?;
        let rec = Record::new("gen", Severity::Info)
            .value(json!({"provenance": "legendre-deterministic", "m": m, "n": a.n, "prime": cert_json(&cert)}));
        (mat, rec)
    } else {
        let params = match (a.k, a.delta) {
            (Some(k), Some(delta)) => plan_parameters(a.n, k, delta, Overrides { m: a.m, h: a.h, c1: None })?,
            _ => {
                let h = a.h.ok_or_else(|| usage("--h is required for a seeded matrix"))?;
                DesignParams::explicit(require_m()?, a.n, h)?
            }
        };
        check_size(params.m, params.n)?;
        let seed = match (&a.x, a.seed) {
            (Some(x), None) => Seed::from_hex(x, params.h)?,
            (None, Some(s)) => Seed::generate(params.h, s)?,
            _ => return Err(usage("a seeded matrix needs --x or --seed (or use --deterministic / --bernoulli)")),
        };
        let cert = match a.prime.as_str() {
            "auto" => next_prime_geq(&params.p_min)?,
            s => parse_prime(s)?,
        };
        let mat = build_legendre_seeded(&params, &seed, &cert)?;
        let rec = Record::new("gen", Severity::Info)
            .value(json!({
                "provenance": "legendre-seeded",
                "m": params.m,
                "n": params.n,
                "h": params.h,
                "x": seed.x().to_hex(),
                "seed_source": seed.source(),
                "p_min": params.p_min,
                "prime": cert_json(&cert),
            }))
            .seed(a.seed);
        (mat, rec)
    };
    report.push(record);
    Ok(Some(Artifact {
        text: write_ripm(&mat),
        out: a.out.clone(),
    }))
}

fn verify(a: &VerifyArgs, report: &mut Report) -> Result<Option<Artifact>> {
    let mat = read_matrix(&a.matrix)?;
    let budget = a.budget as u128;
    let dims = json!({"m": mat.rows(), "n": mat.cols()});
    for check in &a.checks {
        let rec = match check {
            Check::Coherence => {
                let c = coherence(&mat)?;
                Record::new("coherence", Severity::Hard)
                    .params(&dims)
                    .value(c.mu)
                    .bound(c.welch_floor)
                    .pass(c.welch_holds)
                    .witness(c.worst_pair)
            }
            Check::Rip => {
                let mode = match a.mode {
                    ModeArg::Exhaustive => RipMode::Exhaustive,
                    ModeArg::Sampled => RipMode::Sampled {
                        n_samples: a.samples,
                        rng_seed: a.rng_seed,
                    },
                };
                let r = rip_constant(&mat, a.k, mode, budget)?;
                let delta = r.delta_exact.unwrap_or(r.delta_lower_bound);
                let seed = matches!(mode, RipMode::Sampled { .. }).then_some(a.rng_seed);
                Record::new("rip", Severity::Hard)
                    .params(json!({"m": mat.rows(), "n": mat.cols(), "k": a.k, "budget": a.budget}))
                    .value(json!({
                        "delta_exact": r.delta_exact,
                        "delta_lower_bound": r.delta_lower_bound,
                        "supports_evaluated": r.supports_evaluated as u64,
                    }))
                    .bound(a.target_delta)
                    .pass(a.target_delta.is_none_or(|t| delta <= t))
                    .witness(&r.worst_support)
                    .mode(r.mode)
                    .seed(seed)
            }
            Check::Fro => {
                let r = fro_constant(&mat, a.k, budget)?;
                Record::new("fro", Severity::Hard)
                    .params(json!({"m": mat.rows(), "n": mat.cols(), "k": a.k, "budget": a.budget}))
                    .value(json!({
                        "theta": r.theta_emp,
                        "delta_via_fro": r.delta_via_fro,
                        "pairs_evaluated": r.pairs_evaluated as u64,
                    }))
                    .bound(a.target_theta)
                    .pass(a.target_theta.is_none_or(|t| r.theta_emp <= t))
                    .witness(&r.worst_pair)
                    .mode("exhaustive")
            }
            Check::Provenance => {
                let r = provenance_check(&mat)?;
                let severity = if r.applicable { Severity::Hard } else { Severity::Info };
                Record::new("provenance", severity)
                    .params(&dims)
                    .value(json!({"kind": r.kind, "entries_checked": r.entries_checked, "mismatches": r.mismatches, "note": r.note}))
                    .pass(r.pass)
                    .witness(r.first_mismatch)
            }
        };
        report.push(rec);
    }
    Ok(None)
}

fn bias(a: &BiasArgs, report: &mut Report) -> Result<Option<Artifact>> {
    let cert = match a.prime.as_str() {
        "auto" => {
            let top = a.index_set.iter().copied().max().unwrap_or(0);
            let mn = match (a.m, a.n_cols) {
                (Some(m), Some(n)) => m.checked_mul(n).ok_or_else(|| usage("M*N overflows"))?,
                _ => 0,
            };
            next_prime_geq(&(&BigNat::pow2(a.h) + top.max(mn)))?
        }
        s => parse_prime(s)?,
    };
    let r = match a.samples {
        Some(n) => bias_sampled(&cert, a.h, &a.index_set, n, a.rng_seed, a.n_cols)?,
        None => bias_exact(&cert, a.h, &a.index_set, a.n_cols, a.max_h)?,
    };
    let soft = cert.as_u64().is_some_and(|p| p < CHARSUM_SOFT_BELOW);
    let (severity, mode) = match a.samples {
        Some(_) => (Severity::Info, json!({"kind": "sampled", "n_samples": a.samples})),
        None if soft => (Severity::Soft, json!({"kind": "exact"})),
        None => (Severity::Hard, json!({"kind": "exact"})),
    };
    let params = json!({"p": cert.p(), "h": a.h, "index_set": &r.index_set, "n_cols": a.n_cols});
    let value = json!({
        "exact_bias": r.exact_bias.map(|b| format!("{}/{}", b.numer(), b.denom())),
        "sampled_bias": r.sampled_bias,
        "standard_error": r.standard_error,
        "magnitude": r.magnitude(),
    });
    report.push(
        Record::new("bias", severity)
            .params(&params)
            .value(&value)
            .bound(r.charsum_bound)
            .pass(r.charsum_holds.unwrap_or(true))
            .mode(&mode)
            .seed(r.rng_seed),
    );
    if let Some(chain) = r.chain_bound {
        // The chain inequality is only derived for p <= 4 * 2^H.
        let in_regime = *cert.p() <= &BigNat::pow2(a.h) * &BigNat::from(4u64);
        report.push(
            Record::new("bias-chain", Severity::Soft)
                .params(json!({"p": cert.p(), "h": a.h, "n_cols": a.n_cols, "in_regime": in_regime}))
                .value(&value)
                .bound(chain)
                .pass(r.chain_holds.unwrap_or(true))
                .mode(&mode)
                .seed(r.rng_seed),
        );
    }
    Ok(None)
}

fn charsum(a: &CharsumArgs, report: &mut Report) -> Result<Option<Artifact>> {
    let c = charsum_check(a.p, &a.offsets, a.t)?;
    let severity = if c.soft { Severity::Soft } else { Severity::Hard };
    report.push(
        Record::new("charsum", severity)
            .params(json!({"p": c.p, "k": c.k, "offsets": &c.offsets, "t": c.t, "constant": crate::verify::CHARSUM_CONSTANT}))
            .value(c.sum_value)
            .bound(c.bound_value)
            .pass(c.pass)
            .mode("exact"),
    );
    Ok(None)
}

fn scan(a: &ScanArgs, report: &mut Report) -> Result<Option<Artifact>> {
    let selection = match (&a.primes, a.first) {
        (Some(span), None) => {
            let (lo, hi) = parse_span(span, "--primes")?;
            PrimeSelection::Range { lo, hi }
        }
        (None, Some(count)) => PrimeSelection::FirstAbove { count },
        _ => return Err(usage("give exactly one of --primes LO:HI or --first COUNT")),
    };
    let seeds: Vec<u64> = (0..a.baseline_seeds).collect();
    let s = conjecture_scan(a.m, a.n, a.k, selection, a.target_delta, &seeds, a.budget as u128)?;
    let order = s.order;
    for row in &s.rows {
        report.push(
            Record::new("scan-prime", Severity::Info)
                .params(json!({"m": a.m, "n": a.n, "order": order, "p": row.p}))
                .value(row.delta)
                .bound(a.target_delta)
                .pass(true)
                .witness(&row.worst_support)
                .mode("exhaustive"),
        );
    }
    for b in &s.baseline {
        report.push(
            Record::new("scan-baseline", Severity::Info)
                .params(json!({"m": a.m, "n": a.n, "order": order}))
                .value(b.delta)
                .mode("exhaustive")
                .seed(b.rng_seed),
        );
    }
    report.push(
        Record::new("scan-summary", Severity::Info)
            .params(json!({"m": a.m, "n": a.n, "k": a.k, "order": order, "selection": selection}))
            .value(json!({
                "primes": s.rows.len(),
                "fraction_meeting_target": s.fraction_meeting_target,
                "legendre": s.legendre_spread,
                "baseline": s.baseline_spread,
                "overlap": s.overlap,
            }))
            .bound(a.target_delta),
    );
    Ok(None)
}

fn code_convert(a: &CodeConvertArgs, report: &mut Report) -> Result<Option<Artifact>> {
    let text = read_file(&a.input)?;
    let context = || format!("parsing {}", a.input.display());
    if text.starts_with("CODE ") {
        let code = read_code(&text).with_context(context)?;
        let eps = match &a.eps {
            Some(s) => parse_ratio(s)?,
            None => Ratio::new(code.weight_spectrum()?.max_imbalance, code.len() as u64),
        };
        let r = code_to_biased(&code, eps)?;
        report.push(
            Record::new("code-to-biased", Severity::Hard)
                .params(json!({"n": code.dim(), "q": code.len()}))
                .value(json!({"exact_bias": format!("{}/{}", r.exact_bias.max_abs_sum, r.exact_bias.q), "certified_eps": r.certified_eps}))
                .bound(&r.requested_eps)
                .pass(r.pass)
                .witness(&r.exact_bias.witness)
                .mode("exact"),
        );
        push_welch(&r.set, report)?;
        Ok(Some(Artifact {
            text: write_bset(&r.set),
            out: a.out.clone(),
        }))
    } else if text.starts_with("BSET ") {
        let set = read_bset(&text).with_context(context)?;
        push_welch(&set, report)?;
        match biased_to_code(&set)? {
            CodeFromBiased::Code { code, exact_bias, window_holds } => {
                report.push(
                    Record::new("biased-to-code", Severity::Hard)
                        .params(json!({"n": set.dim(), "q": set.size()}))
                        .value(json!({"rank": code.rank(), "exact_bias": format!("{}/{}", exact_bias.max_abs_sum, exact_bias.q)}))
                        .pass(window_holds)
                        .witness(&exact_bias.witness)
                        .mode("exact"),
                );
                Ok(Some(Artifact {
                    text: write_code(&code),
                    out: a.out.clone(),
                }))
            }
            CodeFromBiased::Degenerate { certificate, character_sum } => {
                report.push(
                    Record::new("biased-to-code", Severity::Info)
                        .params(json!({"n": set.dim(), "q": set.size()}))
                        .value(json!({"degenerate": true, "character_sum": character_sum, "bias": "1/1"}))
                        .witness(&certificate)
                        .mode("exact"),
                );
                Ok(None)
            }
        }
    } else {
        Err(usage(format!("{} starts with neither `CODE ` nor `BSET `", a.input.display())))
    }
}

fn push_welch(set: &crate::codes::BiasedSet, report: &mut Report) -> Result<()> {
    let w = welch_entropy_check(set)?;
    report.push(
        Record::new("welch-entropy", Severity::Hard)
            .params(json!({"n": w.n, "q": w.q}))
            .value(format!("{}/{}", w.exact_bias.max_abs_sum, w.exact_bias.q))
            .bound(&w.floor)
            .pass(w.holds)
            .witness(&w.exact_bias.witness)
            .mode("exact"),
    );
    let eps = w.exact_bias.value();
    if eps > 0.0 {
        report.push(
            Record::new("entropy-bound", Severity::Info)
                .params(json!({"n": w.n, "eps": eps}))
                .value(entropy_lower_bound(w.n, eps)?),
        );
    }
    Ok(())
}

fn recover(a: &RecoverArgs, report: &mut Report) -> Result<Option<Artifact>> {
    let mat = read_matrix(&a.matrix)?;
    let truth = if a.signal.is_empty() {
        None
    } else {
        let pairs = a
            .signal
            .iter()
            .map(|s| {
                s.split_once(':')
                    .and_then(|(i, v)| Some((i.parse().ok()?, v.parse().ok()?)))
                    .ok_or_else(|| usage(format!("--signal entries look like INDEX:VALUE, got `{s}`")))
            })
            .collect::<Result<Vec<(usize, f64)>>>()?;
        Some(SparseSignal::from_pairs(mat.cols(), pairs)?)
    };
    let y = match &truth {
        Some(x) => mat.apply(&x.dense()),
        None if a.y.len() == mat.rows() => a.y.clone(),
        None => return Err(usage(format!("give --signal or a --y of length M = {}", mat.rows()))),
    };
    let severity = if truth.is_some() { Severity::Soft } else { Severity::Info };
    let params = json!({"m": mat.rows(), "n": mat.cols(), "k": a.k, "noise_tol": a.noise_tol});
    let rec = match omp_recover(&mat, &y, a.k, a.noise_tol) {
        Ok(r) => {
            let pass = truth.as_ref().is_none_or(|t| {
                t.support == r.signal.support
                    && t.values.iter().zip(&r.signal.values).all(|(a, b)| (a - b).abs() <= VALUE_TOLERANCE)
            });
            Record::new("omp", severity)
                .params(&params)
                .value(json!({
                    "support": r.signal.support,
                    "values": r.signal.values,
                    "selection_order": r.selection_order,
                    "residual_history": r.residual_history,
                }))
                .bound(truth.as_ref().map(|t| &t.support))
                .pass(pass)
        }
        Err(crate::Error::SingularSupport { partial_support, condition }) => Record::new("omp", severity)
            .params(&params)
            .value(json!({"singular": true, "condition": condition}))
            .pass(false)
            .witness(partial_support),
        Err(e) => return Err(e.into()),
    };
    report.push(rec);
    Ok(None)
}

fn sweep(a: &SweepArgs, report: &mut Report) -> Result<Option<Artifact>> {
    let (lo, hi) = parse_span(&a.k_range, "--k-range")?;
    let ks: Vec<usize> = (lo..=hi).map(|k| k as usize).collect();
    let ensemble = match a.ensemble {
        EnsembleArg::LegendreDeterministic => {
            let p = a.prime.as_deref().ok_or_else(|| usage("--prime is required for the deterministic ensemble"))?;
            Ensemble::LegendreDeterministic {
                p: BigNat::from_str(p).map_err(|_| usage(format!("--prime expects a decimal number, got `{p}`")))?,
            }
        }
        EnsembleArg::LegendreSeeded => Ensemble::LegendreSeeded { h: a.h },
        EnsembleArg::Bernoulli => Ensemble::Bernoulli,
    };
    let table = phase_sweep(&ensemble, a.m, a.n, &ks, a.trials, a.rng_seed)?;
    for row in &table.rows {
        report.push(
            Record::new("sweep", Severity::Info)
                .params(json!({"ensemble": row.ensemble, "m": row.m, "n": row.n, "k": row.k, "trials": row.trials}))
                .value(row.success_rate)
                .witness(&row.note)
                .seed(a.rng_seed),
        );
    }
    Ok(Some(Artifact {
        text: table.to_csv(),
        out: a.out.clone(),
    }))
}

fn matching(a: &MatchingArgs, report: &mut Report) -> Result<Option<Artifact>> {
    let c = matching_coloring_count(a.q, a.colors)?;
    report.push(
        Record::new("matching", Severity::Hard)
            .params(json!({"q": c.q, "colors": c.colors}))
            .value(json!({"brute": c.brute.to_string(), "matchings": c.matchings.to_string()}))
            .bound(json!({"formula": c.formula.to_string(), "expected_matchings": c.expected_matchings.to_string()}))
            .pass(c.pass)
            .mode("exact"),
    );
    Ok(None)
}
