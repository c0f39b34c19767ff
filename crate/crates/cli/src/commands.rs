use crate::{Command, FieldArg, PolyInput, SamplerArg, StrategyArg, Tolerance, VerifyKind, VolumeArgs};
use newton_resolve::certificate::CertificateConfig;
use newton_resolve::fan::{chart_atlas, AtlasReport};
use newton_resolve::geometry::{analyze, predict_growth, FieldTag, GrowthCase, GrowthPrediction, ZeroOrderMethod};
use newton_resolve::harness::counting::{count_series, CountConfig, Strategy};
use newton_resolve::harness::expsum::{character_family, cross_check_identity, exp_sum_series};
use newton_resolve::harness::fit::{
    envelope_constant, fit_count_series, fit_power, fit_volume_table, FitModel, FitResult, FitTarget, Verdict,
};
use newton_resolve::harness::prescale;
use newton_resolve::harness::oscillatory::{oscillatory_integral, OscConfig};
use newton_resolve::harness::sublevel::{sublevel_volumes, Sampler};
use newton_resolve::poly::parse_polynomial;
use newton_resolve::rational::{frac_string, pow_u64, to_f64};
use newton_resolve::resolution::{certify_tree, resolve, ResolutionConfig};
use newton_resolve::{Error, Polynomial};
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;

/// A finished command: the document to emit and whether every check passed.
pub struct Outcome {
    pub body: String,
    pub passed: bool,
}

impl Outcome {
    fn json(doc: Value, passed: bool) -> Self {
        let mut body = serde_json::to_string_pretty(&doc).expect("reports serialize");
        body.push('\n');
        Outcome { body, passed }
    }

    pub fn write(&self, out: Option<&Path>) -> std::io::Result<()> {
        match out {
            Some(p) => std::fs::write(p, &self.body),
            None => std::io::stdout().lock().write_all(self.body.as_bytes()),
        }
    }
}

type CmdResult = Result<Outcome, Error>;

fn parse(input: &PolyInput) -> Result<Polynomial, Error> {
    if input.nvars == 0 {
        return Err(Error::InvalidConfig("--nvars must be positive".into()));
    }
    parse_polynomial(&input.polynomial, input.nvars)
}

fn input_json(input: &PolyInput, f: &Polynomial) -> Value {
    json!({ "text": input.polynomial, "nvars": input.nvars, "parsed": f.to_string() })
}

fn verdict_str(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Analyze { input, field, prime } => cmd_analyze(&input, field, prime),
        Command::Charts { input, seed } => cmd_charts(&input, seed),
        Command::Resolve { input, truncation, depth, seed } => cmd_resolve(&input, truncation, depth, seed),
        Command::Verify { kind } => match kind {
            VerifyKind::Padic { input, prime, levels, cap, strategy, prescale, tol } => {
                cmd_verify_padic(&input, prime, levels, cap, strategy, prescale.as_deref(), tol)
            }
            VerifyKind::Real { input, vol, radius } => cmd_verify_volume(&input, FieldTag::Real, &vol, radius),
            VerifyKind::Complex { input, vol, radius } => cmd_verify_volume(&input, FieldTag::Complex, &vol, radius),
            VerifyKind::Osc { input, lambdas, tol } => cmd_verify_osc(&input, &lambdas, tol),
        },
        Command::Report { .. } => unreachable!("handled in main"),
    }
}

fn cmd_analyze(input: &PolyInput, field: FieldArg, prime: u64) -> CmdResult {
    let f = parse(input)?;
    let tag = match field {
        FieldArg::Real => FieldTag::Real,
        FieldArg::Complex => FieldTag::Complex,
        FieldArg::Padic => FieldTag::PAdic { p: prime },
    };
    let a = analyze(&f, tag, &ZeroOrderMethod::Auto)?;
    let doc = json!({
        "command": "analyze",
        "input": input_json(input, &f),
        "d": frac_string(&a.d),
        "k": a.k,
        "case": a.prediction.case,
        "result": a,
    });
    Ok(Outcome::json(doc, true))
}

fn cmd_charts(input: &PolyInput, seed: u64) -> CmdResult {
    let f = parse(input)?;
    let (np, atlas) = chart_atlas(&f)?;
    let cfg = CertificateConfig { seed, ..Default::default() };
    let report = AtlasReport::build(&f, &np, &atlas, &cfg)?;
    let doc = json!({
        "command": "charts",
        "input": input_json(input, &f),
        "verdict": verdict_str(report.passed),
        "chart_count": atlas.charts.len(),
        "atlas": atlas,
        "report": report,
    });
    Ok(Outcome::json(doc, report.passed))
}

fn cmd_resolve(input: &PolyInput, truncation: Option<u64>, depth: usize, seed: u64) -> CmdResult {
    let f = parse(input)?;
    let mut cfg = ResolutionConfig::for_polynomial(&f);
    if let Some(t) = truncation {
        cfg.truncation = t;
    }
    cfg.max_depth = depth;
    cfg.seed = seed;
    let mut out = resolve(&f, &cfg)?;
    let report = certify_tree(&f, &mut out.tree, &cfg);
    let passed = report.passed && !out.partial;
    let doc = json!({
        "command": "resolve",
        "input": input_json(input, &f),
        "verdict": verdict_str(passed),
        "partial": out.partial,
        "report": report,
        "tree": out,
    });
    Ok(Outcome::json(doc, passed))
}

/// Fit according to the predicted regime. Case a pins the log power, case b
/// tries both ends of its range, case c only checks the one-sided bound.
/// `decay` is true when smaller fitted slopes mean faster decay.
fn judge<F: Fn(FitModel, FitTarget) -> FitResult>(
    pred: &GrowthPrediction,
    slope: f64,
    tol: Tolerance,
    decay: bool,
    fit: F,
) -> (Vec<FitResult>, bool) {
    let target = |w: f64| FitTarget { tol_slope: tol.tol_slope, ..FitTarget::new(slope, w) };
    match (pred.case, pred.log_power) {
        (GrowthCase::C, _) | (_, None) => {
            let mut r = fit(FitModel::PureExponent, target(0.0));
            if let Some(lf) = &r.fit {
                let ok = if decay { lf.slope <= slope + tol.tol_slope } else { lf.slope >= slope - tol.tol_slope };
                r.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
                r.note = Some(format!("upper bound only: fitted {:.4}, bound {:.4}", lf.slope, slope));
            }
            let pass = r.verdict == Verdict::Pass;
            (vec![r], pass)
        }
        (_, Some((lo, hi))) => {
            let ws: Vec<usize> = if lo == hi { vec![lo] } else { vec![lo, hi] };
            let rs: Vec<FitResult> = ws
                .into_iter()
                .map(|w| fit(FitModel::ExponentWithLog { pinned: Some(w as f64) }, target(w as f64)))
                .collect();
            let pass = rs.iter().any(|r| r.verdict == Verdict::Pass);
            (rs, pass)
        }
    }
}

fn prediction_json(p: &GrowthPrediction, slope: f64) -> Value {
    json!({
        "d": frac_string(&p.d),
        "k": p.k,
        "case": p.case,
        "s": p.s.as_ref().map(frac_string),
        "delta": frac_string(&p.delta),
        "log_power": p.log_power,
        "certainty": p.certainty,
        "target_slope": slope,
    })
}

fn cmd_verify_padic(
    input: &PolyInput,
    p: u64,
    top: u32,
    cap: u128,
    strategy: StrategyArg,
    scale: Option<&[u32]>,
    tol: Tolerance,
) -> CmdResult {
    let mut f = parse(input)?;
    if top == 0 {
        return Err(Error::InvalidConfig("--levels must be positive".into()));
    }
    if let Some(a) = scale {
        if a.len() != f.nvars() {
            return Err(Error::DimensionMismatch { expected: f.nvars(), found: a.len() });
        }
        f = prescale(&f, p, a);
    }
    let pred = predict_growth(&f, FieldTag::PAdic { p })?;
    let slope = to_f64(&pred.count_slope());
    let levels: Vec<u32> = (1..=top).collect();
    let cfg = CountConfig { cap, ..Default::default() };
    let strat = match strategy {
        StrategyArg::Brute => Strategy::Brute,
        StrategyArg::Hensel => Strategy::Hensel,
    };
    let series = count_series(&f, p, &levels, strat, &cfg)?;
    let (fits, fit_ok) = judge(&pred, slope, tol, true, |m, t| fit_count_series(&series, m, 2, t));

    // levels small enough to enumerate: exact brute-force cross-check and exponential sums
    let n = f.nvars() as u32;
    let small: Vec<u32> = levels
        .iter()
        .copied()
        .filter(|&l| pow_u64(p, l * n).is_some_and(|s| (s as u128) <= cap))
        .collect();
    let mut brute_ok = true;
    let mut brute = Value::Null;
    if strat == Strategy::Hensel && !small.is_empty() {
        let b = count_series(&f, p, &small, Strategy::Brute, &cfg)?;
        let mismatches: Vec<u32> = small.iter().filter(|&&l| b.get(l) != series.get(l)).copied().collect();
        brute_ok = mismatches.is_empty();
        brute = json!({ "levels": small, "mismatches": mismatches });
    }
    let mut identity_ok = true;
    let mut expsum = Value::Null;
    if !small.is_empty() {
        let s = exp_sum_series(&f, p, &small, cap)?;
        let c = envelope_constant(p, &s.levels, &s.abs, slope);
        // the character family costs p^l sums over p^{ln} points
        let affordable = |l: u32| pow_u64(p, l * (n + 1)).is_some_and(|s| (s as u128) <= cap);
        let check = match small.iter().copied().filter(|&l| affordable(l)).max() {
            Some(l) => {
                let family = character_family(&f, p, l, l, cap)?;
                let check = cross_check_identity(series.get(l).expect("level computed"), p, l, &family);
                identity_ok = check.passed;
                Some(check)
            }
            None => None,
        };
        expsum = json!({ "series": s, "envelope_constant": c, "identity": check });
    }
    let passed = fit_ok && brute_ok && identity_ok;
    let values: Vec<String> = series.values.iter().map(frac_string).collect();
    let doc = json!({
        "command": "verify padic",
        "input": input_json(input, &f),
        "prime": p,
        "prescale": scale,
        "verdict": verdict_str(passed),
        "prediction": prediction_json(&pred, slope),
        "series": { "strategy": series.strategy, "levels": series.levels, "n_l": values, "nodes": series.nodes },
        "fits": fits,
        "brute_force_check": brute,
        "exponential_sums": expsum,
    });
    Ok(Outcome::json(doc, passed))
}

/// The complex volume decays twice as fast, so its sweep stays coarser to
/// keep Monte Carlo hit counts usable.
fn default_eps(field: FieldTag) -> Vec<f64> {
    let (start, step) = if field == FieldTag::Complex { (-1.0, 0.25) } else { (-2.0, 0.5) };
    (0..9).map(|k| 10f64.powf(start - step * k as f64)).collect()
}

fn cmd_verify_volume(input: &PolyInput, field: FieldTag, vol: &VolumeArgs, radius: f64) -> CmdResult {
    let f = parse(input)?;
    let mut eps = vol.eps.clone().unwrap_or_else(|| default_eps(field));
    eps.sort_by(|a, b| a.partial_cmp(b).expect("thresholds are numbers"));
    let sampler = match (vol.sampler, field) {
        (SamplerArg::MonteCarlo, _) | (SamplerArg::Auto, FieldTag::Complex) => {
            Sampler::MonteCarlo { samples: vol.samples.unwrap_or(20_000_000), seed: vol.seed }
        }
        _ => Sampler::Sliced { samples: vol.samples.unwrap_or(200_000), seed: vol.seed },
    };
    let pred = predict_growth(&f, field)?;
    let slope = to_f64(&pred.delta);
    let table = sublevel_volumes(&f, field, &eps, &sampler, radius)?;
    let (fits, passed) = judge(&pred, slope, vol.tol, false, |m, t| fit_volume_table(&table, m, t));
    let doc = json!({
        "command": if field == FieldTag::Real { "verify real" } else { "verify complex" },
        "input": input_json(input, &f),
        "verdict": verdict_str(passed),
        "prediction": prediction_json(&pred, slope),
        "table": table,
        "fits": fits,
    });
    Ok(Outcome::json(doc, passed))
}

fn cmd_verify_osc(input: &PolyInput, lambdas: &[f64], tol: Tolerance) -> CmdResult {
    let f = parse(input)?;
    let pred = predict_growth(&f, FieldTag::Real)?;
    let slope = -to_f64(&pred.delta);
    let rows = oscillatory_integral(&f, lambdas, &OscConfig::default())?;
    let xs: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.abs).collect();
    let (fits, passed) = judge(&pred, slope, tol, true, |m, t| fit_power(&xs, &ys, m, t));
    let doc = json!({
        "command": "verify osc",
        "input": input_json(input, &f),
        "verdict": verdict_str(passed),
        "heuristic": true,
        "prediction": prediction_json(&pred, slope),
        "rows": rows,
        "fits": fits,
    });
    Ok(Outcome::json(doc, passed))
}
