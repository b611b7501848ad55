//! The four subcommands, independent of argument parsing.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spinchsh_core::families::{
    ghz_closed_form, ghz_state, product_state, product_state_closed_form, schmidt_closed_form,
    schmidt_state, two_term_closed_form, two_term_state, werner_closed_form, werner_state,
    SchmidtSpectrum, WernerParameter,
};
use spinchsh_core::oracle::verify_theorem1_for;
use spinchsh_core::random::{random_mixed_state, random_pure_state, seeded_rng};
use spinchsh_core::{
    chsh_expectation_trace, correlation::max_abs_diff, spin_correlation_by, ChshReport,
    OracleConfig, QuantumState, Route, SpinCorrelationMatrix, SpinOperators,
};

use crate::error::{CliError, CliResult};
use crate::record::{
    fmt_f64, to_json, AnalysisRecord, ClosedFormValues, FamilyRecord, RouteMatrix, RouteTiming,
};
use crate::statefile::StateFile;

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Threshold above which `analyze` reports a route disagreement.
pub const ROUTE_AGREEMENT_TOL: f64 = 1e-8;

/// Deliberate corruption used to check that `verify` catches bugs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Transpose Z computed by the definition route.
    TransposeZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub routes: Vec<Route>,
    pub oracle: Option<OracleConfig>,
    pub timings: bool,
    pub format: OutputFormat,
    pub fault: Option<Fault>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            routes: all_routes().to_vec(),
            oracle: None,
            timings: false,
            format: OutputFormat::Json,
            fault: None,
        }
    }
}

pub fn all_routes() -> [Route; 3] {
    [Route::Definition, Route::ElementFormulas, Route::Theorem2]
}

/// Text for stdout plus the status that decides the exit code.
#[derive(Debug)]
pub struct Output {
    pub stdout: String,
    pub status: CliResult<()>,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            status: Ok(()),
        }
    }
}

fn correlation(
    route: Route,
    state: &QuantumState,
    ops: &SpinOperators,
    fault: Option<Fault>,
) -> CliResult<SpinCorrelationMatrix> {
    let z = spin_correlation_by(route, state, ops)?;
    Ok(match (fault, route) {
        (Some(Fault::TransposeZ), Route::Definition) => z.transposed(),
        _ => z,
    })
}

pub fn analyze_state(
    state: &QuantumState,
    input: &str,
    opts: &AnalyzeOptions,
) -> CliResult<AnalysisRecord> {
    if opts.routes.is_empty() {
        return Err(CliError::Invalid("no route requested".into()));
    }
    let ops = SpinOperators::new(state.dim())?;
    let mut mats = Vec::with_capacity(opts.routes.len());
    let mut timings = Vec::new();
    for &route in &opts.routes {
        let start = Instant::now();
        mats.push(correlation(route, state, &ops, opts.fault)?);
        timings.push(RouteTiming {
            route,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    let route_max_deviation = mats
        .iter()
        .skip(1)
        .map(|m| m.max_abs_diff(&mats[0]))
        .fold(0.0, f64::max);
    let report = ChshReport::from_correlation(mats[0], opts.routes[0]);
    let oracle = match &opts.oracle {
        Some(cfg) => {
            cfg.validate()?;
            Some(verify_theorem1_for(&mats[0], cfg))
        }
        None => None,
    };
    Ok(AnalysisRecord {
        input: input.to_owned(),
        label: state.label().map(str::to_owned),
        d: state.dim(),
        s: report.spin,
        z: opts
            .routes
            .iter()
            .zip(&mats)
            .map(|(&route, m)| RouteMatrix {
                route,
                z: *m.entries(),
            })
            .collect(),
        route_max_deviation,
        singular_values: report.correlation.singular_values(),
        max_chsh: report.max_chsh,
        gamma: report.gamma,
        violates_lhv: report.violates_lhv,
        degenerate: report.degenerate,
        settings: report.settings,
        oracle,
        timings: opts.timings.then_some(timings),
    })
}

fn route_status(record: &AnalysisRecord) -> CliResult<()> {
    if record.route_max_deviation > ROUTE_AGREEMENT_TOL {
        Err(CliError::RouteDisagreement(record.route_max_deviation))
    } else {
        Ok(())
    }
}

pub fn cmd_analyze(path: &Path, opts: &AnalyzeOptions) -> CliResult<Output> {
    let state = StateFile::read(path)?.to_state()?;
    let record = analyze_state(&state, &path.display().to_string(), opts)?;
    let stdout = match opts.format {
        OutputFormat::Json => to_json(&record),
        OutputFormat::Csv => record.to_csv(),
    };
    Ok(Output {
        stdout,
        status: route_status(&record),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Ghz,
    Schmidt,
    TwoTerm,
    Product,
    Werner,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Ghz => "ghz",
            Family::Schmidt => "schmidt",
            Family::TwoTerm => "two-term",
            Family::Product => "product",
            Family::Werner => "werner",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FamilyParams {
    pub d: Option<usize>,
    pub phi: Option<f64>,
    pub mu: Option<Vec<f64>>,
    pub k: Option<usize>,
    pub n: Option<usize>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: Family) -> CliResult<T> {
    v.ok_or_else(|| CliError::Invalid(format!("family {} requires --{flag}", family.name())))
}

/// A family member and its closed-form values.
pub fn build_family(
    family: Family,
    p: &FamilyParams,
) -> CliResult<(QuantumState, ClosedFormValues)> {
    let d = need(p.d, "d", family)?;
    Ok(match family {
        Family::Ghz => {
            let c = ghz_closed_form(d)?;
            (
                ghz_state(d)?,
                ClosedFormValues {
                    gamma: c.gamma,
                    z: Some(c.z),
                },
            )
        }
        Family::Schmidt => {
            let mu =
                p.mu.clone()
                    .ok_or_else(|| CliError::Invalid("family schmidt requires --mu".into()))?;
            if mu.len() != d {
                return Err(CliError::Invalid(format!(
                    "--mu has {} weights, expected d = {d}",
                    mu.len()
                )));
            }
            let mu = SchmidtSpectrum::new(mu)?;
            let c = schmidt_closed_form(&mu);
            let st = schmidt_state(&mu)?.with_label(format!("schmidt(d={d})"));
            (
                st,
                ClosedFormValues {
                    gamma: c.gamma,
                    z: Some(c.matrix()),
                },
            )
        }
        Family::TwoTerm => {
            let k = need(p.k, "k", family)?;
            let n = need(p.n, "n", family)?;
            let gamma = two_term_closed_form(k, n, d)?;
            (
                two_term_state(k, n, d)?,
                ClosedFormValues { gamma, z: None },
            )
        }
        Family::Product => {
            let n = need(p.n, "n", family)?;
            let gamma = product_state_closed_form(n, d)?;
            (product_state(n, d)?, ClosedFormValues { gamma, z: None })
        }
        Family::Werner => {
            let phi = WernerParameter::new(need(p.phi, "phi", family)?)?;
            let c = werner_closed_form(d, phi)?;
            (
                werner_state(d, phi)?,
                ClosedFormValues {
                    gamma: c.gamma,
                    z: Some(c.z),
                },
            )
        }
    })
}

pub fn family_record(
    family: Family,
    p: &FamilyParams,
    opts: &AnalyzeOptions,
) -> CliResult<FamilyRecord> {
    let (state, closed) = build_family(family, p)?;
    let input = state.label().unwrap_or(family.name()).to_owned();
    let analysis = analyze_state(&state, &input, opts)?;
    let mut dev = (closed.gamma - analysis.gamma).abs();
    if let Some(zc) = &closed.z {
        for rm in &analysis.z {
            dev = dev.max(max_abs_diff(zc, &rm.z));
        }
    }
    Ok(FamilyRecord {
        family: family.name().to_owned(),
        analysis,
        closed_form: closed,
        closed_vs_pipeline_max_abs_dev: dev,
    })
}

pub fn cmd_family(family: Family, p: &FamilyParams, opts: &AnalyzeOptions) -> CliResult<Output> {
    let record = family_record(family, p, opts)?;
    let stdout = match opts.format {
        OutputFormat::Json => to_json(&record),
        OutputFormat::Csv => record.to_csv(),
    };
    Ok(Output {
        stdout,
        status: route_status(&record.analysis),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanRange {
    Phi { from: f64, to: f64, steps: usize },
    Dim { from: usize, to: usize },
}

pub const SCAN_HEADER: &str = "param,gamma_closed,gamma_pipeline,abs_dev";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub param: f64,
    pub gamma_closed: f64,
    pub gamma_pipeline: f64,
}

impl ScanRow {
    pub fn abs_dev(&self) -> f64 {
        (self.gamma_closed - self.gamma_pipeline).abs()
    }
}

/// Points of a scan in ascending order, each paired with its family parameters.
fn scan_points(
    family: Family,
    base: &FamilyParams,
    range: ScanRange,
) -> CliResult<Vec<(String, FamilyParams)>> {
    if family == Family::Schmidt {
        return Err(CliError::Invalid(
            "schmidt has no scalar parameter to scan".into(),
        ));
    }
    match range {
        ScanRange::Phi { from, to, steps } => {
            if family != Family::Werner {
                return Err(CliError::Invalid(format!(
                    "a phi scan applies to werner, not {}",
                    family.name()
                )));
            }
            if steps == 0 || from.is_nan() || to.is_nan() || from > to || (steps == 1 && from != to)
            {
                return Err(CliError::Invalid(format!(
                    "empty phi range {from}..{to} with {steps} steps"
                )));
            }
            Ok((0..steps)
                .map(|i| {
                    let phi = if steps == 1 {
                        from
                    } else {
                        from + (to - from) * i as f64 / (steps - 1) as f64
                    };
                    let p = FamilyParams {
                        phi: Some(phi),
                        ..base.clone()
                    };
                    (fmt_f64(phi), p)
                })
                .collect())
        }
        ScanRange::Dim { from, to } => {
            if from < 2 || from > to {
                return Err(CliError::Invalid(format!(
                    "empty dimension range {from}..{to}"
                )));
            }
            Ok((from..=to)
                .map(|d| {
                    (
                        d.to_string(),
                        FamilyParams {
                            d: Some(d),
                            ..base.clone()
                        },
                    )
                })
                .collect())
        }
    }
}

pub fn scan_rows(
    family: Family,
    base: &FamilyParams,
    range: ScanRange,
) -> CliResult<Vec<(String, ScanRow)>> {
    let points = scan_points(family, base, range)?;
    points
        .par_iter()
        .map(|(label, p)| {
            let (state, closed) = build_family(family, p)?;
            let ops = SpinOperators::new(state.dim())?;
            let z = spin_correlation_by(Route::Definition, &state, &ops)?;
            let param = p
                .phi
                .filter(|_| matches!(range, ScanRange::Phi { .. }))
                .unwrap_or_else(|| state.dim() as f64);
            Ok((
                label.clone(),
                ScanRow {
                    param,
                    gamma_closed: closed.gamma,
                    gamma_pipeline: ChshReport::from_correlation(z, Route::Definition).gamma,
                },
            ))
        })
        .collect()
}

pub fn cmd_scan(family: Family, base: &FamilyParams, range: ScanRange) -> CliResult<Output> {
    let rows = scan_rows(family, base, range)?;
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for (label, r) in rows {
        out.push_str(&format!(
            "{label},{},{},{}\n",
            fmt_f64(r.gamma_closed),
            fmt_f64(r.gamma_pipeline),
            fmt_f64(r.abs_dev())
        ));
    }
    Ok(Output::ok(out))
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub quarantine: PathBuf,
    pub fault: Option<Fault>,
}

pub const CHECKS: [&str; 4] = ["route-equality", "bounds", "achievability", "oracle"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuarantineEntry {
    pub d: usize,
    pub sample: usize,
    pub failed_checks: Vec<String>,
    pub details: Vec<String>,
    pub state: StateFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quarantine {
    pub seed: u64,
    pub failures: Vec<QuarantineEntry>,
}

/// Sample `i` of dimension `d`: even indices are mixed, odd are pure, all drawn
/// in order from `seeded_rng(seed, d)`.
pub fn verify_corpus(d: usize, samples: usize, seed: u64) -> CliResult<Vec<QuantumState>> {
    let mut rng = seeded_rng(seed, d as u64);
    (0..samples)
        .map(|i| {
            let st = if i % 2 == 0 {
                random_mixed_state(d, &mut rng)?
            } else {
                random_pure_state(d, &mut rng)?
            };
            Ok(st.with_label(format!("verify(seed={seed},d={d},sample={i})")))
        })
        .collect()
}

/// Failure messages per check, `None` where the check passed.
fn run_checks(
    state: &QuantumState,
    seed: u64,
    fault: Option<Fault>,
) -> CliResult<[Option<String>; 4]> {
    let ops = SpinOperators::new(state.dim())?;
    let mats = all_routes()
        .iter()
        .map(|&r| correlation(r, state, &ops, fault))
        .collect::<CliResult<Vec<_>>>()?;
    let z = &mats[0];

    let dev = mats[1..]
        .iter()
        .map(|m| m.max_abs_diff(z))
        .fold(0.0, f64::max);
    let routes = (dev > 1e-10).then(|| format!("route deviation {dev:e}"));

    let s2 = ops.spin() * ops.spin();
    let report = ChshReport::from_correlation(*z, Route::Definition);
    let top = z.singular_values()[0];
    let bounds = (top > s2 + 1e-9 || report.gamma > std::f64::consts::SQRT_2 + 1e-9)
        .then(|| format!("largest singular value {top}, gamma {}", report.gamma));

    let achieved = chsh_expectation_trace(state, &ops, &report.settings)?;
    let gap = (achieved - report.max_chsh).abs();
    let achievability = (!report.degenerate && gap > 1e-9).then(|| {
        format!(
            "optimal settings reach {achieved}, maximum {}",
            report.max_chsh
        )
    });

    let cfg = OracleConfig {
        rng_seed: seed,
        ..OracleConfig::default()
    };
    let t1 = verify_theorem1_for(z, &cfg);
    let oracle = (!t1.pass).then(|| format!("closed {} vs oracle {}", t1.closed, t1.oracle));

    Ok([routes, bounds, achievability, oracle])
}

pub fn cmd_verify(opts: &VerifyOptions) -> CliResult<Output> {
    if opts.dims.is_empty() || opts.samples == 0 {
        return Err(CliError::Invalid(
            "verify needs at least one dimension and sample".into(),
        ));
    }
    let mut jobs = Vec::new();
    for &d in &opts.dims {
        for (i, st) in verify_corpus(d, opts.samples, opts.seed)?
            .into_iter()
            .enumerate()
        {
            jobs.push((d, i, st));
        }
    }
    let results = jobs
        .par_iter()
        .map(|(_, _, st)| run_checks(st, opts.seed, opts.fault))
        .collect::<CliResult<Vec<_>>>()?;

    let mut fails = [0usize; 4];
    let mut failures = Vec::new();
    for ((d, i, st), res) in jobs.iter().zip(&results) {
        let mut names = Vec::new();
        let mut details = Vec::new();
        for (k, r) in res.iter().enumerate() {
            if let Some(msg) = r {
                fails[k] += 1;
                names.push(CHECKS[k].to_owned());
                details.push(msg.clone());
            }
        }
        if !names.is_empty() {
            failures.push(QuarantineEntry {
                d: *d,
                sample: *i,
                failed_checks: names,
                details,
                state: StateFile::from_state(st),
            });
        }
    }

    let dims: Vec<String> = opts.dims.iter().map(|d| d.to_string()).collect();
    let total = jobs.len();
    let mut out = format!(
        "verify seed={} dims={} samples={} states={total}\n",
        opts.seed,
        dims.join(","),
        opts.samples
    );
    for (name, f) in CHECKS.iter().zip(fails) {
        out.push_str(&format!("{name:<15} pass {:>5} fail {f:>5}\n", total - f));
    }
    if failures.is_empty() {
        out.push_str("all checks passed\n");
        return Ok(Output::ok(out));
    }
    let n = failures.len();
    let q = Quarantine {
        seed: opts.seed,
        failures,
    };
    std::fs::write(&opts.quarantine, to_json(&q)).map_err(|e| {
        CliError::Unreadable(format!("cannot write {}: {e}", opts.quarantine.display()))
    })?;
    out.push_str(&format!(
        "{n} failing state(s) written to {}\n",
        opts.quarantine.display()
    ));
    Ok(Output {
        stdout: out,
        status: Err(CliError::VerifyFailed(n)),
    })
}
