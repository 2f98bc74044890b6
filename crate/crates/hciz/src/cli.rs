//! The `hciz` command line: argument definitions, dispatch and exit codes.
//!
//! Exit codes: 0 all checks pass, 1 a verification failed, 2 domain error,
//! 64 usage or parse error, 74 the report could not be written.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hciz_core::invariant::TracePoly;
use hciz_core::numeric::{hciz_determinant, kernel_series_adaptive, McPlan, Spectrum};
use hciz_core::partition::Partition;
use hciz_core::symmetric::{schur_exact, schur_numeric, schur_to_power_sums, Named};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::par;
use crate::parse::{parse_complex, parse_spectrum, parse_trace_poly};
use crate::report::{complex_json, estimate_json, Check, Report};
use crate::suites::{self, partition_label, SuiteOutcome, K_SIGMA};

/// Generator streams for `r` spectra, disjoint from the Monte Carlo worker streams.
const STREAM_A: u64 = u64::MAX;
const STREAM_B: u64 = u64::MAX - 1;

/// Rounding allowance, relative to the larger magnitude, added to Monte Carlo bounds.
const ROUNDING_FLOOR: f64 = 64.0 * f64::EPSILON;

#[derive(Parser, Debug)]
#[command(name = "hciz", version, about = "Evaluate the HCIZ integral three ways and verify its identities exactly")]
pub struct Cli {
    /// Write the JSON report to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Suppress the human-readable summary on stderr
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Maximum worker threads; results do not depend on it
    #[arg(long, global = true, env = "HCIZ_THREADS", value_name = "N")]
    pub threads: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the integral by determinant, Monte Carlo and character series
    Eval(EvalArgs),
    /// Run an exact or statistical verification suite
    Verify(VerifyArgs),
    /// Evaluate or expand a Schur polynomial
    Schur(SchurArgs),
    /// Fourier coefficients of a trace polynomial in the characters
    Fourier(FourierArgs),
}

#[derive(Args, Debug)]
pub struct McArgs {
    /// Monte Carlo sample count
    #[arg(long, default_value = "100000")]
    pub samples: String,
    /// 64-bit seed
    #[arg(long, default_value = "0")]
    pub seed: String,
    /// Reproducible substreams; results depend on (seed, workers)
    #[arg(long, default_value = "8")]
    pub workers: String,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Matrix dimension; required when a spectrum is `r`
    #[arg(long)]
    pub n: Option<String>,
    /// Eigenvalues of A as `re+imi` literals separated by commas, or `r` for random reals
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Eigenvalues of B, same forms as --a
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    /// Any of det, mc, series, separated by commas
    #[arg(long, default_value = "det,mc,series")]
    pub methods: String,
    #[command(flatten)]
    pub mc: McArgs,
    /// Largest partition weight in the character series
    #[arg(long, default_value = "40")]
    pub max_weight: String,
    /// Absolute tolerance for the series and for det/series agreement
    #[arg(long, default_value = "1e-8")]
    pub tolerance: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    AltOrthonormal,
    InvOrthonormal,
    Unitarity,
    Diffop,
    Fourier,
    Ginibre,
    Reproducing,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::AltOrthonormal => "alt-orthonormal",
            Suite::InvOrthonormal => "inv-orthonormal",
            Suite::Unitarity => "unitarity",
            Suite::Diffop => "diffop",
            Suite::Fourier => "fourier",
            Suite::Ginibre => "ginibre",
            Suite::Reproducing => "reproducing",
        }
    }

    fn default_max_weight(self) -> Option<&'static str> {
        match self {
            Suite::AltOrthonormal => Some("6"),
            Suite::InvOrthonormal | Suite::Unitarity => Some("4"),
            Suite::Fourier => Some("5"),
            Suite::Reproducing => Some("6"),
            Suite::Diffop | Suite::Ginibre => None,
        }
    }

    fn default_count(self) -> Option<&'static str> {
        match self {
            Suite::Fourier => Some("20"),
            Suite::Reproducing => Some("10"),
            _ => None,
        }
    }

    fn uses_seed(self) -> bool {
        matches!(self, Suite::Fourier | Suite::Ginibre | Suite::Reproducing)
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub suite: Suite,
    /// Matrix dimension
    #[arg(long, default_value = "2")]
    pub n: String,
    /// Largest partition or trace weight
    #[arg(long)]
    pub max_weight: Option<String>,
    /// Largest weighted degree (diffop)
    #[arg(long, default_value = "4")]
    pub max_degree: String,
    /// Number of random cases (fourier, reproducing)
    #[arg(long)]
    pub count: Option<String>,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Args, Debug)]
pub struct SchurArgs {
    /// Partition as comma-separated parts
    #[arg(long)]
    pub lambda: String,
    /// Evaluate at these eigenvalues
    #[arg(long, allow_hyphen_values = true)]
    pub eigs: Option<String>,
    /// Number of variables for --exact
    #[arg(long)]
    pub n: Option<String>,
    /// Exact expansion in x1..xn
    #[arg(long)]
    pub exact: bool,
    /// Expansion in the power sums
    #[arg(long)]
    pub power_sums: bool,
}

#[derive(Args, Debug)]
pub struct FourierArgs {
    /// Trace polynomial, e.g. "t1^2 - 3/2 t2"
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    /// Matrix dimension
    #[arg(long)]
    pub n: String,
    /// Largest |λ|; defaults to the weighted degree of F
    #[arg(long)]
    pub max_weight: Option<String>,
}

/// Results, checks and a short summary from one command.
struct Outcome {
    results: Value,
    checks: Vec<Check>,
    summary: String,
}

fn parse_num<T: FromStr>(flag: &str, s: &str) -> Result<T, CliError> {
    s.parse().map_err(|_| CliError::usage(format!("invalid value `{s}` for --{flag}")))
}

fn parse_positive(flag: &str, s: &str) -> Result<usize, CliError> {
    match parse_num::<usize>(flag, s)? {
        0 => Err(CliError::usage(format!("--{flag} must be at least 1"))),
        k => Ok(k),
    }
}

fn mc_plan(mc: &McArgs) -> Result<McPlan, CliError> {
    let seed = parse_num::<u64>("seed", &mc.seed)?;
    let samples = parse_num::<u64>("samples", &mc.samples)?;
    let workers = parse_positive("workers", &mc.workers)?;
    let workers = u32::try_from(workers).map_err(|_| CliError::usage("--workers is too large"))?;
    Ok(McPlan::new(seed, samples).with_workers(workers))
}

fn spectrum_json(s: &Spectrum) -> Value {
    Value::Array(s.eigs().iter().copied().map(complex_json).collect())
}

fn fmt_complex(z: Complex64) -> String {
    if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Raw flag values as given (or defaulted), echoed into the report.
fn inputs_of(cmd: &Command) -> (&'static str, BTreeMap<String, String>) {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: &str| {
        m.insert(k.to_string(), v.to_string());
    };
    let name = match cmd {
        Command::Eval(a) => {
            if let Some(n) = &a.n {
                put("n", n);
            }
            put("a", &a.a);
            put("b", &a.b);
            put("methods", &a.methods);
            put("samples", &a.mc.samples);
            put("seed", &a.mc.seed);
            put("workers", &a.mc.workers);
            put("max-weight", &a.max_weight);
            put("tolerance", &a.tolerance);
            "eval"
        }
        Command::Verify(a) => {
            put("suite", a.suite.name());
            put("n", &a.n);
            if let Some(w) = a.max_weight.as_deref().or(a.suite.default_max_weight()) {
                put("max-weight", w);
            }
            if a.suite == Suite::Diffop {
                put("max-degree", &a.max_degree);
            }
            if let Some(c) = a.count.as_deref().or(a.suite.default_count()) {
                put("count", c);
            }
            if a.suite.uses_seed() {
                put("seed", &a.mc.seed);
            }
            if a.suite == Suite::Ginibre {
                put("samples", &a.mc.samples);
                put("workers", &a.mc.workers);
            }
            "verify"
        }
        Command::Schur(a) => {
            put("lambda", &a.lambda);
            if let Some(e) = &a.eigs {
                put("eigs", e);
            }
            if let Some(n) = &a.n {
                put("n", n);
            }
            put("exact", if a.exact { "true" } else { "false" });
            put("power-sums", if a.power_sums { "true" } else { "false" });
            "schur"
        }
        Command::Fourier(a) => {
            put("f", &a.f);
            put("n", &a.n);
            if let Some(w) = &a.max_weight {
                put("max-weight", w);
            }
            "fourier"
        }
    };
    (name, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Method {
    Det,
    Mc,
    Series,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Det => "det",
            Method::Mc => "mc",
            Method::Series => "series",
        }
    }
}

fn parse_methods(s: &str) -> Result<Vec<Method>, CliError> {
    let mut out = Vec::new();
    for m in s.split(',') {
        let m = match m {
            "det" => Method::Det,
            "mc" => Method::Mc,
            "series" => Method::Series,
            other => return Err(CliError::usage(format!("unknown method `{other}`; expected det, mc or series"))),
        };
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out.sort();
    Ok(out)
}

fn cmd_eval(a: &EvalArgs) -> Result<Outcome, CliError> {
    let n = a.n.as_deref().map(|s| parse_positive("n", s)).transpose()?;
    let plan = mc_plan(&a.mc)?;
    let max_weight = parse_num::<u32>("max-weight", &a.max_weight)?;
    let tolerance = parse_num::<f64>("tolerance", &a.tolerance)?;
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(CliError::usage("--tolerance must be positive"));
    }
    let methods = parse_methods(&a.methods)?;
    let sa = parse_spectrum(&a.a, n, plan.seed, STREAM_A)?;
    let sb = parse_spectrum(&a.b, n, plan.seed, STREAM_B)?;
    if sa.len() != sb.len() {
        return Err(CliError::usage(format!("--a has {} eigenvalues but --b has {}", sa.len(), sb.len())));
    }

    let mut results = serde_json::Map::new();
    results.insert("n".into(), json!(sa.len()));
    results.insert("spectra".into(), json!({ "a": spectrum_json(&sa), "b": spectrum_json(&sb) }));
    let mut values: Vec<(Method, Complex64, Option<f64>)> = Vec::new();
    let mut checks = Vec::new();
    let mut summary = String::new();

    for &m in &methods {
        match m {
            Method::Det => match hciz_determinant(&sa, &sb) {
                Ok(v) => {
                    results.insert("det".into(), json!({ "value": complex_json(v) }));
                    values.push((m, v, None));
                    let _ = writeln!(summary, "det     {}", fmt_complex(v));
                }
                Err(e @ hciz_core::Error::DegenerateSpectrum { .. }) if methods.len() > 1 => {
                    results.insert("det".into(), json!({ "error": { "kind": "domain", "message": e.to_string() } }));
                    let _ = writeln!(summary, "det     skipped: {e}");
                }
                Err(e) => return Err(e.into()),
            },
            Method::Mc => {
                let est = par::hciz_mc(&sa, &sb, &plan)?;
                results.insert("mc".into(), estimate_json(&est));
                values.push((m, est.mean, Some(est.stderr)));
                let _ = writeln!(summary, "mc      {} ± {}", fmt_complex(est.mean), est.stderr);
            }
            Method::Series => {
                let s = kernel_series_adaptive(&sa, &sb.conj(), tolerance, max_weight)?;
                let converged = s.last_shell_magnitude < 1e-3 * tolerance;
                results.insert(
                    "series".into(),
                    json!({
                        "value": complex_json(s.value),
                        "max_weight_used": s.max_weight_used,
                        "last_shell_magnitude": s.last_shell_magnitude,
                        "converged": converged,
                    }),
                );
                checks.push(Check::new(
                    "series_converged",
                    converged,
                    format!("last shell {:e} at weight {}", s.last_shell_magnitude, s.max_weight_used),
                ));
                values.push((m, s.value, None));
                let _ = writeln!(summary, "series  {} (weight {})", fmt_complex(s.value), s.max_weight_used);
            }
        }
    }

    let mut deltas = Vec::new();
    for (i, &(mi, vi, si)) in values.iter().enumerate() {
        for &(mj, vj, sj) in &values[i + 1..] {
            let delta = (vi - vj).norm();
            let (bound, policy) = match (si, sj) {
                (None, None) => (tolerance, "absolute tolerance".to_string()),
                _ => {
                    let sigma = si.unwrap_or(0.0).hypot(sj.unwrap_or(0.0));
                    (K_SIGMA * sigma + ROUNDING_FLOOR * vi.norm().max(vj.norm()), format!("{K_SIGMA}*stderr"))
                }
            };
            let pass = delta <= bound;
            let pair = format!("{}-{}", mi.name(), mj.name());
            deltas.push(json!({ "pair": pair, "delta": delta, "bound": bound, "policy": policy, "pass": pass }));
            checks.push(Check::new(format!("agree_{pair}"), pass, format!("|delta| = {delta:e} <= {bound:e} ({policy})")));
            let _ = writeln!(summary, "{pair:<14} delta {delta:e}  bound {bound:e}  {}", if pass { "ok" } else { "FAIL" });
        }
    }
    results.insert("deltas".into(), Value::Array(deltas));
    Ok(Outcome { results: Value::Object(results), checks, summary })
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let suite = a.suite;
    let n = parse_positive("n", &a.n)?;
    if a.max_weight.is_some() && suite.default_max_weight().is_none() {
        return Err(CliError::usage(format!("--max-weight does not apply to {}", suite.name())));
    }
    if a.count.is_some() && suite.default_count().is_none() {
        return Err(CliError::usage(format!("--count does not apply to {}", suite.name())));
    }
    let max_weight = a.max_weight.as_deref().or(suite.default_max_weight()).map(|w| parse_num::<u32>("max-weight", w)).transpose()?.unwrap_or(0);
    let count = a.count.as_deref().or(suite.default_count()).map(|c| parse_num::<usize>("count", c)).transpose()?;
    let plan = mc_plan(&a.mc)?;
    let outcome: SuiteOutcome = match suite {
        Suite::AltOrthonormal => suites::alt_orthonormal(n, max_weight)?,
        Suite::InvOrthonormal => suites::inv_orthonormal(n, max_weight)?,
        Suite::Unitarity => suites::unitarity(n, max_weight)?,
        Suite::Diffop => suites::diffop(n, parse_num::<u32>("max-degree", &a.max_degree)?)?,
        Suite::Fourier => suites::fourier(n, max_weight, count.unwrap_or(0), plan.seed)?,
        Suite::Ginibre => suites::ginibre(n, &plan)?,
        Suite::Reproducing => suites::reproducing(n, max_weight, count.unwrap_or(0), plan.seed)?,
    };
    let mut summary = format!("verify {} (n = {n})\n", suite.name());
    for c in &outcome.checks {
        let _ = writeln!(summary, "{:<16} {}  {}", c.name, if c.pass { "ok" } else { "FAIL" }, c.detail);
    }
    let mut results = outcome.results;
    results["suite"] = json!(suite.name());
    Ok(Outcome { results, checks: outcome.checks, summary })
}

fn cmd_schur(a: &SchurArgs) -> Result<Outcome, CliError> {
    let lambda: Partition = a.lambda.parse()?;
    let n = a.n.as_deref().map(|s| parse_positive("n", s)).transpose()?;
    if a.eigs.is_none() && !a.exact && !a.power_sums {
        return Err(CliError::usage("schur needs --eigs, --exact or --power-sums"));
    }
    let mut results = serde_json::Map::new();
    results.insert("lambda".into(), json!(partition_label(&lambda)));
    let mut summary = format!("s_{}\n", partition_label(&lambda));
    let eigs = a
        .eigs
        .as_deref()
        .map(|s| s.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    if let (Some(e), Some(n)) = (&eigs, n) {
        if e.len() != n {
            return Err(CliError::usage(format!("--eigs has {} entries but --n is {n}", e.len())));
        }
    }
    let dim = n.or(eigs.as_ref().map(Vec::len));
    if let Some(d) = dim {
        if lambda.length() > d {
            return Err(hciz_core::Error::PartitionTooLong { len: lambda.length(), n: d }.into());
        }
    }
    if let Some(e) = &eigs {
        let v = schur_numeric(&lambda, e);
        results.insert("value".into(), complex_json(v));
        let _ = writeln!(summary, "value       {}", fmt_complex(v));
    }
    if a.exact {
        let d = dim.ok_or_else(|| CliError::usage("--exact needs --n or --eigs"))?;
        let p = schur_exact(&lambda, d)?;
        let pretty = Named(&p, 'x').to_string();
        results.insert("exact".into(), json!({ "n": d, "canonical": p.to_string(), "text": pretty }));
        let _ = writeln!(summary, "exact       {pretty}");
    }
    if a.power_sums {
        let ps = schur_to_power_sums(&lambda).to_string();
        results.insert("power_sums".into(), json!(ps));
        let _ = writeln!(summary, "power sums  {ps}");
    }
    Ok(Outcome { results: Value::Object(results), checks: Vec::new(), summary })
}

fn cmd_fourier(a: &FourierArgs) -> Result<Outcome, CliError> {
    let f: TracePoly = parse_trace_poly(&a.f)?;
    let n = parse_positive("n", &a.n)?;
    let max_weight = match &a.max_weight {
        Some(w) => parse_num::<u32>("max-weight", w)?,
        None => f.weighted_degree().unwrap_or(0),
    };
    let (coeffs, on_diagonal, on_entries) = suites::fourier_case(&f, n, max_weight)?;
    let mut summary = format!("F = {f}\n");
    for (l, c) in &coeffs {
        let _ = writeln!(summary, "f_{:<10} {c}", partition_label(l));
    }
    let checks = vec![
        Check::new("round_trip_diagonal", on_diagonal, "sum of f_λ s_λ equals F on diagonal matrices"),
        Check::new("round_trip_entries", on_entries, "sum of f_λ χ_λ equals F in the matrix entries"),
    ];
    Ok(Outcome {
        results: json!({
            "F": f.to_string(),
            "n": n,
            "max_weight": max_weight,
            "coefficients": suites::coefficients_json(&coeffs),
            "round_trip": on_diagonal && on_entries,
        }),
        checks,
        summary,
    })
}

/// Writes to stdout; a closed pipe is not an error.
fn print_stdout(text: &str) -> Result<(), CliError> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io { path: "<stdout>".into(), source: e }),
        _ => Ok(()),
    }
}

fn emit(report: &Report, output: Option<&PathBuf>) -> Result<(), CliError> {
    let text = report.to_json();
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => print_stdout(&text),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run(args: Vec<OsString>) -> i32 {
    let start = Instant::now();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let _ = e.print();
            let command = args.get(1).map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let message = e.render().to_string();
            let err = CliError::usage(message.lines().next().unwrap_or("usage error").trim_start_matches("error: "));
            let _ = print_stdout(&Report::failure(&command, BTreeMap::new(), &err).to_json());
            return err.exit_code();
        }
    };

    let (name, inputs) = inputs_of(&cli.command);
    let outcome = cli
        .threads
        .as_deref()
        .map(|t| parse_positive("threads", t))
        .transpose()
        .and_then(|threads| par::thread_pool(threads).map_err(|e| CliError::usage(format!("cannot start threads: {e}"))))
        .and_then(|pool| {
            pool.install(|| match &cli.command {
                Command::Eval(a) => cmd_eval(a),
                Command::Verify(a) => cmd_verify(a),
                Command::Schur(a) => cmd_schur(a),
                Command::Fourier(a) => cmd_fourier(a),
            })
        });

    let mut report = match outcome {
        Ok(o) => {
            if !cli.quiet {
                eprint!("{}", o.summary);
            }
            Report::new(name, inputs.clone(), o.results, o.checks)
        }
        Err(e) => {
            if !cli.quiet {
                eprintln!("error: {e}");
            }
            Report::failure(name, inputs.clone(), &e)
        }
    };
    report.timing.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    if let Err(e) = emit(&report, cli.output.as_ref()) {
        eprintln!("error: {e}");
        let failure = Report::failure(name, inputs, &e);
        let _ = print_stdout(&failure.to_json());
        return e.exit_code();
    }
    if !cli.quiet {
        eprintln!("{}", if report.exit_code() == 0 { "PASS" } else { "FAIL" });
    }
    report.exit_code()
}
