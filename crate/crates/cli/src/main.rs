//! Command-line front end: analyze potentials, scan parametrized families,
//! and emit variational certificates, as text or versioned JSON.
//!
//! Exit codes: 0 every verdict holds, 3 an obstruction was certified,
//! 4 some verdict is indeterminate or the method does not apply,
//! 1 usage errors, 2 input parse errors.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::{BigRational, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use zerok_core::analyze::{analyze, AnalyzeOptions, Status};
use zerok_core::family::{parse_family, solve_semisimple_locus, FamilyError, PotentialFamily};
use zerok_core::first_integrals::{fi_search, SearchConfig};
use zerok_core::potential::{parse_corpus, parse_potential, Potential};
use zerok_core::rational::GaussianRational;
use zerok_core::report::{
    build_certificate, build_integrals, build_report, render_text, CertificateInfo, ExactValue,
    Report,
};
use zerok_core::variational::{ve_time_deviation, wronskian_deviation_flow, PhaseCurve};
use zerok_core::Complex64;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "zerok", version, about = "Integrability analysis of homogeneous potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one potential or a corpus file for integrability obstructions.
    Analyze(AnalyzeArgs),
    /// Solve or sweep a parametrized family.
    Scan(ScanArgs),
    /// Emit the variational certificate bundle for one eigenvalue.
    Variational(VariationalArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Potential expression, e.g. "q2*(9*q1^2+q2^2)/q1^3".
    #[arg(long)]
    potential: Option<String>,
    /// Comma-separated position variables for --potential.
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Corpus file with `name ; vars ; expression` lines.
    #[arg(long, conflicts_with = "potential")]
    corpus: Option<PathBuf>,
    /// Label used in the report for --potential runs.
    #[arg(long, default_value = "potential")]
    name: String,
    /// Check eigenvalues of nonzero-degree potentials against the
    /// admissibility table.
    #[arg(long)]
    mr_table: bool,
    /// Force the numeric multistart pipeline even for planar degree zero.
    #[arg(long)]
    numeric: bool,
    /// Newton multistart count for the numeric pipeline.
    #[arg(long, default_value_t = 200)]
    seeds: usize,
    /// Certification tolerance for numeric fixed directions.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for all randomized steps.
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Energy level of the phase curve for certificate checks (complex,
    /// e.g. "0", "0.25", "1+0.5i").
    #[arg(long, default_value = "0")]
    epsilon: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Attach variational certificates for every exact rational eigenvalue.
    #[arg(long)]
    certificates: bool,
    /// Attach an exact first-integral search summary.
    #[arg(long)]
    integrals: bool,
    /// Momentum degree bound of the integral search.
    #[arg(long, default_value_t = 4)]
    fi_momentum_degree: u32,
    /// Coefficient box bound of the integral search.
    #[arg(long, default_value_t = 11)]
    fi_box: i64,
}

#[derive(Args)]
struct ScanArgs {
    /// Family expression with $-prefixed parameters, e.g.
    /// "q2*(q2-$a*q1)*(q2-$b*q1)/q1^3".
    #[arg(long)]
    family: String,
    /// Comma-separated position variables.
    #[arg(long, value_delimiter = ',', default_values_t = [String::from("q1"), String::from("q2")])]
    vars: Vec<String>,
    /// Parameter values to sweep as ordered pairs; without this the
    /// semisimplicity constraints are solved exactly instead.
    #[arg(long, value_delimiter = ',')]
    grid: Vec<String>,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VariationalArgs {
    /// Eigenvalue of the restricted Hessian, as a rational, e.g. "5", "-3",
    /// "1/2".
    #[arg(long)]
    lambda: String,
    /// Demand the closed-form polynomial solution (integer eigenvalues only).
    #[arg(long)]
    hermite: bool,
    /// Run numeric Wronskian and time-domain checks (integer eigenvalues).
    #[arg(long)]
    check: bool,
    /// Velocity interval start for the Wronskian check.
    #[arg(long, default_value_t = 0.5)]
    from: f64,
    /// Velocity interval end for the Wronskian check.
    #[arg(long, default_value_t = 2.0)]
    to: f64,
    /// Energy level of the phase curve (complex).
    #[arg(long, default_value = "0")]
    epsilon: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_OBSTRUCTED: u8 = 3;
const EXIT_INDETERMINATE: u8 = 4;

fn status_exit(status: Status) -> u8 {
    match status {
        Status::Hold => EXIT_OK,
        Status::NonIntegrable => EXIT_OBSTRUCTED,
        Status::Indeterminate | Status::NotApplicable => EXIT_INDETERMINATE,
    }
}

fn overall_exit(statuses: impl IntoIterator<Item = Status>) -> u8 {
    let mut worst = EXIT_OK;
    for s in statuses {
        let code = status_exit(s);
        if code == EXIT_OBSTRUCTED {
            return EXIT_OBSTRUCTED;
        }
        worst = worst.max(code);
    }
    worst
}

fn usage_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn parse_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_PARSE
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    if let Ok(re) = t.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Err(format!("cannot parse '{s}' as a complex number"));
    };
    let split = body
        .char_indices()
        .rev()
        .find(|&(k, c)| {
            (c == '+' || c == '-')
                && k > 0
                && !matches!(body.as_bytes()[k - 1], b'e' | b'E')
        })
        .map(|(k, _)| k);
    let (re_str, im_str) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_str.is_empty() {
        0.0
    } else {
        re_str
            .parse::<f64>()
            .map_err(|_| format!("cannot parse '{s}' as a complex number"))?
    };
    let im = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other
            .parse::<f64>()
            .map_err(|_| format!("cannot parse '{s}' as a complex number"))?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_gaussian(s: &str) -> Result<GaussianRational, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let rational = |txt: &str| -> Result<BigRational, String> {
        match txt {
            "" | "+" => Ok(BigRational::from_integer(1.into())),
            "-" => Ok(BigRational::from_integer((-1).into())),
            other => {
                BigRational::from_str(other).map_err(|_| format!("cannot parse rational '{txt}'"))
            }
        }
    };
    if let Some(body) = t.strip_suffix('i') {
        let split = body
            .char_indices()
            .rev()
            .find(|&(k, c)| (c == '+' || c == '-') && k > 0)
            .map(|(k, _)| k);
        let (re_str, im_str) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let re = if re_str.is_empty() {
            BigRational::from_integer(0.into())
        } else {
            rational(re_str)?
        };
        Ok(GaussianRational::new(re, rational(im_str)?))
    } else {
        Ok(GaussianRational::new(
            rational(&t)?,
            BigRational::from_integer(0.into()),
        ))
    }
}

fn fmt_gaussian(g: &GaussianRational) -> String {
    if g.im.is_zero() {
        g.re.to_string()
    } else if g.re.is_zero() {
        format!("{}i", g.im)
    } else if g.im < BigRational::zero() {
        format!("{}{}i", g.re, g.im)
    } else {
        format!("{}+{}i", g.re, g.im)
    }
}

fn exact_value(g: &GaussianRational) -> ExactValue {
    ExactValue {
        re: g.re.to_string(),
        im: g.im.to_string(),
    }
}

fn emit(out: &Option<PathBuf>, payload: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            println!("{payload}");
            Ok(())
        }
    }
}

fn analyze_options(args: &AnalyzeArgs) -> AnalyzeOptions {
    let mut opts = AnalyzeOptions::default();
    opts.force_numeric = args.numeric;
    opts.starts = args.seeds;
    opts.rng_seed = args.seed;
    opts.certify_tol = args.tol;
    opts.check_table = args.mr_table;
    opts
}

fn attach_sections(
    report: &mut Report,
    v: &Potential,
    args: &AnalyzeArgs,
    energy: Complex64,
) {
    if args.certificates {
        let mut seen = std::collections::BTreeSet::new();
        let mut certs: Vec<CertificateInfo> = Vec::new();
        for point in &report.analysis.points {
            for e in &point.eigenvalues {
                let zerok_core::report::SpectrumValue::Exact(val) = &e.value else {
                    continue;
                };
                if val.im != "0" || !seen.insert(val.re.clone()) {
                    continue;
                }
                let g = parse_gaussian(&val.re).expect("report stores valid rationals");
                let Some(mut cert) = build_certificate(&g) else {
                    continue;
                };
                if let Some(n) = cert
                    .solution
                    .is_some()
                    .then(|| val.re.parse::<i64>().ok())
                    .flatten()
                {
                    let curve = PhaseCurve::new(energy);
                    match wronskian_deviation_flow(n, 0.5, 2.0, &curve) {
                        Ok(dev) => cert.wronskian_deviation = Some(dev),
                        Err(e) => eprintln!("note: Wronskian check for {n} failed: {e}"),
                    }
                    match ve_time_deviation(n, 1.0, &curve) {
                        Ok(dev) => cert.time_domain_deviation = Some(dev),
                        Err(e) => eprintln!("note: time-domain check for {n} failed: {e}"),
                    }
                }
                certs.push(cert);
            }
        }
        report.certificates = Some(certs);
    }
    if args.integrals {
        let cfg = SearchConfig {
            momentum_degree: args.fi_momentum_degree,
            pole_order: args.fi_box,
            degree_cap: args.fi_box,
            max_columns: 20_000,
        };
        match fi_search(v, &cfg) {
            Ok(outcome) => report.integrals = Some(build_integrals(&cfg, &outcome)),
            Err(e) => eprintln!("note: integral search skipped: {e}"),
        }
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> u8 {
    let energy = match parse_complex(&args.epsilon) {
        Ok(z) => z,
        Err(e) => return usage_error(&e),
    };
    let opts = analyze_options(&args);

    if let Some(path) = &args.corpus {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return parse_error(&format!("cannot read {}: {e}", path.display())),
        };
        let entries = match parse_corpus(&text) {
            Ok(entries) => entries,
            Err(e) => return parse_error(&e.to_string()),
        };
        let reports: Vec<Report> = entries
            .par_iter()
            .map(|entry| {
                let analysis = analyze(&entry.potential, &opts);
                let mut report =
                    build_report(&entry.name, VERSION, &entry.potential, &opts, &analysis);
                attach_sections(&mut report, &entry.potential, &args, energy);
                report
            })
            .collect();
        let payload = match args.format {
            Format::Json => serde_json::to_string_pretty(&reports).expect("serializable"),
            Format::Text => reports.iter().map(render_text).collect::<Vec<_>>().join("\n"),
        };
        if let Err(e) = emit(&args.out, &payload) {
            return parse_error(&e);
        }
        return overall_exit(reports.iter().map(|r| status_of(&r.analysis.verdict.status)));
    }

    let Some(expr) = &args.potential else {
        return usage_error("pass --potential with --vars, or --corpus");
    };
    if args.vars.is_empty() {
        return usage_error("--potential requires --vars");
    }
    let vars: Vec<&str> = args.vars.iter().map(|s| s.as_str()).collect();
    let v = match parse_potential(expr, &vars) {
        Ok(v) => v,
        Err(e) => return parse_error(&e.to_string()),
    };
    let analysis = analyze(&v, &opts);
    let mut report = build_report(&args.name, VERSION, &v, &opts, &analysis);
    attach_sections(&mut report, &v, &args, energy);
    let payload = match args.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        Format::Text => render_text(&report),
    };
    if let Err(e) = emit(&args.out, &payload) {
        return parse_error(&e);
    }
    status_exit(analysis.verdict.status)
}

fn status_of(name: &str) -> Status {
    match name {
        "hold" => Status::Hold,
        "non-integrable" => Status::NonIntegrable,
        "indeterminate" => Status::Indeterminate,
        _ => Status::NotApplicable,
    }
}

#[derive(Serialize, Deserialize)]
struct ScanSolveReport {
    format: String,
    family: String,
    mode: String,
    sum: ExactValue,
    product: ExactValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parameters: Option<[ExactValue; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reconstructed: Option<Report>,
}

#[derive(Serialize, Deserialize)]
struct ScanGridReport {
    format: String,
    family: String,
    mode: String,
    entries: Vec<ScanGridEntry>,
    rejected: Vec<ScanRejected>,
}

#[derive(Serialize, Deserialize)]
struct ScanGridEntry {
    parameters: [ExactValue; 2],
    report: Report,
}

#[derive(Serialize, Deserialize)]
struct ScanRejected {
    parameters: [ExactValue; 2],
    reason: String,
}

/// Extracts $-prefixed parameter names and strips the sigils.
fn extract_params(text: &str) -> Result<(String, Vec<String>), String> {
    let mut params: Vec<String> = Vec::new();
    let mut rewritten = String::with_capacity(text.len());
    let mut chars = text.char_indices().peekable();
    while let Some((_, c)) = chars.next() {
        if c != '$' {
            rewritten.push(c);
            continue;
        }
        let mut name = String::new();
        while let Some(&(_, n)) = chars.peek() {
            if n.is_alphanumeric() || n == '_' {
                name.push(n);
                chars.next();
            } else {
                break;
            }
        }
        if name.is_empty() || !name.chars().next().unwrap().is_alphabetic() {
            return Err("'$' must introduce a parameter name".into());
        }
        if !params.contains(&name) {
            params.push(name.clone());
        }
        rewritten.push_str(&name);
    }
    Ok((rewritten, params))
}

fn family_error_exit(e: &FamilyError) -> u8 {
    parse_error(&e.to_string())
}

fn cmd_scan(args: ScanArgs) -> u8 {
    let (rewritten, params) = match extract_params(&args.family) {
        Ok(pair) => pair,
        Err(e) => return usage_error(&e),
    };
    if params.len() != 2 {
        return usage_error("the family must name exactly two $-parameters");
    }
    let vars: Vec<&str> = args.vars.iter().map(|s| s.as_str()).collect();
    let param_refs: Vec<&str> = params.iter().map(|s| s.as_str()).collect();
    let family = match parse_family(&rewritten, &vars, &param_refs) {
        Ok(f) => f,
        Err(e) => return family_error_exit(&e),
    };

    if args.grid.is_empty() {
        return scan_solve(&args, &family);
    }
    scan_grid(&args, &family)
}

fn scan_solve(args: &ScanArgs, family: &PotentialFamily) -> u8 {
    let locus = match solve_semisimple_locus(family) {
        Ok(l) => l,
        Err(e) => return family_error_exit(&e),
    };
    let opts = AnalyzeOptions {
        rng_seed: args.seed,
        ..AnalyzeOptions::default()
    };
    let mut reconstructed = None;
    let mut status = Status::Hold;
    if let Some((a, b)) = &locus.parameters {
        match family.member(&[a.clone(), b.clone()]) {
            Ok(member) => {
                let analysis = analyze(&member, &opts);
                status = analysis.verdict.status;
                reconstructed = Some(build_report(
                    "reconstructed",
                    VERSION,
                    &member,
                    &opts,
                    &analysis,
                ));
            }
            Err(e) => return family_error_exit(&e),
        }
    }
    let payload = match args.format {
        Format::Json => {
            let doc = ScanSolveReport {
                format: "family-scan/v1".to_string(),
                family: args.family.clone(),
                mode: "solve".to_string(),
                sum: exact_value(&locus.sum),
                product: exact_value(&locus.product),
                parameters: locus
                    .parameters
                    .as_ref()
                    .map(|(a, b)| [exact_value(a), exact_value(b)]),
                reconstructed,
            };
            serde_json::to_string_pretty(&doc).expect("serializable")
        }
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "semisimplicity at both singular directions requires:\n  {} + {} = {}\n  {} * {} = {}\n",
                family.param_names[0],
                family.param_names[1],
                fmt_gaussian(&locus.sum),
                family.param_names[0],
                family.param_names[1],
                fmt_gaussian(&locus.product),
            ));
            match &locus.parameters {
                Some((a, b)) => {
                    out.push_str(&format!(
                        "parameter pair: {{{}, {}}}\n",
                        fmt_gaussian(a),
                        fmt_gaussian(b)
                    ));
                }
                None => out.push_str("parameter pair does not split over the Gaussian rationals\n"),
            }
            if let Some(r) = &reconstructed {
                out.push_str(&format!("reconstructed potential: {}\n", r.input.expression));
                out.push('\n');
                out.push_str(&render_text(r));
            }
            out
        }
    };
    if let Err(e) = emit(&args.out, &payload) {
        return parse_error(&e);
    }
    status_exit(status)
}

fn scan_grid(args: &ScanArgs, family: &PotentialFamily) -> u8 {
    let mut values = Vec::new();
    for raw in &args.grid {
        match parse_gaussian(raw) {
            Ok(g) => values.push(g),
            Err(e) => return usage_error(&e),
        }
    }
    let opts = AnalyzeOptions {
        rng_seed: args.seed,
        ..AnalyzeOptions::default()
    };
    let mut pairs = Vec::new();
    let mut rejected = Vec::new();
    for a in &values {
        for b in &values {
            if a == b {
                rejected.push(ScanRejected {
                    parameters: [exact_value(a), exact_value(b)],
                    reason: "degenerate: equal parameters".to_string(),
                });
            } else {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    let mut entries = Vec::new();
    let mut statuses = Vec::new();
    for (a, b) in &pairs {
        let member = match family.member(&[a.clone(), b.clone()]) {
            Ok(m) => m,
            Err(e) => return family_error_exit(&e),
        };
        let analysis = analyze(&member, &opts);
        statuses.push(analysis.verdict.status);
        let name = format!(
            "{}={}, {}={}",
            family.param_names[0],
            fmt_gaussian(a),
            family.param_names[1],
            fmt_gaussian(b)
        );
        entries.push(ScanGridEntry {
            parameters: [exact_value(a), exact_value(b)],
            report: build_report(&name, VERSION, &member, &opts, &analysis),
        });
    }
    let payload = match args.format {
        Format::Json => {
            let doc = ScanGridReport {
                format: "family-scan/v1".to_string(),
                family: args.family.clone(),
                mode: "grid".to_string(),
                entries,
                rejected,
            };
            serde_json::to_string_pretty(&doc).expect("serializable")
        }
        Format::Text => {
            let mut out = String::new();
            for e in &entries {
                out.push_str(&format!(
                    "{} -> {}\n",
                    e.report.input.name, e.report.analysis.verdict.status
                ));
            }
            for r in &rejected {
                out.push_str(&format!(
                    "{}={}, {}={} -> rejected ({})\n",
                    family.param_names[0],
                    r.parameters[0].re,
                    family.param_names[1],
                    r.parameters[1].re,
                    r.reason
                ));
            }
            out
        }
    };
    if let Err(e) = emit(&args.out, &payload) {
        return parse_error(&e);
    }
    overall_exit(statuses)
}

#[derive(Serialize, Deserialize)]
struct CertificateBundle {
    format: String,
    certificate: CertificateInfo,
}

fn cmd_variational(args: VariationalArgs) -> u8 {
    let lambda = match parse_gaussian(&args.lambda) {
        Ok(g) => g,
        Err(e) => return usage_error(&e),
    };
    if lambda.as_rational().is_none() {
        return usage_error("the eigenvalue must be a real rational");
    }
    let integer = lambda.to_integer().and_then(|n| n.to_i64());
    if args.hermite && integer.is_none() {
        return usage_error(
            "closed-form polynomial solutions exist only for integer eigenvalues; \
             non-integer eigenvalues force the full non-abelian Galois group",
        );
    }
    let mut cert = build_certificate(&lambda).expect("real rational eigenvalue");
    if args.check {
        let Some(n) = integer else {
            return usage_error("numeric checks need the integer closed form");
        };
        let energy = match parse_complex(&args.epsilon) {
            Ok(z) => z,
            Err(e) => return usage_error(&e),
        };
        if args.from >= args.to {
            return usage_error("--from must be below --to");
        }
        let curve = PhaseCurve::new(energy);
        match wronskian_deviation_flow(n, args.from, args.to, &curve) {
            Ok(dev) => cert.wronskian_deviation = Some(dev),
            Err(e) => return parse_error(&format!("Wronskian check failed: {e}")),
        }
        match ve_time_deviation(n, 1.0, &curve) {
            Ok(dev) => cert.time_domain_deviation = Some(dev),
            Err(e) => return parse_error(&format!("time-domain check failed: {e}")),
        }
    }
    let payload = match args.format {
        Format::Json => {
            let doc = CertificateBundle {
                format: "certificates/v1".to_string(),
                certificate: cert,
            };
            serde_json::to_string_pretty(&doc).expect("serializable")
        }
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!("eigenvalue {}\n", cert.eigenvalue));
            out.push_str(&format!(
                "Galois class: {} (dimension {})\n",
                cert.galois, cert.galois_dimension
            ));
            out.push_str(&format!(
                "Kummer parameters: a = {}, c = {}\n",
                cert.kummer_a, cert.kummer_c
            ));
            if let Some(s) = &cert.solution {
                out.push_str(&format!(
                    "solution: q^{} * P(p) with P = {}\n",
                    s.q_exponent, s.polynomial
                ));
            }
            if let Some(m) = &cert.moment {
                out.push_str(&format!("solution self-moment: {m}\n"));
            }
            if let Some(o) = cert.second_order_obstructed {
                out.push_str(&format!(
                    "second-order correction: {}\n",
                    if o { "infeasible (obstruction)" } else { "feasible" }
                ));
            }
            if let Some(w) = cert.wronskian_deviation {
                out.push_str(&format!("Wronskian constancy deviation: {w:.3e}\n"));
            }
            if let Some(t) = cert.time_domain_deviation {
                out.push_str(&format!("time-domain solution deviation: {t:.3e}\n"));
            }
            out
        }
    };
    if let Err(e) = emit(&args.out, &payload) {
        return parse_error(&e);
    }
    EXIT_OK
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("ZERO_K_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Variational(args) => cmd_variational(args),
    };
    ExitCode::from(code)
}
