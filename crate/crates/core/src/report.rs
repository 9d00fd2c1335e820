//! Stable, serializable report of an analysis run.
//!
//! Exact values travel as decimal numerator/denominator strings so nothing is
//! lost to floating point; certified numeric values travel as floats.  The
//! layout is versioned through the `format` field.

use crate::analyze::{
    Analysis, AnalyzeOptions, EigenAdmissibility, Obstruction, PointAnalysis, PointLocation,
    Status, Verdict,
};
use crate::first_integrals::{SearchConfig, SearchOutcome};
use crate::potential::Potential;
use crate::rational::GaussianRational;
use crate::spectral::{EigenInfo, SpectralValue};
use crate::table::TableMatch;
use crate::variational::{
    alpha1_certificate, galois_class, kummer_parameters, phase_curve_solution,
    solution_self_moment, GaloisClass,
};
use num::complex::Complex64;
use num::{BigRational, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub const REPORT_FORMAT: &str = "integrability-report/v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub tool: ToolInfo,
    pub input: InputInfo,
    pub config: ConfigInfo,
    pub config_hash: String,
    pub analysis: AnalysisInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificates: Option<Vec<CertificateInfo>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrals: Option<IntegralsInfo>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    pub name: String,
    pub variables: Vec<String>,
    pub expression: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigInfo {
    pub starts: usize,
    pub seed: u64,
    pub certify_tolerance: f64,
    pub rank_tolerance: f64,
    pub force_numeric: bool,
    pub check_table: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisInfo {
    pub continuum: bool,
    pub points: Vec<PointInfo>,
    pub verdict: VerdictInfo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointInfo {
    pub location: LocationInfo,
    pub eigenvalues: Vec<EigenvalueInfo>,
    pub semisimple: Option<bool>,
    pub all_integer: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub admissibility: Vec<AdmissibilityInfo>,
    pub obstructions: Vec<ObstructionInfo>,
    pub indeterminate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LocationInfo {
    Projective {
        slope: ExactValue,
        slope_derivative: ExactValue,
        scale_square: ExactValue,
    },
    Affine {
        coordinates: Vec<ApproxValue>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueInfo {
    pub value: SpectrumValue,
    pub multiplicity: usize,
    pub block_sizes: Vec<usize>,
    pub integer: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumValue {
    Exact(ExactValue),
    Approx(ApproxValue),
}

/// Gaussian rational encoded as numerator/denominator decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactValue {
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxValue {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityInfo {
    pub value: SpectrumValue,
    pub identified: Option<String>,
    pub rows: Vec<RowMatchInfo>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowMatchInfo {
    pub row: usize,
    pub parameter: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ObstructionInfo {
    NonIntegerEigenvalue { value: SpectrumValue, numeric: bool },
    JordanBlock { value: SpectrumValue, block: usize },
    JordanRowRule {
        value: SpectrumValue,
        block: usize,
        rows: Vec<usize>,
    },
    TableMiss { value: SpectrumValue, numeric: bool },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictInfo {
    pub status: String,
    pub reasons: Vec<ObstructionInfo>,
}

/// Certificate bundle for one eigenvalue of the restricted Hessian: the
/// solution theory of its variational equation along the phase curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateInfo {
    /// The eigenvalue, as an exact rational string.
    pub eigenvalue: String,
    pub galois: String,
    pub galois_dimension: usize,
    pub kummer_a: String,
    pub kummer_c: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionInfo>,
    /// Gaussian self-moment of the solution polynomial (integer eigenvalues
    /// at least 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment: Option<String>,
    /// Whether the second-order correction equation is infeasible in
    /// polynomials (the higher-order obstruction).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_order_obstructed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wronskian_deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_domain_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionInfo {
    /// Exponent of the position prefactor.
    pub q_exponent: u32,
    /// The polynomial part, in the velocity variable.
    pub polynomial: String,
}

/// Summary of an exact first-integral search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralsInfo {
    pub momentum_degree: u32,
    pub pole_order: i64,
    pub degree_cap: i64,
    /// Ansatz dimension examined.
    pub columns: usize,
    /// Dimension of the space of commuting functions found.
    pub dimension: usize,
    /// Rank of the found span beyond powers of the energy.
    pub beyond_energy_powers: usize,
    /// Momentum degrees of the filtered (genuinely new) integrals.
    pub beyond_momentum_degrees: Vec<u32>,
}

fn exact_value(g: &GaussianRational) -> ExactValue {
    ExactValue {
        re: g.re.to_string(),
        im: g.im.to_string(),
    }
}

fn approx_value(z: Complex64) -> ApproxValue {
    ApproxValue { re: z.re, im: z.im }
}

fn spectrum_value(v: &SpectralValue) -> SpectrumValue {
    match v {
        SpectralValue::Exact(g) => SpectrumValue::Exact(exact_value(g)),
        SpectralValue::Numeric(z) => SpectrumValue::Approx(approx_value(*z)),
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Hold => "hold",
        Status::NonIntegrable => "non-integrable",
        Status::Indeterminate => "indeterminate",
        Status::NotApplicable => "not-applicable",
    }
}

fn obstruction_info(o: &Obstruction) -> ObstructionInfo {
    match o {
        Obstruction::NonIntegerEigenvalue { value, numeric } => {
            ObstructionInfo::NonIntegerEigenvalue {
                value: spectrum_value(value),
                numeric: *numeric,
            }
        }
        Obstruction::JordanBlock { value, block } => ObstructionInfo::JordanBlock {
            value: spectrum_value(value),
            block: *block,
        },
        Obstruction::JordanRowRule { value, block, rows } => ObstructionInfo::JordanRowRule {
            value: spectrum_value(value),
            block: *block,
            rows: rows.clone(),
        },
        Obstruction::TableMiss { value, numeric } => ObstructionInfo::TableMiss {
            value: spectrum_value(value),
            numeric: *numeric,
        },
    }
}

fn eigen_info(e: &EigenInfo) -> EigenvalueInfo {
    EigenvalueInfo {
        value: spectrum_value(&e.value),
        multiplicity: e.multiplicity,
        block_sizes: e.block_sizes.clone(),
        integer: e.is_integer,
    }
}

fn admissibility_info(a: &EigenAdmissibility) -> AdmissibilityInfo {
    AdmissibilityInfo {
        value: spectrum_value(&a.value),
        identified: a.identified.as_ref().map(BigRational::to_string),
        rows: a
            .matches
            .iter()
            .map(|m: &TableMatch| RowMatchInfo {
                row: m.row,
                parameter: m.p,
            })
            .collect(),
    }
}

fn point_info(p: &PointAnalysis) -> PointInfo {
    let location = match &p.location {
        PointLocation::Projective(pd) => LocationInfo::Projective {
            slope: exact_value(&pd.z_star),
            slope_derivative: exact_value(&pd.v1),
            scale_square: exact_value(&pd.x_star_sq),
        },
        PointLocation::Affine(coords) => LocationInfo::Affine {
            coordinates: coords.iter().map(|&z| approx_value(z)).collect(),
        },
    };
    PointInfo {
        location,
        eigenvalues: p.spectral.eigenvalues.iter().map(eigen_info).collect(),
        semisimple: p.spectral.semisimple,
        all_integer: p.spectral.all_integer,
        admissibility: p.admissibility.iter().map(admissibility_info).collect(),
        obstructions: p.obstructions.iter().map(obstruction_info).collect(),
        indeterminate: p.indeterminate,
    }
}

fn verdict_info(v: &Verdict) -> VerdictInfo {
    VerdictInfo {
        status: status_name(v.status).to_string(),
        reasons: v.reasons.iter().map(obstruction_info).collect(),
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

pub fn config_info(opts: &AnalyzeOptions) -> ConfigInfo {
    ConfigInfo {
        starts: opts.starts,
        seed: opts.rng_seed,
        certify_tolerance: opts.certify_tol,
        rank_tolerance: opts.rank_rel_tol,
        force_numeric: opts.force_numeric,
        check_table: opts.check_table,
    }
}

pub fn config_hash(cfg: &ConfigInfo) -> String {
    let canonical = format!(
        "starts={};seed={};certify={:e};rank={:e};numeric={};table={}",
        cfg.starts,
        cfg.seed,
        cfg.certify_tolerance,
        cfg.rank_tolerance,
        cfg.force_numeric,
        cfg.check_table
    );
    format!("{:016x}", fnv1a(canonical.as_bytes()))
}

/// Symbolic certificate for a real rational eigenvalue; `None` when the
/// eigenvalue is not a real rational.
pub fn build_certificate(lambda: &GaussianRational) -> Option<CertificateInfo> {
    let rational = lambda.as_rational()?;
    let class = galois_class(lambda);
    let (a, c) = kummer_parameters(lambda);
    let mut info = CertificateInfo {
        eigenvalue: rational.to_string(),
        galois: match class {
            GaloisClass::FullSpecialLinear => "full-special-linear".to_string(),
            GaloisClass::ReducibleAbelian => "reducible-abelian".to_string(),
        },
        galois_dimension: class.dimension(),
        kummer_a: a.as_rational().expect("real eigenvalue").to_string(),
        kummer_c: c.as_rational().expect("constant").to_string(),
        solution: None,
        moment: None,
        second_order_obstructed: None,
        wronskian_deviation: None,
        time_domain_deviation: None,
    };
    if let Some(n) = lambda.to_integer().and_then(|n| n.to_i64()) {
        let sol = phase_curve_solution(n);
        info.solution = Some(SolutionInfo {
            q_exponent: sol.q_exponent,
            polynomial: sol.poly.to_string(),
        });
        if n >= 1 {
            info.moment = Some(solution_self_moment(n).to_string());
            info.second_order_obstructed = Some(alpha1_certificate(n).is_none());
        }
    }
    Some(info)
}

pub fn build_integrals(cfg: &SearchConfig, outcome: &SearchOutcome) -> IntegralsInfo {
    IntegralsInfo {
        momentum_degree: cfg.momentum_degree,
        pole_order: cfg.pole_order,
        degree_cap: cfg.degree_cap,
        columns: outcome.columns,
        dimension: outcome.basis.len(),
        beyond_energy_powers: outcome.beyond_energy_powers,
        beyond_momentum_degrees: outcome
            .beyond_basis
            .iter()
            .map(|f| f.momentum_degree())
            .collect(),
    }
}

pub fn build_report(
    name: &str,
    tool_version: &str,
    v: &Potential,
    opts: &AnalyzeOptions,
    analysis: &Analysis,
) -> Report {
    let config = config_info(opts);
    let config_hash = config_hash(&config);
    Report {
        format: REPORT_FORMAT.to_string(),
        tool: ToolInfo {
            name: "zerok".to_string(),
            version: tool_version.to_string(),
        },
        input: InputInfo {
            name: name.to_string(),
            variables: v.varnames.clone(),
            expression: v.display(),
            degree: v.degree,
        },
        config,
        config_hash,
        analysis: AnalysisInfo {
            continuum: analysis.continuum,
            points: analysis.points.iter().map(point_info).collect(),
            verdict: verdict_info(&analysis.verdict),
        },
        certificates: None,
        integrals: None,
    }
}

fn fmt_exact(v: &ExactValue) -> String {
    match (v.re.as_str(), v.im.as_str()) {
        (re, "0") => re.to_string(),
        ("0", im) => format!("{im}i"),
        (re, im) if im.starts_with('-') => format!("{re}{im}i"),
        (re, im) => format!("{re}+{im}i"),
    }
}

fn fmt_spectrum(v: &SpectrumValue) -> String {
    match v {
        SpectrumValue::Exact(e) => fmt_exact(e),
        SpectrumValue::Approx(a) => {
            if a.im == 0.0 {
                format!("{:.6}", a.re)
            } else {
                format!("{:.6}{:+.6}i", a.re, a.im)
            }
        }
    }
}

fn fmt_obstruction(o: &ObstructionInfo) -> String {
    match o {
        ObstructionInfo::NonIntegerEigenvalue { value, .. } => {
            format!("eigenvalue {} is not an integer", fmt_spectrum(value))
        }
        ObstructionInfo::JordanBlock { value, block } => format!(
            "eigenvalue {} carries a Jordan block of size {}",
            fmt_spectrum(value),
            block
        ),
        ObstructionInfo::JordanRowRule { value, block, rows } => format!(
            "eigenvalue {} has a size-{} block but only fits rows {:?}",
            fmt_spectrum(value),
            block,
            rows
        ),
        ObstructionInfo::TableMiss { value, .. } => format!(
            "eigenvalue {} belongs to no admissible family",
            fmt_spectrum(value)
        ),
    }
}

/// Human-readable rendering of a report.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}  (degree {})", report.input.name, report.input.degree);
    let _ = writeln!(
        out,
        "  V({}) = {}",
        report.input.variables.join(", "),
        report.input.expression
    );
    if report.analysis.continuum {
        let _ = writeln!(out, "  fixed directions form a continuum");
    }
    for (idx, point) in report.analysis.points.iter().enumerate() {
        match &point.location {
            LocationInfo::Projective {
                slope,
                slope_derivative,
                ..
            } => {
                let _ = writeln!(
                    out,
                    "  point {}: slope {} (derivative {})",
                    idx + 1,
                    fmt_exact(slope),
                    fmt_exact(slope_derivative)
                );
            }
            LocationInfo::Affine { coordinates } => {
                let coords: Vec<String> = coordinates
                    .iter()
                    .map(|c| format!("{:.6}{:+.6}i", c.re, c.im))
                    .collect();
                let _ = writeln!(out, "  point {}: ({})", idx + 1, coords.join(", "));
            }
        }
        for e in &point.eigenvalues {
            let blocks = if e.block_sizes.is_empty() {
                "undetermined".to_string()
            } else {
                format!("{:?}", e.block_sizes)
            };
            let _ = writeln!(
                out,
                "    eigenvalue {} x{}  blocks {}",
                fmt_spectrum(&e.value),
                e.multiplicity,
                blocks
            );
        }
        for a in &point.admissibility {
            let rows: Vec<String> = a
                .rows
                .iter()
                .map(|r| match r.parameter {
                    Some(p) => format!("row {} (p = {})", r.row, p),
                    None => format!("row {}", r.row),
                })
                .collect();
            let _ = writeln!(
                out,
                "    admissibility of {}: {}",
                fmt_spectrum(&a.value),
                if rows.is_empty() {
                    "no family".to_string()
                } else {
                    rows.join(", ")
                }
            );
        }
        for o in &point.obstructions {
            let _ = writeln!(out, "    obstruction: {}", fmt_obstruction(o));
        }
        if point.indeterminate {
            let _ = writeln!(out, "    some conditions could not be settled numerically");
        }
    }
    let _ = writeln!(out, "  verdict: {}", report.analysis.verdict.status);
    for r in &report.analysis.verdict.reasons {
        let _ = writeln!(out, "    because {}", fmt_obstruction(r));
    }
    if let Some(certs) = &report.certificates {
        for c in certs {
            let _ = writeln!(out, "  certificate for eigenvalue {}:", c.eigenvalue);
            let _ = writeln!(
                out,
                "    Galois class {} (dimension {})",
                c.galois, c.galois_dimension
            );
            let _ = writeln!(
                out,
                "    Kummer parameters a = {}, c = {}",
                c.kummer_a, c.kummer_c
            );
            if let Some(s) = &c.solution {
                let _ = writeln!(
                    out,
                    "    solution q^{} * P with P = {}",
                    s.q_exponent, s.polynomial
                );
            }
            if let Some(m) = &c.moment {
                let _ = writeln!(out, "    solution self-moment {m}");
            }
            if let Some(o) = c.second_order_obstructed {
                let _ = writeln!(
                    out,
                    "    second-order correction {}",
                    if o { "infeasible (obstruction)" } else { "feasible" }
                );
            }
            if let Some(w) = c.wronskian_deviation {
                let _ = writeln!(out, "    Wronskian constancy deviation {w:.3e}");
            }
            if let Some(t) = c.time_domain_deviation {
                let _ = writeln!(out, "    time-domain solution deviation {t:.3e}");
            }
        }
    }
    if let Some(fi) = &report.integrals {
        let _ = writeln!(
            out,
            "  integral search: momentum degree {}, box [-{}, {}], {} columns",
            fi.momentum_degree, fi.pole_order, fi.degree_cap, fi.columns
        );
        let _ = writeln!(
            out,
            "    commuting space dimension {}, beyond energy powers {}",
            fi.dimension, fi.beyond_energy_powers
        );
        if fi.beyond_momentum_degrees.is_empty() {
            let _ = writeln!(out, "    filtered list empty: only functions of the energy");
        } else {
            let _ = writeln!(
                out,
                "    new integrals at momentum degrees {:?}",
                fi.beyond_momentum_degrees
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::analyze;
    use crate::potential::parse_potential;

    fn sample_report() -> Report {
        let v = parse_potential("q2*(9*q1^2+q2^2)/q1^3", &["q1", "q2"]).unwrap();
        let opts = AnalyzeOptions::default();
        let analysis = analyze(&v, &opts);
        build_report("sample", "0.1.0", &v, &opts, &analysis)
    }

    #[test]
    fn report_round_trips_through_json() {
        let report = sample_report();
        let json = serde_json::to_string_pretty(&report).unwrap();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn report_shape_for_planar_exact_run() {
        let report = sample_report();
        assert_eq!(report.format, REPORT_FORMAT);
        assert_eq!(report.analysis.verdict.status, "hold");
        assert_eq!(report.analysis.points.len(), 2);
        let p = &report.analysis.points[0];
        assert_eq!(p.semisimple, Some(true));
        assert_eq!(p.all_integer, Some(true));
        match &p.eigenvalues[0].value {
            SpectrumValue::Exact(e) => assert_eq!(e.re, "-1"),
            other => panic!("expected exact value, got {other:?}"),
        }
    }

    #[test]
    fn obstructed_run_reports_reasons() {
        let v = parse_potential("q2*(q2-q1)*(q2-2*q1)/q1^3", &["q1", "q2"]).unwrap();
        let opts = AnalyzeOptions::default();
        let analysis = analyze(&v, &opts);
        let report = build_report("generic-member", "0.1.0", &v, &opts, &analysis);
        assert_eq!(report.analysis.verdict.status, "non-integrable");
        assert!(!report.analysis.verdict.reasons.is_empty());
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("jordan-block"));
        let text = render_text(&report);
        assert!(text.contains("verdict: non-integrable"));
        assert!(text.contains("Jordan block"));
    }

    #[test]
    fn config_hash_tracks_config() {
        let a = AnalyzeOptions::default();
        let mut b = AnalyzeOptions::default();
        assert_eq!(config_hash(&config_info(&a)), config_hash(&config_info(&b)));
        b.rng_seed = 7;
        assert_ne!(config_hash(&config_info(&a)), config_hash(&config_info(&b)));
    }

    #[test]
    fn certificates_for_integer_and_fractional_eigenvalues() {
        let five = build_certificate(&GaussianRational::from_int(5)).unwrap();
        assert_eq!(five.galois, "reducible-abelian");
        assert_eq!(five.galois_dimension, 1);
        assert_eq!(five.kummer_a, "-5/2");
        assert_eq!(five.kummer_c, "1/2");
        let sol = five.solution.unwrap();
        assert_eq!(sol.q_exponent, 1);
        assert_eq!(five.moment.as_deref(), Some("24"));
        assert_eq!(five.second_order_obstructed, Some(true));

        let half = build_certificate(&GaussianRational::ratio(1, 2)).unwrap();
        assert_eq!(half.galois, "full-special-linear");
        assert!(half.solution.is_none());

        assert!(build_certificate(&GaussianRational::i()).is_none());
    }

    #[test]
    fn exact_values_survive_textually() {
        let report = sample_report();
        let json = serde_json::to_string(&report).unwrap();
        // x_star^2 = -6i and 6i at the two points
        assert!(json.contains("\"im\":\"-6\"") || json.contains("\"im\":\"6\""));
    }
}
