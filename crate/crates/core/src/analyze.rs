//! The end-to-end analyzer: Darboux points, spectra, and the integrability
//! verdict they force.
//!
//! The verdict encodes necessary conditions only.  `NonIntegrable` means an
//! obstruction was established; `Hold` means every check passed, which proves
//! nothing beyond the absence of these particular obstructions.

use crate::darboux::{darboux_2d, darboux_nd, DarbouxSet, ProjectiveDarboux};
use crate::potential::Potential;
use crate::spectral::{
    analyze_exact, analyze_numeric, planar_hessian, planar_semisimple_defect, EigenInfo,
    SpectralData, SpectralValue,
};
use crate::table::{table_membership, table_membership_numeric, TableMatch};
use num::complex::Complex64;
use num::BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Copy)]
pub enum Status {
    /// All necessary conditions hold.
    Hold,
    /// An obstruction to integrability was established.
    NonIntegrable,
    /// Numerics could not settle every condition.
    Indeterminate,
    /// The method does not apply (no proper Darboux point to test).
    NotApplicable,
}

/// One established obstruction, carrying the data behind the claim.
#[derive(Clone, Debug, PartialEq)]
pub enum Obstruction {
    /// Degree zero requires every Hessian eigenvalue to be an integer.
    NonIntegerEigenvalue { value: SpectralValue, numeric: bool },
    /// Degree zero requires the Hessian to be semisimple.
    JordanBlock { value: SpectralValue, block: usize },
    /// Nonzero degree: a size-3 block is fatal, and a size-2 block demands an
    /// eigenvalue from one of the non-trivial table families.
    JordanRowRule {
        value: SpectralValue,
        block: usize,
        rows: Vec<usize>,
    },
    /// Nonzero degree: the eigenvalue sits in no admissible family.
    TableMiss { value: SpectralValue, numeric: bool },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub reasons: Vec<Obstruction>,
}

/// Where a Darboux point lives in the report.
#[derive(Clone, Debug, PartialEq)]
pub enum PointLocation {
    /// Exact planar projective data.
    Projective(ProjectiveDarboux),
    /// Certified affine coordinates.
    Affine(Vec<Complex64>),
}

/// Table verdict for one eigenvalue (nonzero degree only).
#[derive(Clone, Debug, PartialEq)]
pub struct EigenAdmissibility {
    pub value: SpectralValue,
    pub identified: Option<BigRational>,
    pub matches: Vec<TableMatch>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointAnalysis {
    pub location: PointLocation,
    pub spectral: SpectralData,
    pub admissibility: Vec<EigenAdmissibility>,
    pub obstructions: Vec<Obstruction>,
    pub indeterminate: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    pub degree: i64,
    pub nvars: usize,
    pub continuum: bool,
    pub points: Vec<PointAnalysis>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    /// Use the Newton/numeric pipeline even where an exact one exists.
    pub force_numeric: bool,
    /// Newton multistart count.
    pub starts: usize,
    /// Seed for every stochastic choice; fixed seed + fixed input = fixed output.
    pub rng_seed: u64,
    /// Residual bound certifying a Darboux point.
    pub certify_tol: f64,
    /// Relative tolerance for numeric rank decisions.
    pub rank_rel_tol: f64,
    /// Check eigenvalues against the admissible families for nonzero degree.
    pub check_table: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            force_numeric: false,
            starts: 200,
            rng_seed: 2024,
            certify_tol: 1e-9,
            rank_rel_tol: 1e-8,
            check_table: true,
        }
    }
}

/// Runs the full necessary-condition pipeline on one potential.
pub fn analyze(v: &Potential, opts: &AnalyzeOptions) -> Analysis {
    let k = v.degree;
    let n = v.nvars();

    if k == 0 && n == 2 && !opts.force_numeric {
        return analyze_planar_exact(v, opts);
    }

    match darboux_nd(v, opts.starts, opts.rng_seed, opts.certify_tol) {
        DarbouxSet::Continuum => Analysis {
            degree: k,
            nvars: n,
            continuum: true,
            points: Vec::new(),
            // V'(q) = q forces degree 2, whose table admits everything
            verdict: Verdict {
                status: Status::Hold,
                reasons: Vec::new(),
            },
        },
        DarbouxSet::Points(points) if points.is_empty() => Analysis {
            degree: k,
            nvars: n,
            continuum: false,
            points: Vec::new(),
            verdict: Verdict {
                status: Status::NotApplicable,
                reasons: Vec::new(),
            },
        },
        DarbouxSet::Points(points) => {
            let hess = v.hessian();
            let mut analyses = Vec::new();
            for d in points {
                let matrix = match hess.eval_complex(&d) {
                    Some(m) => m,
                    None => continue,
                };
                let spectral = analyze_numeric(&matrix, opts.rank_rel_tol);
                let pa = classify_point(k, PointLocation::Affine(d), spectral, opts);
                analyses.push(pa);
            }
            finish(k, n, analyses)
        }
    }
}

fn analyze_planar_exact(v: &Potential, opts: &AnalyzeOptions) -> Analysis {
    let projective = darboux_2d(v);
    if projective.is_empty() {
        return Analysis {
            degree: 0,
            nvars: 2,
            continuum: false,
            points: Vec::new(),
            verdict: Verdict {
                status: Status::NotApplicable,
                reasons: Vec::new(),
            },
        };
    }
    let mut analyses = Vec::new();
    for pd in projective {
        let h = planar_hessian(v, &pd);
        debug_assert_eq!(
            planar_semisimple_defect(v, &pd).is_zero(),
            h.add(&crate::matrix::QiMatrix::identity(2)).rank() == 0
        );
        let spectral = analyze_exact(&h);
        let pa = classify_point(0, PointLocation::Projective(pd), spectral, opts);
        analyses.push(pa);
    }
    finish(0, 2, analyses)
}

fn classify_point(
    k: i64,
    location: PointLocation,
    spectral: SpectralData,
    opts: &AnalyzeOptions,
) -> PointAnalysis {
    let numeric = matches!(location, PointLocation::Affine(_));
    let mut obstructions = Vec::new();
    let mut indeterminate = spectral.indeterminate;

    if k == 0 {
        for e in &spectral.eigenvalues {
            match e.is_integer {
                Some(false) => obstructions.push(Obstruction::NonIntegerEigenvalue {
                    value: e.value.clone(),
                    numeric,
                }),
                Some(true) => {}
                None => indeterminate = true,
            }
        }
        match spectral.semisimple {
            Some(false) => {
                let worst = worst_block(&spectral.eigenvalues)
                    .expect("a non-semisimple matrix has a block of size > 1");
                obstructions.push(Obstruction::JordanBlock {
                    value: worst.0,
                    block: worst.1,
                });
            }
            Some(true) => {}
            None => indeterminate = true,
        }
        return PointAnalysis {
            location,
            spectral,
            admissibility: Vec::new(),
            obstructions,
            indeterminate,
        };
    }

    // nonzero degree: table membership plus block-size rules
    let mut admissibility = Vec::new();
    if opts.check_table {
        for e in &spectral.eigenvalues {
            let (identified, matches) = match &e.value {
                SpectralValue::Exact(q) => match q.as_rational() {
                    Some(r) => (Some(r.clone()), table_membership(k, r)),
                    None => (None, Vec::new()),
                },
                SpectralValue::Numeric(z) => match table_membership_numeric(k, *z) {
                    Some((r, m)) => (Some(r), m),
                    None => (None, Vec::new()),
                },
            };
            if matches.is_empty() {
                obstructions.push(Obstruction::TableMiss {
                    value: e.value.clone(),
                    numeric,
                });
            }
            if k.abs() != 2 {
                if let Some(&block) = e.block_sizes.first() {
                    if block >= 3 {
                        obstructions.push(Obstruction::JordanRowRule {
                            value: e.value.clone(),
                            block,
                            rows: matches.iter().map(|m| m.row).collect(),
                        });
                    } else if block == 2 && matches.iter().all(|m| m.row <= 2) {
                        obstructions.push(Obstruction::JordanRowRule {
                            value: e.value.clone(),
                            block,
                            rows: matches.iter().map(|m| m.row).collect(),
                        });
                    }
                } else if e.multiplicity > 1 {
                    indeterminate = true;
                }
            }
            admissibility.push(EigenAdmissibility {
                value: e.value.clone(),
                identified,
                matches,
            });
        }
    }

    PointAnalysis {
        location,
        spectral,
        admissibility,
        obstructions,
        indeterminate,
    }
}

fn worst_block(eigenvalues: &[EigenInfo]) -> Option<(SpectralValue, usize)> {
    eigenvalues
        .iter()
        .filter_map(|e| e.max_block().map(|b| (e.value.clone(), b)))
        .filter(|&(_, b)| b > 1)
        .max_by_key(|&(_, b)| b)
}

fn finish(k: i64, n: usize, points: Vec<PointAnalysis>) -> Analysis {
    let mut reasons = Vec::new();
    let mut indeterminate = false;
    for p in &points {
        reasons.extend(p.obstructions.iter().cloned());
        indeterminate |= p.indeterminate;
    }
    let status = if !reasons.is_empty() {
        Status::NonIntegrable
    } else if indeterminate {
        Status::Indeterminate
    } else {
        Status::Hold
    };
    Analysis {
        degree: k,
        nvars: n,
        continuum: false,
        points,
        verdict: Verdict { status, reasons },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::parse_potential;

    fn run(expr: &str, vars: &[&str]) -> Analysis {
        let v = parse_potential(expr, vars).unwrap();
        analyze(&v, &AnalyzeOptions::default())
    }

    #[test]
    fn planar_integrable_candidate_holds() {
        let a = run("q2*(9*q1^2+q2^2)/q1^3", &["q1", "q2"]);
        assert_eq!(a.verdict.status, Status::Hold);
        assert_eq!(a.points.len(), 2);
        for p in &a.points {
            assert_eq!(p.spectral.semisimple, Some(true));
            assert!(matches!(p.location, PointLocation::Projective(_)));
        }
    }

    #[test]
    fn planar_cubic_family_is_obstructed() {
        let a = run("q2*(q2-q1)*(q2-2*q1)/q1^3", &["q1", "q2"]);
        assert_eq!(a.verdict.status, Status::NonIntegrable);
        assert!(a
            .verdict
            .reasons
            .iter()
            .any(|r| matches!(r, Obstruction::JordanBlock { block: 2, .. })));
    }

    #[test]
    fn planar_no_proper_points() {
        let a = run("(q2^3+3*q1^2*q2)/q1^3", &["q1", "q2"]);
        assert_eq!(a.verdict.status, Status::NotApplicable);
        assert!(a.points.is_empty());
    }

    #[test]
    fn isotropic_oscillator_is_a_continuum() {
        let a = run("1/2*(q1^2+q2^2)", &["q1", "q2"]);
        assert!(a.continuum);
        assert_eq!(a.verdict.status, Status::Hold);
    }

    #[test]
    fn inverse_cube_holds_via_table() {
        let a = run("1/q1^3", &["q1", "q2"]);
        assert_eq!(a.degree, -3);
        assert_eq!(a.verdict.status, Status::Hold);
        assert_eq!(a.points.len(), 5);
        for p in &a.points {
            assert_eq!(p.admissibility.len(), 2);
            assert!(p.admissibility.iter().all(|e| !e.matches.is_empty()));
        }
    }

    #[test]
    fn quartic_cross_term_misses_the_table() {
        let a = run("q1^2*q2^2", &["q1", "q2"]);
        assert_eq!(a.degree, 4);
        assert_eq!(a.verdict.status, Status::NonIntegrable);
        assert!(a
            .verdict
            .reasons
            .iter()
            .any(|r| matches!(r, Obstruction::TableMiss { numeric: true, .. })));
    }

    #[test]
    fn separable_quartic_holds() {
        let a = run("q1^4+q2^4", &["q1", "q2"]);
        assert_eq!(a.verdict.status, Status::Hold);
        assert_eq!(a.points.len(), 8);
    }

    #[test]
    fn three_dof_jordan_obstruction() {
        let a = run("q2*q3/q1^2", &["q1", "q2", "q3"]);
        assert_eq!(a.degree, 0);
        assert_eq!(a.verdict.status, Status::NonIntegrable);
        assert_eq!(a.points.len(), 8);
        for p in &a.points {
            assert!(p
                .obstructions
                .iter()
                .any(|r| matches!(r, Obstruction::JordanBlock { block: 2, .. })));
        }
    }

    #[test]
    fn forced_numeric_agrees_with_exact_planar() {
        let v = parse_potential("q2*(9*q1^2+q2^2)/q1^3", &["q1", "q2"]).unwrap();
        let opts = AnalyzeOptions {
            force_numeric: true,
            ..AnalyzeOptions::default()
        };
        let a = analyze(&v, &opts);
        assert_eq!(a.verdict.status, Status::Hold);
        assert_eq!(a.points.len(), 4);

        let v = parse_potential("q2*(q2-q1)*(q2-2*q1)/q1^3", &["q1", "q2"]).unwrap();
        let a = analyze(&v, &opts);
        assert_eq!(a.verdict.status, Status::NonIntegrable);
    }

    #[test]
    fn constant_potential_is_out_of_scope() {
        let a = run("5", &["q1", "q2"]);
        assert_eq!(a.verdict.status, Status::NotApplicable);
    }

    #[test]
    fn verdict_precedence() {
        // an established obstruction beats an indeterminate point
        let solid = PointAnalysis {
            location: PointLocation::Affine(vec![]),
            spectral: SpectralData {
                dim: 0,
                char_poly: None,
                eigenvalues: vec![],
                semisimple: Some(true),
                all_integer: Some(true),
                indeterminate: false,
            },
            admissibility: vec![],
            obstructions: vec![Obstruction::TableMiss {
                value: SpectralValue::Numeric(Complex64::new(0.3, 0.0)),
                numeric: true,
            }],
            indeterminate: false,
        };
        let shaky = PointAnalysis {
            obstructions: vec![],
            indeterminate: true,
            ..solid.clone()
        };
        assert_eq!(
            finish(3, 2, vec![solid.clone(), shaky.clone()]).verdict.status,
            Status::NonIntegrable
        );
        assert_eq!(finish(3, 2, vec![shaky]).verdict.status, Status::Indeterminate);
        let clean = PointAnalysis {
            obstructions: vec![],
            ..solid
        };
        assert_eq!(finish(3, 2, vec![clean]).verdict.status, Status::Hold);
    }
}
