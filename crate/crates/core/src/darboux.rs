//! Darboux points: non-trivial solutions of V'(d) = d.
//!
//! For two degrees of freedom and degree zero the problem collapses to an
//! exact computation on the projective line, so those points are found in
//! closed form over the Gaussian rationals.  Everything else goes through a
//! certified Newton multistart.

use crate::matrix::{c_solve, CMatrix};
use crate::potential::Potential;
use crate::rational::GaussianRational;
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const MAX_NEWTON_ITERS: usize = 50;
const DEDUP_TOL: f64 = 1e-6;
const ORIGIN_EXCLUSION: f64 = 1e-6;
const SEED_BALL_RADIUS: f64 = 3.0;

/// A proper projective equilibrium of a planar degree-zero potential.
///
/// With v(z) = V(1, z), a proper point sits at z* with z*^2 = -1 and
/// v'(z*) != 0; the affine representative has x*^2 = -v'(z*) z*.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveDarboux {
    pub z_star: GaussianRational,
    pub v1: GaussianRational,
    pub x_star_sq: GaussianRational,
}

/// Solution set of V'(d) = d.
#[derive(Clone, Debug, PartialEq)]
pub enum DarbouxSet {
    /// The equation holds identically; every point works.
    Continuum,
    /// Isolated certified solutions (possibly none).
    Points(Vec<Vec<Complex64>>),
}

/// Exact proper Darboux points for a planar degree-zero potential.
pub fn darboux_2d(v: &Potential) -> Vec<ProjectiveDarboux> {
    assert_eq!(v.nvars(), 2, "planar analysis needs two variables");
    assert_eq!(v.degree, 0, "planar closed form is specific to degree zero");
    let restricted = v
        .restrict_projective()
        .expect("degree-zero potential is finite on the affine chart");
    let vp = restricted.derivative(0);
    let mut out = Vec::new();
    for z_star in [GaussianRational::i(), GaussianRational::i().neg()] {
        match vp.eval(&[z_star.clone()]) {
            Ok(v1) if !v1.is_zero() => {
                let x_star_sq = (&v1 * &z_star).neg();
                out.push(ProjectiveDarboux {
                    z_star,
                    v1,
                    x_star_sq,
                });
            }
            _ => {}
        }
    }
    out
}

impl ProjectiveDarboux {
    /// Affine representative (x*, x* z*) on the principal square-root branch.
    pub fn embed(&self) -> Vec<Complex64> {
        let x = self.x_star_sq.to_complex().sqrt();
        vec![x, x * self.z_star.to_complex()]
    }

    /// Exact affine representative when x* stays inside the Gaussian rationals.
    pub fn embed_exact(&self) -> Option<Vec<GaussianRational>> {
        let x = crate::rational::gaussian_sqrt(&self.x_star_sq)?;
        Some(vec![x.clone(), &x * &self.z_star])
    }
}

/// Newton multistart solver for V'(d) = d in any dimension.
///
/// Detects the identically-satisfied case exactly, then polishes random
/// starts drawn from a complex ball and keeps the certified, deduplicated
/// solutions away from the origin.
pub fn darboux_nd(v: &Potential, starts: usize, rng_seed: u64, certify_tol: f64) -> DarbouxSet {
    let n = v.nvars();
    let grad = v.gradient();
    if (0..n).all(|i| grad.0[i] == crate::ratfunc::RatFunc::var(n, i)) {
        return DarbouxSet::Continuum;
    }
    let hess = v.hessian();

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let seeds: Vec<Vec<Complex64>> = (0..starts)
        .map(|_| (0..n).map(|_| disk_sample(&mut rng)).collect())
        .collect();

    let candidates: Vec<Option<Vec<Complex64>>> = seeds
        .par_iter()
        .map(|start| newton_polish(&grad.0, &hess.0, start, certify_tol))
        .collect();

    let mut points: Vec<Vec<Complex64>> = Vec::new();
    for cand in candidates.into_iter().flatten() {
        let fresh = points
            .iter()
            .all(|p| inf_distance(p, &cand) > DEDUP_TOL);
        if fresh {
            points.push(cand);
        }
    }
    points.sort_by(|a, b| {
        a.iter()
            .flat_map(|z| [z.re, z.im])
            .zip(b.iter().flat_map(|z| [z.re, z.im]))
            .find_map(|(x, y)| {
                let o = x.total_cmp(&y);
                (o != std::cmp::Ordering::Equal).then_some(o)
            })
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    DarbouxSet::Points(points)
}

fn disk_sample(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let re = rng.gen_range(-SEED_BALL_RADIUS..SEED_BALL_RADIUS);
        let im = rng.gen_range(-SEED_BALL_RADIUS..SEED_BALL_RADIUS);
        if re * re + im * im <= SEED_BALL_RADIUS * SEED_BALL_RADIUS {
            return Complex64::new(re, im);
        }
    }
}

fn inf_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn residual(
    grad: &[crate::ratfunc::RatFunc],
    d: &[Complex64],
) -> Option<Vec<Complex64>> {
    grad.iter()
        .zip(d)
        .map(|(g, di)| g.eval_complex(d).ok().map(|v| v - di))
        .collect()
}

fn newton_polish(
    grad: &[crate::ratfunc::RatFunc],
    hess: &[Vec<crate::ratfunc::RatFunc>],
    start: &[Complex64],
    certify_tol: f64,
) -> Option<Vec<Complex64>> {
    let n = start.len();
    let mut d = start.to_vec();
    for _ in 0..MAX_NEWTON_ITERS {
        let f = residual(grad, &d)?;
        let jac: Option<CMatrix> = hess
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, h)| {
                        h.eval_complex(&d)
                            .ok()
                            .map(|v| if i == j { v - 1.0 } else { v })
                    })
                    .collect()
            })
            .collect();
        let neg_f: Vec<Complex64> = f.iter().map(|z| -z).collect();
        let step = c_solve(&jac?, &neg_f)?;
        for i in 0..n {
            d[i] += step[i];
        }
        let scale = d.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if step.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-14 * scale {
            break;
        }
    }
    let f = residual(grad, &d)?;
    let ok = f.iter().map(|z| z.norm()).fold(0.0, f64::max) < certify_tol
        && d.iter().map(|z| z.norm()).fold(0.0, f64::max) > ORIGIN_EXCLUSION;
    ok.then_some(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::parse_potential;

    fn sample() -> Potential {
        parse_potential("q2*(9*q1^2+q2^2)/q1^3", &["q1", "q2"]).unwrap()
    }

    fn family(a: i64, b: i64) -> Potential {
        let expr = format!("q2*(q2-{a}*q1)*(q2-{b}*q1)/q1^3");
        parse_potential(&expr, &["q1", "q2"]).unwrap()
    }

    #[test]
    fn planar_points_of_sample() {
        let pts = darboux_2d(&sample());
        assert_eq!(pts.len(), 2);
        let i = GaussianRational::i();
        assert_eq!(pts[0].z_star, i);
        assert_eq!(pts[0].v1, GaussianRational::from_int(6));
        assert_eq!(pts[0].x_star_sq, (&GaussianRational::from_int(6) * &i).neg());
        assert_eq!(pts[1].z_star, i.neg());
        assert_eq!(pts[1].v1, GaussianRational::from_int(6));
    }

    #[test]
    fn planar_points_of_cubic_family() {
        let pts = darboux_2d(&family(1, 2));
        assert_eq!(pts.len(), 2);
        // v(z) = z(z-1)(z-2), v'(i) = -1 - 6i
        let expect = GaussianRational::gauss_ratio(-1, -6, 1);
        assert_eq!(pts[0].v1, expect);
        assert_eq!(pts[1].v1, expect.conj());
        // x*^2 = -v1 i = -6 + i
        assert_eq!(pts[0].x_star_sq, GaussianRational::gauss_ratio(-6, 1, 1));
    }

    #[test]
    fn embedding_satisfies_equation() {
        for v in [sample(), family(1, 2), family(-3, 5)] {
            let grad = v.gradient();
            for pd in darboux_2d(&v) {
                let d = pd.embed();
                let f = residual(&grad.0, &d).unwrap();
                let err = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
                assert!(err < 1e-9, "residual {err}");
            }
        }
    }

    #[test]
    fn exact_embedding_when_square_root_exists() {
        // v(z) = 2z => v1 = 2, x*^2 = -2i = (1-i)^2
        let v = parse_potential("2*q2/q1", &["q1", "q2"]).unwrap();
        let pts = darboux_2d(&v);
        let d = pts[0].embed_exact().unwrap();
        assert_eq!(d[0], GaussianRational::gauss_ratio(1, -1, 1));
        // and the sample's -6i has no Gaussian-rational root
        assert!(darboux_2d(&sample())[0].embed_exact().is_none());
    }

    #[test]
    fn pole_on_the_critical_circle_gives_nothing() {
        let v = parse_potential("q2^2/(q1^2+q2^2)", &["q1", "q2"]).unwrap();
        assert!(darboux_2d(&v).is_empty());
    }

    #[test]
    fn vanishing_slope_gives_nothing() {
        // v(z) = z^3 + 3z has v'(+-i) = 0
        let v = parse_potential("(q2^3+3*q1^2*q2)/q1^3", &["q1", "q2"]).unwrap();
        assert!(darboux_2d(&v).is_empty());
    }

    #[test]
    fn newton_agrees_with_planar_closed_form() {
        let v = sample();
        let found = match darboux_nd(&v, 200, 1, 1e-9) {
            DarbouxSet::Points(p) => p,
            other => panic!("expected points, got {other:?}"),
        };
        // two projective points, two affine branches each
        assert_eq!(found.len(), 4);
        let mut expected: Vec<Vec<Complex64>> = Vec::new();
        for pd in darboux_2d(&v) {
            let d = pd.embed();
            expected.push(d.iter().map(|z| -z).collect());
            expected.push(d);
        }
        for e in &expected {
            assert!(
                found.iter().any(|p| inf_distance(p, e) < 1e-7),
                "missing {e:?}"
            );
        }
    }

    #[test]
    fn continuum_for_isotropic_oscillator() {
        let v = parse_potential("1/2*(q1^2+q2^2)", &["q1", "q2"]).unwrap();
        assert_eq!(darboux_nd(&v, 10, 1, 1e-9), DarbouxSet::Continuum);
    }

    #[test]
    fn inverse_cube_has_five_points() {
        let v = parse_potential("1/q1^3", &["q1", "q2"]).unwrap();
        let found = match darboux_nd(&v, 300, 7, 1e-9) {
            DarbouxSet::Points(p) => p,
            other => panic!("expected points, got {other:?}"),
        };
        assert_eq!(found.len(), 5);
        for p in &found {
            // q1^5 = -3, q2 = 0
            assert!((p[0].powi(5) - Complex64::new(-3.0, 0.0)).norm() < 1e-7);
            assert!(p[1].norm() < 1e-9);
        }
    }

    #[test]
    fn three_degrees_of_freedom_count() {
        let v = parse_potential("q2*q3/q1^2", &["q1", "q2", "q3"]).unwrap();
        let found = match darboux_nd(&v, 400, 3, 1e-9) {
            DarbouxSet::Points(p) => p,
            other => panic!("expected points, got {other:?}"),
        };
        assert_eq!(found.len(), 8);
        for p in &found {
            assert!((p[0].powi(4) - Complex64::new(1.0, 0.0)).norm() < 1e-7);
            assert!((p[1] * p[2] - Complex64::new(-0.5, 0.0)).norm() < 1e-7);
        }
    }

    #[test]
    fn constant_potential_has_no_points() {
        let v = parse_potential("5", &["q1", "q2"]).unwrap();
        assert_eq!(darboux_nd(&v, 50, 1, 1e-9), DarbouxSet::Points(vec![]));
    }
}
