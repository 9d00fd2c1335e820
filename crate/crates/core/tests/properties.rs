//! Randomized structural properties: ring axioms of the rational-function
//! arithmetic and spectral invariants of planar degree-zero potentials.

use num::complex::Complex64;
use proptest::prelude::*;
use zerok_core::darboux::darboux_2d;
use zerok_core::multipoly::MultiPoly;
use zerok_core::potential::{parse_potential, Potential};
use zerok_core::ratfunc::RatFunc;
use zerok_core::spectral::{analyze_exact, planar_hessian, planar_semisimple_defect};
use zerok_core::GaussianRational;

const NVARS: usize = 2;

fn coefficient() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, -6i64..=6, 1i64..=3).prop_map(|(re, im, den)| {
        &GaussianRational::ratio(re, den) + &(&GaussianRational::ratio(im, den) * &GaussianRational::i())
    })
}

fn polynomial() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((coefficient(), 0u32..3, 0u32..3), 1..5).prop_map(|terms| {
        let mut p = MultiPoly::zero(NVARS);
        for (c, e1, e2) in terms {
            p = p.add(&MultiPoly::monomial(NVARS, vec![e1, e2], c));
        }
        p
    })
}

fn rational_function() -> impl Strategy<Value = RatFunc> {
    (polynomial(), polynomial())
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| RatFunc::new(n, d).expect("denominator checked"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratfunc_ring_axioms(f in rational_function(), g in rational_function(), h in rational_function()) {
        prop_assert_eq!(f.add(&g), g.add(&f));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.add(&g).add(&h), f.add(&g.add(&h)));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.add(&g).mul(&h), f.mul(&h).add(&g.mul(&h)));
        prop_assert!(f.sub(&f).is_zero());
        prop_assert_eq!(f.mul(&RatFunc::one(NVARS)), f.clone());
    }

    #[test]
    fn ratfunc_division_inverts_multiplication(f in rational_function(), g in rational_function()) {
        prop_assume!(!g.is_zero());
        prop_assert_eq!(f.mul(&g).checked_div(&g).unwrap(), f);
    }

    #[test]
    fn ratfunc_derivative_is_a_derivation(f in rational_function(), g in rational_function()) {
        for var in 0..NVARS {
            let product_rule = f.derivative(var).mul(&g).add(&f.mul(&g.derivative(var)));
            prop_assert_eq!(f.mul(&g).derivative(var), product_rule);
            let sum_rule = f.derivative(var).add(&g.derivative(var));
            prop_assert_eq!(f.add(&g).derivative(var), sum_rule);
        }
    }
}

/// Random planar degree-zero potential: homogeneous numerator over q1^m.
fn random_planar(degree: u32, coeffs: &[i64]) -> Option<Potential> {
    if coeffs.iter().all(|&c| c == 0) {
        return None;
    }
    let numerator = coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| format!("({c})*q1^{j}*q2^{}", degree as usize - j))
        .collect::<Vec<_>>()
        .join("+");
    parse_potential(&format!("({numerator})/q1^{degree}"), &["q1", "q2"]).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_defect_is_equivalent_to_semisimple(
        degree in 2u32..=6,
        coeffs in prop::collection::vec(-9i64..=9, 7),
    ) {
        let Some(v) = random_planar(degree, &coeffs[..=degree as usize]) else {
            return Ok(());
        };
        for pd in darboux_2d(&v) {
            let defect = planar_semisimple_defect(&v, &pd);
            let spectral = analyze_exact(&planar_hessian(&v, &pd));
            prop_assert_eq!(spectral.semisimple, Some(defect.is_zero()));
        }
    }

    #[test]
    fn affine_representative_is_an_eigenvector(
        degree in 2u32..=6,
        coeffs in prop::collection::vec(-9i64..=9, 7),
    ) {
        // at a fixed direction of a degree-zero potential the direction
        // itself is an eigenvector of the Hessian with eigenvalue -1
        let Some(v) = random_planar(degree, &coeffs[..=degree as usize]) else {
            return Ok(());
        };
        let hess = v.hessian();
        for pd in darboux_2d(&v) {
            let d = pd.embed();
            let m = hess.eval_complex(&d).expect("no pole at a proper point");
            let scale: f64 = d.iter().map(|z| z.norm()).sum();
            for row in 0..2 {
                let hd: Complex64 = (0..2).map(|col| m[row][col] * d[col]).sum();
                let residual = (hd + d[row]).norm();
                prop_assert!(residual < 1e-9 * scale.max(1.0), "residual {residual}");
            }
        }
    }
}
