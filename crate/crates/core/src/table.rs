//! Admissible Hessian eigenvalues for homogeneous potentials of nonzero
//! integer degree: the classical table of (degree, eigenvalue) families that
//! an integrable system must hit at every proper Darboux point.
//!
//! All membership checks are exact; the only numerics allowed is the initial
//! rationalization of a floating-point eigenvalue, which is then confirmed
//! symbolically.

use crate::rational::{rational_sqrt, rationalize};
use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// A hit in the admissibility table.
///
/// `row` is the family index (1-9); `p` is the integer family parameter,
/// absent for the unconditional degree +-2 family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableMatch {
    pub row: usize,
    pub p: Option<i64>,
}

fn br(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Families of the form lambda = c + r (e + f p)^2 attached to one degree.
fn shifted_square_families(k: i64) -> Option<(usize, BigRational, Vec<(BigRational, i64, i64)>)> {
    match k {
        3 => Some((
            4,
            br(-1, 24),
            vec![
                (br(1, 6), 1, 3),
                (br(3, 32), 1, 4),
                (br(3, 50), 1, 5),
                (br(3, 50), 2, 5),
            ],
        )),
        4 => Some((5, br(-1, 8), vec![(br(2, 9), 1, 3)])),
        5 => Some((
            6,
            br(-9, 40),
            vec![(br(5, 18), 1, 3), (br(1, 10), 2, 5)],
        )),
        -3 => Some((
            7,
            br(25, 24),
            vec![
                (br(-1, 6), 1, 3),
                (br(-3, 32), 1, 4),
                (br(-3, 50), 1, 5),
                (br(-3, 50), 2, 5),
            ],
        )),
        -4 => Some((8, br(9, 8), vec![(br(-2, 9), 1, 3)])),
        -5 => Some((
            9,
            br(49, 40),
            vec![(br(-5, 18), 1, 3), (br(-1, 10), 2, 5)],
        )),
        _ => None,
    }
}

/// Integer solutions of a p^2 + b p + c = 0 with rational coefficients.
fn integer_quadratic_roots(a: &BigRational, b: &BigRational, c: &BigRational) -> Vec<i64> {
    let mut out = Vec::new();
    if a.is_zero() {
        if !b.is_zero() {
            push_if_integer(&(-c / b), &mut out);
        }
        return out;
    }
    let disc = b * b - BigRational::from_integer(BigInt::from(4)) * a * c;
    if disc.is_negative() {
        return Vec::new();
    }
    if let Some(s) = rational_sqrt(&disc) {
        let two_a = BigRational::from_integer(BigInt::from(2)) * a;
        push_if_integer(&((-b.clone() + &s) / &two_a), &mut out);
        if !s.is_zero() {
            push_if_integer(&((-b.clone() - &s) / &two_a), &mut out);
        }
    }
    out.sort_unstable();
    out
}

fn push_if_integer(x: &BigRational, out: &mut Vec<i64>) {
    if x.is_integer() {
        if let Some(v) = x.to_integer().to_i64() {
            out.push(v);
        }
    }
}

/// All table families containing the exact pair (k, lambda), for nonzero
/// integer degree k.
pub fn table_membership(k: i64, lambda: &BigRational) -> Vec<TableMatch> {
    assert!(k != 0, "table applies to nonzero degrees");
    let mut out = Vec::new();
    let kq = BigRational::from_integer(BigInt::from(k));
    let half_k = &kq / BigRational::from_integer(BigInt::from(2));

    if k == 2 || k == -2 {
        out.push(TableMatch { row: 1, p: None });
    }

    // lambda = (k/2) p^2 + (1 - k/2) p
    let b2 = BigRational::one() - &half_k;
    for p in integer_quadratic_roots(&half_k, &b2, &-lambda.clone()) {
        out.push(TableMatch { row: 2, p: Some(p) });
    }

    // lambda = (k/2) p^2 + (k/2) p + (k-1)/(2k)
    let c3 = (&kq - BigRational::one())
        / (BigRational::from_integer(BigInt::from(2)) * &kq);
    for p in integer_quadratic_roots(&half_k, &half_k, &(c3 - lambda)) {
        out.push(TableMatch { row: 3, p: Some(p) });
    }

    if let Some((row, c, families)) = shifted_square_families(k) {
        for (r, e, f) in families {
            // (e + f p)^2 = (lambda - c) / r
            let target = (lambda - &c) / &r;
            if target.is_negative() {
                continue;
            }
            let Some(s) = rational_sqrt(&target) else {
                continue;
            };
            let fe = BigRational::from_integer(BigInt::from(e));
            let ff = BigRational::from_integer(BigInt::from(f));
            let mut ps = Vec::new();
            push_if_integer(&((s.clone() - &fe) / &ff), &mut ps);
            if !s.is_zero() {
                push_if_integer(&((-s - &fe) / &ff), &mut ps);
            }
            ps.sort_unstable();
            ps.dedup();
            for p in ps {
                out.push(TableMatch { row, p: Some(p) });
            }
        }
    }

    out.dedup();
    out
}

/// Rationalizes a numeric eigenvalue and tests it exactly.
///
/// Returns `None` when the value cannot be identified with a real rational of
/// denominator at most 10^6, in which case it certainly misses the table.
pub fn table_membership_numeric(
    k: i64,
    lambda: Complex64,
) -> Option<(BigRational, Vec<TableMatch>)> {
    if lambda.im.abs() > 1e-6 {
        return None;
    }
    let r = rationalize(lambda.re, 1_000_000, 1e-6)?;
    let matches = table_membership(k, &r);
    Some((r, matches))
}

/// Reference implementation: enumerate the parameter over a window.
/// Slow but independent of the quadratic solving; kept public as a
/// cross-check for exhaustive testing.
pub fn table_membership_brute(k: i64, lambda: &BigRational, window: i64) -> bool {
    if k == 2 || k == -2 {
        return true;
    }
    let kq = BigRational::from_integer(BigInt::from(k));
    let half_k = &kq / BigRational::from_integer(BigInt::from(2));
    for p in -window..=window {
        let pq = BigRational::from_integer(BigInt::from(p));
        let row2 = &half_k * &pq * &pq + (BigRational::one() - &half_k) * &pq;
        if row2 == *lambda {
            return true;
        }
        let c3 = (&kq - BigRational::one())
            / (BigRational::from_integer(BigInt::from(2)) * &kq);
        let row3 = &half_k * &pq * &pq + &half_k * &pq + c3;
        if row3 == *lambda {
            return true;
        }
        if let Some((_, c, families)) = shifted_square_families(k) {
            for (r, e, f) in families {
                let base = BigRational::from_integer(BigInt::from(e + f * p));
                if &c + r * &base * &base == *lambda {
                    return true;
                }
            }
        }
    }
    false
}
