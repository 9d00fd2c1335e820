//! Probabilists' Hermite polynomials He_n, exact Hermite expansions, and
//! Gaussian moments in units of sqrt(2*pi).

use crate::rational::GaussianRational;
use crate::unipoly::UniPoly;
use num::{BigInt, One};

/// He_n by the recurrence He_{n+1}(x) = x*He_n(x) - He_n'(x), He_0 = 1.
pub fn hermite(n: usize) -> UniPoly {
    let mut h = UniPoly::one();
    for _ in 0..n {
        h = UniPoly::x().mul(&h).sub(&h.derivative());
    }
    h
}

pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// (2m-1)!! with the empty product equal to one.
pub fn double_factorial_odd(m: usize) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = 1usize;
    while k + 1 <= 2 * m {
        acc *= BigInt::from(2 * m - k);
        k += 2;
    }
    acc
}

/// Moment of `f` against the weight e^{-x^2/2}, divided by sqrt(2*pi):
/// monomial x^{2m} contributes (2m-1)!!, odd monomials vanish.
pub fn gaussian_moment(f: &UniPoly) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for (i, c) in f.coeffs().iter().enumerate() {
        if i % 2 == 0 {
            let w = GaussianRational::from_bigint(double_factorial_odd(i / 2));
            acc = &acc + &(c * &w);
        }
    }
    acc
}

/// Coefficients of `f` in the basis He_0, He_1, ...
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HermiteExpansion {
    pub coeffs: Vec<GaussianRational>,
}

impl HermiteExpansion {
    pub fn reconstruct(&self) -> UniPoly {
        let mut acc = UniPoly::zero();
        for (n, c) in self.coeffs.iter().enumerate() {
            acc = acc.add(&hermite(n).scale(c));
        }
        acc
    }
}

/// Exact change of basis into Hermite polynomials; He_n is monic, so peeling
/// from the top degree terminates.
pub fn hermite_expand(f: &UniPoly) -> HermiteExpansion {
    let deg = match f.degree() {
        None => return HermiteExpansion { coeffs: Vec::new() },
        Some(d) => d,
    };
    let mut coeffs = vec![GaussianRational::zero(); deg + 1];
    let mut rem = f.clone();
    while let Some(d) = rem.degree() {
        let lead = rem.leading().unwrap().clone();
        coeffs[d] = lead.clone();
        rem = rem.sub(&hermite(d).scale(&lead));
        debug_assert!(rem.degree().map(|r| r < d).unwrap_or(true));
    }
    HermiteExpansion { coeffs }
}
