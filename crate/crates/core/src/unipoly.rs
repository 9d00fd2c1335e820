//! Dense univariate polynomials over Q(i) with exact division, gcd, and
//! numeric root isolation used only to seed exact confirmation.

use crate::rational::{rationalize, GaussianRational};
use num::complex::Complex64;
use num::{BigInt, BigRational, Integer};
use std::fmt;

/// Coefficients in ascending order; invariant: no trailing zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    coeffs: Vec<GaussianRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussianRational::from_int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> GaussianRational {
        self.coeffs.get(i).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) + &other.coeff(i));
        }
        Self::new(out)
    }

    pub fn neg(&self) -> UniPoly {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> UniPoly {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c * &GaussianRational::from_int(i as i64));
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_complex();
        }
        acc
    }

    /// Substitutes `a*x` for `x`.
    pub fn compose_scale(&self, a: &GaussianRational) -> UniPoly {
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut pow = GaussianRational::one();
        for c in &self.coeffs {
            out.push(c * &pow);
            pow = &pow * a;
        }
        Self::new(out)
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv()),
        }
    }

    /// Quotient and remainder; panics on zero divisor.
    pub fn divrem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = vec![GaussianRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let q = &rem.coeff(dr) / &lc;
            let shift = dr - dd;
            quot[shift] = q.clone();
            let mut sub = vec![GaussianRational::zero(); shift];
            sub.extend(divisor.coeffs.iter().map(|c| c * &q));
            rem = rem.sub(&Self::new(sub));
        }
        (Self::new(quot), rem)
    }

    /// Rescales by a positive rational so every coefficient becomes a
    /// Gaussian integer and the integer parts share no common factor.
    /// Leaves the zero polynomial unchanged.
    fn integer_primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::from(1);
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.re.denom());
            den_lcm = den_lcm.lcm(c.im.denom());
        }
        let mut num_gcd = BigInt::from(0);
        for c in &self.coeffs {
            num_gcd = num_gcd.gcd(&(c.re.numer() * &den_lcm / c.re.denom()));
            num_gcd = num_gcd.gcd(&(c.im.numer() * &den_lcm / c.im.denom()));
        }
        let scale = GaussianRational::from_rational(BigRational::new(den_lcm, num_gcd));
        self.scale(&scale)
    }

    /// Monic gcd by the Euclidean algorithm.  Every remainder is rescaled to
    /// primitive integer form, which keeps the coefficient growth polynomial
    /// instead of letting the nested fractions of repeated monic division
    /// compound.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.integer_primitive();
        let mut b = other.integer_primitive();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.integer_primitive();
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None | Some(0) => true,
            _ => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// All complex roots by Durand-Kerner iteration. Accuracy degrades near
    /// multiple roots; callers must confirm candidates exactly.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let cs: Vec<Complex64> = self.coeffs.iter().map(|c| c.to_complex()).collect();
        durand_kerner(&cs)
    }

    /// Integer roots with multiplicities, sorted ascending. Candidates come
    /// from numeric isolation and are confirmed by exact division.
    pub fn integer_roots(&self) -> Vec<(BigInt, usize)> {
        if self.is_zero() {
            panic!("integer roots of the zero polynomial are not defined");
        }
        let mut out: Vec<(BigInt, usize)> = Vec::new();
        let mut poly = self.clone();
        // Root at zero.
        let zero_mult = poly.coeffs.iter().take_while(|c| c.is_zero()).count();
        if zero_mult > 0 {
            poly = Self::new(poly.coeffs[zero_mult..].to_vec());
            out.push((BigInt::from(0), zero_mult));
        }
        let mut candidates: Vec<i64> = Vec::new();
        for r in poly.complex_roots() {
            if r.im.abs() < 0.5 && r.re.abs() < 9e15 {
                for c in [r.re.floor() as i64, r.re.round() as i64, r.re.ceil() as i64] {
                    if c != 0 && !candidates.contains(&c) {
                        candidates.push(c);
                    }
                }
            }
        }
        candidates.sort_unstable();
        for cand in candidates {
            let z = GaussianRational::from_int(cand);
            let lin = UniPoly::new(vec![-&z, GaussianRational::one()]);
            let mut mult = 0;
            while poly.degree().map(|d| d >= 1).unwrap_or(false) && poly.eval(&z).is_zero() {
                let (q, r) = poly.divrem(&lin);
                debug_assert!(r.is_zero());
                poly = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((BigInt::from(cand), mult));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Splits off all roots lying in Q(i): returns `(roots, residual)` where
    /// the residual is the monic factor with no Gaussian-rational roots.
    ///
    /// Candidates are rationalized from the squarefree part, where the
    /// numeric roots are simple and therefore accurate, then confirmed by
    /// exact evaluation and deflated with their true multiplicity.
    pub fn gaussian_roots(&self) -> (Vec<(GaussianRational, usize)>, UniPoly) {
        let mut poly = self.monic();
        let mut found: Vec<(GaussianRational, usize)> = Vec::new();
        if poly.degree().map(|d| d == 0).unwrap_or(true) {
            return (found, poly);
        }
        let squarefree = poly.divrem(&poly.gcd(&poly.derivative())).0;
        for r in squarefree.complex_roots() {
            let re = match rationalize(r.re, 1_000_000, 1e-6) {
                Some(v) => v,
                None => continue,
            };
            let im = match rationalize(r.im, 1_000_000, 1e-6) {
                Some(v) => v,
                None => continue,
            };
            let cand = GaussianRational::new(re, im);
            if !poly.eval(&cand).is_zero() {
                continue;
            }
            let lin = UniPoly::new(vec![-&cand, GaussianRational::one()]);
            let mut mult = 0;
            while poly.degree().map(|d| d >= 1).unwrap_or(false) && poly.eval(&cand).is_zero() {
                poly = poly.divrem(&lin).0;
                mult += 1;
            }
            found.push((cand, mult));
        }
        found.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        (found, poly)
    }

    /// Real roots (imaginary part below 1e-9 numerically), ascending.
    pub fn real_roots_numeric(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .complex_roots()
            .into_iter()
            .filter(|r| r.im.abs() < 1e-9)
            .map(|r| r.re)
            .collect();
        out.sort_by(|a, b| a.total_cmp(b));
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({})", c)?,
                1 if c.is_one() => write!(f, "x")?,
                1 => write!(f, "({})*x", c)?,
                _ if c.is_one() => write!(f, "x^{}", i)?,
                _ => write!(f, "({})*x^{}", c, i)?,
            }
        }
        Ok(())
    }
}

/// Numerically checks whether the rational `r` is within `tol` of `x`.
pub fn rational_close(r: &BigRational, x: f64, tol: f64) -> bool {
    use num::ToPrimitive;
    r.to_f64().map(|v| (v - x).abs() <= tol).unwrap_or(false)
}

/// Durand-Kerner on ascending complex coefficients; trailing zeros allowed.
pub fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut cs = coeffs.to_vec();
    while cs.last().map_or(false, |c| c.norm() == 0.0) {
        cs.pop();
    }
    if cs.len() <= 1 {
        return Vec::new();
    }
    let n = cs.len() - 1;
    let lead = cs[n];
    for c in cs.iter_mut() {
        *c /= lead;
    }
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in cs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|j| seed.powu(j as u32 + 1)).collect();
    for _ in 0..500 {
        let mut worst = 0.0f64;
        for j in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for k in 0..n {
                if k != j {
                    den *= z[j] - z[k];
                }
            }
            if den.norm() == 0.0 {
                z[j] += Complex64::new(1e-8, 1e-8);
                continue;
            }
            let delta = eval(z[j]) / den;
            z[j] -= delta;
            worst = worst.max(delta.norm() / (1.0 + z[j].norm()));
        }
        if worst < 1e-14 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_and_gcd() {
        let f = UniPoly::from_ints(&[2, -3, 1]); // (x-1)(x-2)
        let g = UniPoly::from_ints(&[-1, 1]); // x-1
        let (q, r) = f.divrem(&g);
        assert!(r.is_zero());
        assert_eq!(q, UniPoly::from_ints(&[-2, 1]));
        assert_eq!(f.gcd(&g), g.monic());
        assert!(f.is_squarefree());
        let sq = g.mul(&g);
        assert!(!sq.is_squarefree());
    }

    #[test]
    fn integer_root_extraction() {
        // (x+1)^2 -> [(-1, 2)]
        let f = UniPoly::from_ints(&[1, 2, 1]);
        let roots = f.integer_roots();
        assert_eq!(roots, vec![(BigInt::from(-1), 2)]);
        // x^2 - x - 1 has no integer roots
        let f = UniPoly::from_ints(&[-1, -1, 1]);
        assert!(f.integer_roots().is_empty());
        // x^3 - 2x^2 - x + 2 = (x-1)(x+1)(x-2)
        let f = UniPoly::from_ints(&[2, -1, -2, 1]);
        let roots = f.integer_roots();
        assert_eq!(
            roots,
            vec![
                (BigInt::from(-1), 1),
                (BigInt::from(1), 1),
                (BigInt::from(2), 1)
            ]
        );
        // x^2 * (x - 3)
        let f = UniPoly::from_ints(&[0, 0, -3, 1]);
        let roots = f.integer_roots();
        assert_eq!(roots, vec![(BigInt::from(0), 2), (BigInt::from(3), 1)]);
    }

    #[test]
    fn no_false_positive_roots() {
        // (x - 5)(x^2 + x + 1): only 5 is an integer root.
        let f = UniPoly::from_ints(&[-5, 1]).mul(&UniPoly::from_ints(&[1, 1, 1]));
        assert_eq!(f.integer_roots(), vec![(BigInt::from(5), 1)]);
    }

    #[test]
    fn gaussian_root_split() {
        // (x - i)(x - 1/2) * (x^2 - 2): residual x^2 - 2
        let i = GaussianRational::i();
        let half = GaussianRational::ratio(1, 2);
        let f = UniPoly::new(vec![-&i, GaussianRational::one()])
            .mul(&UniPoly::new(vec![-&half, GaussianRational::one()]))
            .mul(&UniPoly::from_ints(&[-2, 0, 1]));
        let (roots, residual) = f.gaussian_roots();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().any(|(r, m)| *r == i && *m == 1));
        assert!(roots.iter().any(|(r, m)| *r == half && *m == 1));
        assert_eq!(residual, UniPoly::from_ints(&[-2, 0, 1]));
    }

    #[test]
    fn complex_roots_quadratic() {
        let f = UniPoly::from_ints(&[1, 0, 1]); // x^2 + 1
        let roots = f.complex_roots();
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!((f.eval_complex(r)).norm() < 1e-10);
        }
    }
}
