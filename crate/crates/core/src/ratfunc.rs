//! Rational functions over Q(i), kept reduced with a monic denominator under
//! the graded-lex order, so equality is syntactic.

use crate::gcd::gcd;
use crate::multipoly::MultiPoly;
use crate::rational::GaussianRational;
use num::complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum RatFuncError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero rational function")]
    DivisionByZero,
    #[error("evaluation at a pole")]
    Pole,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, RatFuncError> {
        if den.is_zero() {
            return Err(RatFuncError::ZeroDenominator);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return RatFunc {
                num,
                den: MultiPoly::one(den.nvars()),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.as_constant().map(|c| c.is_one()).unwrap_or(false) {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::normalized(num, den)
    }

    /// Wraps a pair already known to be coprime, normalizing the denominator
    /// to monic. The arithmetic below relies on operands being reduced, which
    /// lets it prove coprimality from small gcds instead of recomputing one
    /// on the expanded numerator and denominator.
    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return RatFunc {
                num,
                den: MultiPoly::one(den.nvars()),
            };
        }
        let lc = den.leading().expect("nonzero denominator").1.clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.inv();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let n = p.nvars();
        RatFunc {
            num: p,
            den: MultiPoly::one(n),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        Self::from_poly(MultiPoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(MultiPoly::var(nvars, i))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(c)` when the function is the constant `c`.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.den.as_constant().map(|c| c.is_one()).unwrap_or(false) {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        // Reduced-fraction addition: with both operands in lowest terms, only
        // the denominator gcd g0 and the follow-up gcd against g0 are needed,
        // and both stay at the scale of the operands.
        let g0 = gcd(&self.den, &other.den);
        if g0.as_constant().is_some() {
            // Coprime denominators: the cross sum is already in lowest terms.
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            let den = self.den.mul(&other.den);
            return Self::normalized(num, den);
        }
        let d1 = self.den.div_exact(&g0).expect("gcd divides denominator");
        let d2 = other.den.div_exact(&g0).expect("gcd divides denominator");
        let t = self.num.mul(&d2).add(&other.num.mul(&d1));
        if t.is_zero() {
            return Self::zero(self.nvars());
        }
        let g1 = gcd(&t, &g0);
        if g1.as_constant().is_some() {
            return Self::normalized(t, d1.mul(&other.den));
        }
        let num = t.div_exact(&g1).expect("gcd divides sum");
        let den = d1.mul(&other.den.div_exact(&g1).expect("gcd divides denominator"));
        Self::normalized(num, den)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars());
        }
        // Cross-cancellation: each gcd pairs a numerator with the opposite
        // denominator, and the cleared product is already in lowest terms.
        let c1 = gcd(&self.num, &other.den);
        let c2 = gcd(&other.num, &self.den);
        let (n1, d2) = if c1.as_constant().is_some() {
            (self.num.clone(), other.den.clone())
        } else {
            (
                self.num.div_exact(&c1).expect("gcd divides numerator"),
                other.den.div_exact(&c1).expect("gcd divides denominator"),
            )
        };
        let (n2, d1) = if c2.as_constant().is_some() {
            (other.num.clone(), self.den.clone())
        } else {
            (
                other.num.div_exact(&c2).expect("gcd divides numerator"),
                self.den.div_exact(&c2).expect("gcd divides denominator"),
            )
        };
        Self::normalized(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn scale(&self, c: &GaussianRational) -> RatFunc {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<RatFunc, RatFuncError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn inv(&self) -> Result<RatFunc, RatFuncError> {
        if self.is_zero() {
            return Err(RatFuncError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    /// Integer power; negative exponents invert (error on zero base).
    pub fn pow(&self, e: i32) -> Result<RatFunc, RatFuncError> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        // Coprimality survives powers, so no reduction is needed.
        let mut num = MultiPoly::one(self.nvars());
        let mut den = MultiPoly::one(self.nvars());
        for _ in 0..e {
            num = num.mul(&self.num);
            den = den.mul(&self.den);
        }
        Ok(Self::normalized(num, den))
    }

    /// Partial derivative by the quotient rule, reduced.
    pub fn derivative(&self, i: usize) -> RatFunc {
        let dn = self.num.partial(i);
        let dd = self.den.partial(i);
        if dd.is_zero() {
            return Self::reduced(dn, self.den.clone());
        }
        let e = gcd(&self.den, &dd);
        if e.as_constant().is_some() {
            // No repeated denominator factor along this variable, so the
            // quotient-rule pair is already in lowest terms.
            let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
            return Self::normalized(num, self.den.mul(&self.den));
        }
        let u = self.den.div_exact(&e).expect("gcd divides denominator");
        let w = dd.div_exact(&e).expect("gcd divides derivative");
        let num = dn.mul(&u).sub(&self.num.mul(&w));
        let den = e.mul(&u).mul(&u);
        Self::reduced(num, den)
    }

    pub fn eval(&self, point: &[GaussianRational]) -> Result<GaussianRational, RatFuncError> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(RatFuncError::Pole);
        }
        Ok(&self.num.eval(point) / &d)
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Result<Complex64, RatFuncError> {
        let d = self.den.eval_complex(point);
        if d.norm() < 1e-280 {
            return Err(RatFuncError::Pole);
        }
        Ok(self.num.eval_complex(point) / d)
    }

    /// Exact substitution of one variable; the slot stays with exponent zero.
    pub fn substitute(&self, i: usize, value: &GaussianRational) -> Result<RatFunc, RatFuncError> {
        let num = self.num.substitute(i, value);
        let den = self.den.substitute(i, value);
        if den.is_zero() {
            return Err(RatFuncError::Pole);
        }
        Ok(Self::reduced(num, den))
    }

    /// Degree of homogeneity, verified through the Euler identity
    /// `sum_i x_i * df/dx_i = k * f`. `None` when not homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        if self.is_zero() {
            return Some(0);
        }
        let dn = self.num.is_homogeneous()?;
        let dd = self.den.is_homogeneous()?;
        let k = dn as i64 - dd as i64;
        let mut euler = Self::zero(self.nvars());
        for i in 0..self.nvars() {
            euler = euler.add(&Self::var(self.nvars(), i).mul(&self.derivative(i)));
        }
        let expect = self.scale(&GaussianRational::from_int(k));
        if euler == expect {
            Some(k)
        } else {
            None
        }
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.is_polynomial() {
            self.num.display_with(names)
        } else {
            format!(
                "({}) / ({})",
                self.num.display_with(names),
                self.den.display_with(names)
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(i: usize) -> RatFunc {
        RatFunc::var(2, i)
    }

    fn c(n: i64) -> RatFunc {
        RatFunc::constant(2, GaussianRational::from_int(n))
    }

    /// q2*(9*q1^2 + q2^2)/q1^3
    pub(crate) fn sample_potential() -> RatFunc {
        let num = q(1).mul(&q(0).pow(2).unwrap().scale(&GaussianRational::from_int(9)).add(&q(1).pow(2).unwrap()));
        num.checked_div(&q(0).pow(3).unwrap()).unwrap()
    }

    #[test]
    fn reduction_cancels() {
        let f = c(1).checked_div(&q(0)).unwrap().mul(&q(0));
        assert_eq!(f, c(1));
        let g = q(1).checked_div(&q(0)).unwrap();
        assert_eq!(g.add(&g), q(1).scale(&GaussianRational::from_int(2)).checked_div(&q(0)).unwrap());
    }

    #[test]
    fn product_form_equals_expansion() {
        // q2*(q2 - q1)*(q2 - 2 q1)/q1^3 == (q2^3 - 3 q1 q2^2 + 2 q1^2 q2)/q1^3
        let lhs = q(1)
            .mul(&q(1).sub(&q(0)))
            .mul(&q(1).sub(&q(0).scale(&GaussianRational::from_int(2))))
            .checked_div(&q(0).pow(3).unwrap())
            .unwrap();
        let expanded = q(1)
            .pow(3)
            .unwrap()
            .sub(&q(0).mul(&q(1).pow(2).unwrap()).scale(&GaussianRational::from_int(3)))
            .add(&q(0).pow(2).unwrap().mul(&q(1)).scale(&GaussianRational::from_int(2)))
            .checked_div(&q(0).pow(3).unwrap())
            .unwrap();
        assert_eq!(lhs, expanded);
    }

    #[test]
    fn derivatives() {
        // d/dq2 of q2^2/q1^2 = 2 q2/q1^2
        let f = q(1).pow(2).unwrap().checked_div(&q(0).pow(2).unwrap()).unwrap();
        let d = f.derivative(1);
        let expect = q(1).scale(&GaussianRational::from_int(2)).checked_div(&q(0).pow(2).unwrap()).unwrap();
        assert_eq!(d, expect);
        // d/dq1 of the sample potential = (-9 q1^2 q2 - 3 q2^3)/q1^4
        let v = sample_potential();
        let d1 = v.derivative(0);
        let expect = q(0)
            .pow(2)
            .unwrap()
            .mul(&q(1))
            .scale(&GaussianRational::from_int(-9))
            .add(&q(1).pow(3).unwrap().scale(&GaussianRational::from_int(-3)))
            .checked_div(&q(0).pow(4).unwrap())
            .unwrap();
        assert_eq!(d1, expect);
        assert_eq!(c(7).derivative(0), RatFunc::zero(2));
    }

    #[test]
    fn homogeneity() {
        assert_eq!(sample_potential().homogeneous_degree(), Some(0));
        let quad = q(0).pow(2).unwrap().add(&q(1).pow(2).unwrap());
        assert_eq!(quad.homogeneous_degree(), Some(2));
        let mixed = q(0).add(&q(1).pow(2).unwrap());
        assert_eq!(mixed.homogeneous_degree(), None);
        let inv3 = c(1).checked_div(&q(0).pow(3).unwrap()).unwrap();
        assert_eq!(inv3.homogeneous_degree(), Some(-3));
    }

    #[test]
    fn evaluation_and_poles() {
        let f = sample_potential();
        let one = GaussianRational::one();
        let two = GaussianRational::from_int(2);
        // V(1,2) = 2*(9+4)/1 = 26
        assert_eq!(f.eval(&[one, two]), Ok(GaussianRational::from_int(26)));
        assert_eq!(
            f.eval(&[GaussianRational::zero(), GaussianRational::one()]),
            Err(RatFuncError::Pole)
        );
    }
}
