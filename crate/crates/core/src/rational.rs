//! Exact arithmetic in the field Q(i) of Gaussian rationals.

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A Gaussian rational `re + im*i` with arbitrary-precision parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::new(BigRational::from_integer(n), BigRational::zero())
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }

    /// `n/d` as a real rational. Panics if `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// `(a + b*i)/d`. Panics if `d == 0`.
    pub fn gauss_ratio(a: i64, b: i64, d: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(a), BigInt::from(d)),
            BigRational::new(BigInt::from(b), BigInt::from(d)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Real part as a rational when the imaginary part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.is_real() {
            Some(&self.re)
        } else {
            None
        }
    }

    /// True only for real rationals with denominator one.
    pub fn is_integer(&self) -> bool {
        self.is_real() && self.re.is_integer()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(self.re.to_integer())
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "inverse of zero Gaussian rational");
        Self::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self * &rhs.inv())
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Deterministic total order used for canonical normalization; not a
    /// field order.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

impl<'a, 'b> Add<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &'b GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a, 'b> Sub<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &'b GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a, 'b> Mul<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'b GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a, 'b> Div<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &'b GaussianRational) -> GaussianRational {
        self.checked_div(rhs)
            .expect("division by zero Gaussian rational")
    }
}

impl<'a> Neg for &'a GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        -&self
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let unit_im = self.im.abs().is_one();
        if self.re.is_zero() {
            return match (self.im.is_negative(), unit_im) {
                (false, true) => write!(f, "i"),
                (true, true) => write!(f, "-i"),
                (false, false) => write!(f, "{}*i", self.im),
                (true, false) => write!(f, "{}*i", self.im),
            };
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        if unit_im {
            write!(f, "{} {} i", self.re, sign)
        } else {
            write!(f, "{} {} {}*i", self.re, sign, self.im.abs())
        }
    }
}

/// Best rational approximation of `x` by continued fractions with denominator
/// at most `max_den`; `None` when no convergent lands within `tol`.
pub fn rationalize(x: f64, max_den: u64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (BigInt::one(), BigInt::from(x.floor() as i64));
    let (mut k0, mut k1) = (BigInt::zero(), BigInt::one());
    let mut frac = x - x.floor();
    let max_den = BigInt::from(max_den);
    for _ in 0..64 {
        let cand = BigRational::new(h1.clone(), k1.clone());
        if (cand.to_f64().unwrap_or(f64::NAN) - x).abs() <= tol {
            return Some(cand);
        }
        if frac.abs() < 1e-18 {
            break;
        }
        let inv = 1.0 / frac;
        if !inv.is_finite() || inv.abs() >= 9e15 {
            break;
        }
        let a = BigInt::from(inv.floor() as i64);
        frac = inv - inv.floor();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > max_den {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
    }
    let cand = BigRational::new(h1, k1);
    if (cand.to_f64().unwrap_or(f64::NAN) - x).abs() <= tol {
        Some(cand)
    } else {
        None
    }
}

/// Exact square root of a rational, when it exists.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// Exact square root in Q(i), when it exists.
pub fn gaussian_sqrt(z: &GaussianRational) -> Option<GaussianRational> {
    if z.is_zero() {
        return Some(GaussianRational::zero());
    }
    // (x + y i)^2 = a + b i needs x^2 = (a + |z|)/2, y = b / (2x) with |z|
    // rational; special-case b = 0.
    let norm = rational_sqrt(&z.norm_sqr())?;
    if z.im.is_zero() {
        return if z.re.is_negative() {
            let y = rational_sqrt(&(-z.re.clone()))?;
            Some(GaussianRational::new(BigRational::zero(), y))
        } else {
            rational_sqrt(&z.re).map(GaussianRational::from_rational)
        };
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let xsq = (&z.re + &norm) / &two;
    let x = rational_sqrt(&xsq)?;
    if x.is_zero() {
        return None;
    }
    let y = &z.im / &(&two * &x);
    let root = GaussianRational::new(x, y);
    debug_assert!((&root * &root) == *z);
    Some(root)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::new(
            BigRational::from_integer(BigInt::from(a)),
            BigRational::from_integer(BigInt::from(b)),
        )
    }

    #[test]
    fn field_ops() {
        let x = g(3, 2);
        let y = g(1, -1);
        assert_eq!(&x * &y, g(5, -1));
        assert_eq!(&x + &y, g(4, 1));
        assert_eq!(&(&x * &y) / &y, x);
        assert_eq!(&x * &x.inv(), GaussianRational::one());
        assert_eq!(GaussianRational::i().pow(2), g(-1, 0));
    }

    #[test]
    fn integer_detection() {
        assert!(g(-4, 0).is_integer());
        assert!(!g(0, 1).is_integer());
        assert!(!GaussianRational::ratio(1, 2).is_integer());
        assert_eq!(g(7, 0).to_integer(), Some(BigInt::from(7)));
    }

    #[test]
    fn display_forms() {
        assert_eq!(g(3, 0).to_string(), "3");
        assert_eq!(g(0, 1).to_string(), "i");
        assert_eq!(g(0, -1).to_string(), "-i");
        assert_eq!(g(-1, -6).to_string(), "-1 - 6*i");
        assert_eq!(GaussianRational::gauss_ratio(1, -3, 2).to_string(), "1/2 - 3/2*i");
    }

    #[test]
    fn rationalize_small_denominators() {
        let r = rationalize(-1.625, 1_000_000, 1e-9).unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(-13), BigInt::from(8)));
        let r = rationalize(1.0 / 3.0, 1_000_000, 1e-9).unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(1), BigInt::from(3)));
        assert!(rationalize(std::f64::consts::PI, 10, 1e-12).is_none());
    }

    #[test]
    fn exact_square_roots() {
        let m36 = g(-36, 0);
        assert_eq!(gaussian_sqrt(&m36), Some(g(0, 6)));
        assert_eq!(gaussian_sqrt(&g(0, -2)), Some(g(1, -1)));
        // sqrt(-6i) = sqrt(3)*(1-i) lies outside Q(i)
        assert!(gaussian_sqrt(&g(0, -6)).is_none());
        assert!(gaussian_sqrt(&g(2, 0)).is_none());
        assert_eq!(gaussian_sqrt(&g(0, 2)), Some(g(1, 1)));
    }
}
