//! Sparse multivariate polynomials over Q(i) in a fixed graded-lex term order.

use crate::rational::GaussianRational;
use num::complex::Complex64;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Exponent vector; ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `nvars` variables; invariant: no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial(vec![0; nvars]), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(Monomial(e), GaussianRational::one());
        p
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: GaussianRational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        p.add_term(Monomial(exps), c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// `Some(c)` when the polynomial is the constant `c` (zero included).
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.total_degree() == 0 {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    /// Highest term in the graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = &*e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = Self::zero(self.nvars);
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn partial(&self, i: usize) -> MultiPoly {
        assert!(i < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), c * &GaussianRational::from_int(e as i64));
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// `Some(d)` when every term has total degree `d` (zero counts as any
    /// degree and returns `None` here to force explicit handling).
    pub fn is_homogeneous(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.total_degree();
        if it.all(|m| m.total_degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn eval(&self, point: &[GaussianRational]) -> GaussianRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &point[i].pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= point[i].powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes an exact value for variable `i`; the result still has
    /// `nvars` variables with exponent zero in slot `i`.
    pub fn substitute(&self, i: usize, value: &GaussianRational) -> MultiPoly {
        assert!(i < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut exps = m.0.clone();
            exps[i] = 0;
            out.add_term(Monomial(exps), c * &value.pow(e));
        }
        out
    }

    /// Keeps only the listed variables (in order); `None` if a dropped
    /// variable occurs with positive exponent.
    pub fn project(&self, keep: &[usize]) -> Option<MultiPoly> {
        let mut out = Self::zero(keep.len());
        for (m, c) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 && !keep.contains(&i) {
                    return None;
                }
            }
            let exps: Vec<u32> = keep.iter().map(|&i| m.0[i]).collect();
            out.add_term(Monomial(exps), c.clone());
        }
        Some(out)
    }

    /// Renames variables: exponent of old slot `i` moves to slot `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> MultiPoly {
        assert_eq!(perm.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0; self.nvars];
            for (i, &e) in m.0.iter().enumerate() {
                exps[perm[i]] = e;
            }
            out.add_term(Monomial(exps), c.clone());
        }
        out
    }

    /// Exact division; `None` when the divisor does not divide exactly.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert_eq!(self.nvars, divisor.nvars);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (dlm, dlc) = divisor.leading().unwrap();
        let dlm = dlm.clone();
        let dlc = dlc.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while !rem.is_zero() {
            let (rlm, rlc) = rem.leading().unwrap();
            if !dlm.divides(rlm) {
                return None;
            }
            let qm = rlm.div(&dlm);
            let qc = &rlc.clone() / &dlc;
            let t = Self::monomial(self.nvars, qm.0.clone(), qc);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(divisor));
        }
        Some(quot)
    }

    /// Scales so the graded-lex leading coefficient is one.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, lc)) => self.scale(&lc.inv()),
        }
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        // Highest terms first reads better.
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].to_string()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            let coeff = if factors.is_empty() {
                format!("({})", c)
            } else if c.is_one() {
                String::new()
            } else if (-c).is_one() {
                "-".to_string()
            } else {
                format!("({})*", c)
            };
            let term = format!("{}{}", coeff, factors.join("*"));
            if idx == 0 {
                out.push_str(&term);
            } else {
                let _ = write!(out, " + {}", term);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn grlex_order() {
        let m = |v: Vec<u32>| Monomial(v);
        assert!(m(vec![0, 2]) > m(vec![1, 0]));
        assert!(m(vec![1, 1]) > m(vec![0, 2]));
        assert!(m(vec![2, 0]) > m(vec![1, 1]));
    }

    #[test]
    fn arith_and_partial() {
        let q1 = MultiPoly::var(2, 0);
        let q2 = MultiPoly::var(2, 1);
        let p = q1.mul(&q1).scale(&c(9)).add(&q2.mul(&q2)).mul(&q2);
        // 9*q1^2*q2 + q2^3
        assert_eq!(p.nterms(), 2);
        assert_eq!(p.total_degree(), Some(3));
        assert_eq!(p.is_homogeneous(), Some(3));
        let dp = p.partial(0);
        assert_eq!(dp, q1.mul(&q2).scale(&c(18)));
        let at = p.eval(&[c(1), c(2)]);
        assert_eq!(at, c(26));
    }

    #[test]
    fn exact_division() {
        let q1 = MultiPoly::var(2, 0);
        let q2 = MultiPoly::var(2, 1);
        let sum = q1.add(&q2);
        let prod = sum.mul(&sum).mul(&q1);
        assert_eq!(prod.div_exact(&sum).unwrap(), sum.mul(&q1));
        assert_eq!(prod.div_exact(&q2), None);
    }

    #[test]
    fn projection_and_substitution() {
        let q1 = MultiPoly::var(2, 0);
        let q2 = MultiPoly::var(2, 1);
        let p = q1.mul(&q2).add(&q2.mul(&q2));
        let s = p.substitute(0, &c(1));
        let z_only = s.project(&[1]).unwrap();
        assert_eq!(z_only.nvars(), 1);
        assert_eq!(z_only.eval(&[c(3)]), c(12));
        assert_eq!(p.project(&[1]), None);
    }
}
