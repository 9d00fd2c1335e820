//! Parametrized families of homogeneous potentials.
//!
//! A family is an expression over the position variables plus parameter
//! symbols, homogeneous in the positions alone.  Members are obtained by
//! substituting exact parameter values; for planar degree-zero families with
//! two parameters entering bilinearly, the locus where both singular
//! directions carry a semisimple Hessian is solved in closed form.

use crate::matrix::QiMatrix;
use crate::multipoly::{Monomial, MultiPoly};
use crate::potential::{parse_expression, Potential, PotentialError};
use crate::rational::{gaussian_sqrt, GaussianRational};
use crate::ratfunc::RatFunc;
use thiserror::Error;

#[derive(Clone, Debug)]
pub struct PotentialFamily {
    /// Expression over nq position variables followed by the parameters.
    pub expr: RatFunc,
    nq: usize,
    pub q_names: Vec<String>,
    pub param_names: Vec<String>,
    /// Homogeneity degree in the positions.
    pub degree: i64,
}

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("{0}")]
    Parse(#[from] PotentialError),
    #[error("expression is not homogeneous in the position variables")]
    NotHomogeneousInPositions,
    #[error("constraint solve needs a planar degree-zero family with two parameters")]
    UnsupportedShape,
    #[error("semisimplicity conditions are not bilinear in the parameters")]
    NonBilinearConditions,
    #[error("semisimplicity conditions do not determine the parameters")]
    DegenerateConditions,
    #[error("parameter substitution hit a pole")]
    SubstitutionPole,
}

fn q_degree(m: &Monomial, nq: usize) -> i64 {
    m.0[..nq].iter().map(|&e| e as i64).sum()
}

fn uniform_q_degree(p: &MultiPoly, nq: usize) -> Option<i64> {
    let mut degree = None;
    for (m, _) in p.terms() {
        let d = q_degree(m, nq);
        match degree {
            None => degree = Some(d),
            Some(seen) if seen != d => return None,
            Some(_) => {}
        }
    }
    degree
}

pub fn parse_family(
    text: &str,
    q_names: &[&str],
    param_names: &[&str],
) -> Result<PotentialFamily, FamilyError> {
    let all: Vec<&str> = q_names.iter().chain(param_names).copied().collect();
    let expr = parse_expression(text, &all)?;
    let nq = q_names.len();
    let dn = uniform_q_degree(expr.num(), nq).ok_or(FamilyError::NotHomogeneousInPositions)?;
    let dd = uniform_q_degree(expr.den(), nq).ok_or(FamilyError::NotHomogeneousInPositions)?;
    Ok(PotentialFamily {
        expr,
        nq,
        q_names: q_names.iter().map(|s| s.to_string()).collect(),
        param_names: param_names.iter().map(|s| s.to_string()).collect(),
        degree: dn - dd,
    })
}

impl PotentialFamily {
    pub fn nq(&self) -> usize {
        self.nq
    }

    /// The member of the family at the given parameter values.
    pub fn member(&self, values: &[GaussianRational]) -> Result<Potential, FamilyError> {
        assert_eq!(values.len(), self.param_names.len());
        let mut expr = self.expr.clone();
        for (offset, value) in values.iter().enumerate() {
            expr = expr
                .substitute(self.nq + offset, value)
                .map_err(|_| FamilyError::SubstitutionPole)?;
        }
        let keep: Vec<usize> = (0..self.nq).collect();
        let num = expr.num().project(&keep).expect("parameters substituted");
        let den = expr.den().project(&keep).expect("parameters substituted");
        let projected = RatFunc::new(num, den).map_err(|_| FamilyError::SubstitutionPole)?;
        Ok(Potential::from_ratfunc(projected, self.q_names.clone())
            .expect("member inherits homogeneity"))
    }
}

/// Exact parameter constraints making the Hessian semisimple at both
/// singular directions of a planar degree-zero two-parameter family.
#[derive(Clone, Debug, PartialEq)]
pub struct SemisimpleLocus {
    /// Sum of the two parameters.
    pub sum: GaussianRational,
    /// Product of the two parameters.
    pub product: GaussianRational,
    /// Explicit parameter pair when the discriminant has a square root in
    /// the Gaussian rationals.
    pub parameters: Option<(GaussianRational, GaussianRational)>,
}

/// Solves for the parameters of a planar degree-zero family at which the
/// restricted Hessian is semisimple at both singular directions.
///
/// The two defect conditions must be bilinear in the parameters; they are
/// then linear in the symmetric combinations (sum, product), which the
/// solver recovers before splitting them into the parameter pair.
pub fn solve_semisimple_locus(family: &PotentialFamily) -> Result<SemisimpleLocus, FamilyError> {
    if family.nq != 2 || family.degree != 0 || family.param_names.len() != 2 {
        return Err(FamilyError::UnsupportedShape);
    }
    let nvars = 4;
    let one = GaussianRational::one();
    let restricted = family
        .expr
        .substitute(0, &one)
        .map_err(|_| FamilyError::UnsupportedShape)?;
    // defect along the slope variable: v'(z) + z v''(z)
    let v1 = restricted.derivative(1);
    let v2 = v1.derivative(1);
    let defect = v1.add(&RatFunc::var(nvars, 1).mul(&v2));

    let i = GaussianRational::i();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for z_star in [i.clone(), i.neg()] {
        let at_point = defect
            .substitute(1, &z_star)
            .map_err(|_| FamilyError::UnsupportedShape)?;
        let e = at_point.num();
        let mut alpha = GaussianRational::zero(); // coefficient of a*b
        let mut beta_a = GaussianRational::zero();
        let mut beta_b = GaussianRational::zero();
        let mut gamma = GaussianRational::zero();
        for (m, c) in e.terms() {
            match (m.0[2], m.0[3]) {
                (0, 0) => gamma = c.clone(),
                (1, 0) => beta_a = c.clone(),
                (0, 1) => beta_b = c.clone(),
                (1, 1) => alpha = c.clone(),
                _ => return Err(FamilyError::NonBilinearConditions),
            }
        }
        if beta_a != beta_b {
            return Err(FamilyError::NonBilinearConditions);
        }
        rows.push(vec![beta_a, alpha]);
        rhs.push(gamma.neg());
    }

    let system = QiMatrix::from_rows(rows);
    if system.rank() != 2 {
        return Err(FamilyError::DegenerateConditions);
    }
    let solution = system
        .solve(&rhs)
        .ok_or(FamilyError::DegenerateConditions)?;
    let sum = solution[0].clone();
    let product = solution[1].clone();
    // parameters are the roots of t^2 - sum t + product
    let four = GaussianRational::from_int(4);
    let disc = &(&sum * &sum) - &(&four * &product);
    let half = GaussianRational::ratio(1, 2);
    let parameters = gaussian_sqrt(&disc).map(|r| {
        (
            &(&sum + &r) * &half,
            &(&sum - &r) * &half,
        )
    });
    Ok(SemisimpleLocus {
        sum,
        product,
        parameters,
    })
}
