//! Exact search for polynomial-in-momenta first integrals.
//!
//! Phase-space functions are stored as polynomials in the momenta whose
//! coefficients are rational functions of the positions.  The Poisson
//! bracket is computed exactly, and the search reduces {H, E} = 0 to exact
//! rational linear algebra over a graded ansatz.

use crate::matrix::QiMatrix;
use crate::multipoly::{Monomial, MultiPoly};
use crate::potential::Potential;
use crate::rational::GaussianRational;
use crate::ratfunc::{RatFunc, RatFuncError};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

/// Polynomial in the momenta with rational-function coefficients in the
/// positions.  Keys are momentum exponent tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseFunction {
    nq: usize,
    terms: BTreeMap<Monomial, RatFunc>,
}

impl PhaseFunction {
    pub fn zero(nq: usize) -> Self {
        PhaseFunction {
            nq,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_coefficient(c: RatFunc) -> Self {
        let nq = c.nvars();
        let mut f = PhaseFunction::zero(nq);
        f.insert_add(Monomial(vec![0; nq]), c);
        f
    }

    pub fn momentum(nq: usize, i: usize) -> Self {
        let mut exps = vec![0u32; nq];
        exps[i] = 1;
        let mut f = PhaseFunction::zero(nq);
        f.insert_add(Monomial(exps), RatFunc::one(nq));
        f
    }

    /// Kinetic plus potential energy.
    pub fn hamiltonian(v: &Potential) -> Self {
        let nq = v.nvars();
        let mut h = PhaseFunction::from_coefficient(v.expr.clone());
        let half = GaussianRational::ratio(1, 2);
        for i in 0..nq {
            let mut exps = vec![0u32; nq];
            exps[i] = 2;
            h.insert_add(Monomial(exps), RatFunc::constant(nq, half.clone()));
        }
        h
    }

    pub fn nq(&self) -> usize {
        self.nq
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RatFunc)> {
        self.terms.iter()
    }

    pub fn momentum_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    fn insert_add(&mut self, m: Monomial, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &PhaseFunction) -> PhaseFunction {
        assert_eq!(self.nq, other.nq);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> PhaseFunction {
        let mut out = PhaseFunction::zero(self.nq);
        for (m, c) in &self.terms {
            out.insert_add(m.clone(), c.neg());
        }
        out
    }

    pub fn sub(&self, other: &PhaseFunction) -> PhaseFunction {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> PhaseFunction {
        let mut out = PhaseFunction::zero(self.nq);
        for (m, coeff) in &self.terms {
            out.insert_add(m.clone(), coeff.scale(c));
        }
        out
    }

    pub fn mul(&self, other: &PhaseFunction) -> PhaseFunction {
        assert_eq!(self.nq, other.nq);
        let mut out = PhaseFunction::zero(self.nq);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_add(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> PhaseFunction {
        let mut out = PhaseFunction::from_coefficient(RatFunc::one(self.nq));
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative in the i-th position variable.
    pub fn partial_q(&self, i: usize) -> PhaseFunction {
        let mut out = PhaseFunction::zero(self.nq);
        for (m, c) in &self.terms {
            out.insert_add(m.clone(), c.derivative(i));
        }
        out
    }

    /// Partial derivative in the i-th momentum variable.
    pub fn partial_p(&self, i: usize) -> PhaseFunction {
        let mut out = PhaseFunction::zero(self.nq);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] = e - 1;
            out.insert_add(
                Monomial(exps),
                c.scale(&GaussianRational::from_int(e as i64)),
            );
        }
        out
    }

    pub fn eval(
        &self,
        q: &[GaussianRational],
        p: &[GaussianRational],
    ) -> Result<GaussianRational, RatFuncError> {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.eval(q)?;
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term = &term * &p[i];
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

/// Canonical Poisson bracket {f, g} = sum_i df/dq_i dg/dp_i - df/dp_i dg/dq_i.
pub fn poisson_bracket(f: &PhaseFunction, g: &PhaseFunction) -> PhaseFunction {
    assert_eq!(f.nq(), g.nq());
    let mut out = PhaseFunction::zero(f.nq());
    for i in 0..f.nq() {
        out = out
            .add(&f.partial_q(i).mul(&g.partial_p(i)))
            .sub(&f.partial_p(i).mul(&g.partial_q(i)));
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Highest momentum degree of the ansatz.
    pub momentum_degree: u32,
    /// Lowest allowed power of the first position variable is minus this.
    pub pole_order: i64,
    /// Highest allowed power of each position variable.
    pub degree_cap: i64,
    /// Refuse to build ansatz spaces larger than this.
    pub max_columns: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            momentum_degree: 4,
            pole_order: 11,
            degree_cap: 11,
            max_columns: 20_000,
        }
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("the potential denominator must be a power of the first position variable")]
    UnsupportedDenominator,
    #[error("ansatz needs {columns} columns, above the cap of {cap}")]
    TooLarge { columns: usize, cap: usize },
}

#[derive(Debug)]
pub struct SearchOutcome {
    /// Basis of the commuting functions found inside the ansatz.
    pub basis: Vec<PhaseFunction>,
    /// Number of ansatz columns examined.
    pub columns: usize,
    /// Rank of the found span beyond the powers of the Hamiltonian.
    pub beyond_energy_powers: usize,
    /// The filtered list: found functions that grow the span of the
    /// Hamiltonian powers, i.e. genuinely new integrals.
    pub beyond_basis: Vec<PhaseFunction>,
}

fn momentum_monomials(nq: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nq];
    fn rec(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, left: u32) {
        if pos == current.len() {
            out.push(Monomial(current.clone()));
            return;
        }
        for e in 0..=left {
            current[pos] = e;
            rec(out, current, pos + 1, left - e);
            current[pos] = 0;
        }
    }
    rec(&mut out, &mut current, 0, max_degree);
    out.sort();
    out
}

fn position_exponents(nq: usize, pole_order: i64, degree_cap: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for i in 0..nq {
        let lo = if i == 0 { -pole_order } else { 0 };
        let mut next = Vec::new();
        for prefix in &out {
            for e in lo..=degree_cap {
                let mut v = prefix.clone();
                v.push(e);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn laurent_monomial(nq: usize, exps: &[i64]) -> RatFunc {
    let mut num = vec![0u32; nq];
    let mut den = vec![0u32; nq];
    for (i, &e) in exps.iter().enumerate() {
        if e >= 0 {
            num[i] = e as u32;
        } else {
            den[i] = (-e) as u32;
        }
    }
    let n = MultiPoly::monomial(nq, num, GaussianRational::one());
    let d = MultiPoly::monomial(nq, den, GaussianRational::one());
    RatFunc::new(n, d).expect("monomial denominator is nonzero")
}

/// True when the polynomial is a constant multiple of a power of variable 0.
fn is_first_var_monomial(p: &MultiPoly) -> bool {
    if p.nterms() != 1 {
        return false;
    }
    let (m, _) = p.leading().expect("one term");
    m.0.iter().skip(1).all(|&e| e == 0)
}

/// Sparse exact vectorization of phase functions over their joint monomial
/// support, after clearing the common power of the first position variable.
fn vectorize(fns: &[&PhaseFunction], nq: usize) -> Vec<Vec<GaussianRational>> {
    let clear = fns
        .iter()
        .flat_map(|f| f.terms().map(|(_, c)| c.den().degree_in(0)))
        .max()
        .unwrap_or(0);
    let mut mult_exps = vec![0u32; nq];
    mult_exps[0] = clear;
    let mult = RatFunc::from_poly(MultiPoly::monomial(
        nq,
        mult_exps,
        GaussianRational::one(),
    ));
    let mut index: BTreeMap<(Monomial, Monomial), usize> = BTreeMap::new();
    let mut cleared: Vec<Vec<(Monomial, Monomial, GaussianRational)>> = Vec::new();
    for f in fns {
        let mut entries = Vec::new();
        for (pm, c) in f.terms() {
            let poly = c.mul(&mult);
            assert!(poly.is_polynomial(), "denominator not a first-var power");
            for (qm, coeff) in poly.num().terms() {
                let key = (pm.clone(), qm.clone());
                let next = index.len();
                index.entry(key.clone()).or_insert(next);
                entries.push((key.0, key.1, coeff.clone()));
            }
        }
        cleared.push(entries);
    }
    let width = index.len();
    cleared
        .into_iter()
        .map(|entries| {
            let mut row = vec![GaussianRational::zero(); width];
            for (pm, qm, c) in entries {
                row[index[&(pm, qm)]] = c;
            }
            row
        })
        .collect()
}

/// Linear rank of a family of phase functions over the Gaussian rationals.
pub fn span_rank(fns: &[&PhaseFunction], nq: usize) -> usize {
    if fns.is_empty() {
        return 0;
    }
    QiMatrix::from_rows(vectorize(fns, nq)).rank()
}

struct SparsePivot {
    /// Entries sorted by row; the first is the pivot row with coefficient 1.
    col: Vec<(usize, GaussianRational)>,
    /// Expression of the pivot column in the original columns.
    combo: Vec<GaussianRational>,
}

/// Nullspace of a sparse column collection by left-to-right elimination.
/// Each reduction step cancels the current minimum row, so work columns only
/// ever move downward and sparsity is preserved on banded systems.
fn sparse_nullspace(
    columns: Vec<Vec<(usize, GaussianRational)>>,
    ncols: usize,
) -> Vec<Vec<GaussianRational>> {
    let mut pivots: BTreeMap<usize, SparsePivot> = BTreeMap::new();
    let mut null_vectors = Vec::new();
    for (j, col) in columns.into_iter().enumerate() {
        let mut work: BTreeMap<usize, GaussianRational> = col.into_iter().collect();
        work.retain(|_, c| !c.is_zero());
        let mut combo = vec![GaussianRational::zero(); ncols];
        combo[j] = GaussianRational::one();
        loop {
            let Some((&r, _)) = work.iter().next() else {
                null_vectors.push(combo);
                break;
            };
            match pivots.get(&r) {
                Some(piv) => {
                    let factor = work.remove(&r).expect("leading entry present");
                    for (row, c) in piv.col.iter().skip(1) {
                        let delta = &factor * c;
                        match work.get_mut(row) {
                            Some(w) => {
                                *w = &*w - &delta;
                                if w.is_zero() {
                                    work.remove(row);
                                }
                            }
                            None => {
                                work.insert(*row, delta.neg());
                            }
                        }
                    }
                    for (target, c) in combo.iter_mut().zip(&piv.combo) {
                        if !c.is_zero() {
                            *target = &*target - &(&factor * c);
                        }
                    }
                }
                None => {
                    let inv = work[&r].inv();
                    let col: Vec<(usize, GaussianRational)> = work
                        .into_iter()
                        .map(|(row, c)| (row, &c * &inv))
                        .collect();
                    let combo = combo.iter().map(|c| c * &inv).collect();
                    pivots.insert(r, SparsePivot { col, combo });
                    break;
                }
            }
        }
    }
    null_vectors
}

/// Searches the graded Laurent ansatz for functions Poisson-commuting with
/// the Hamiltonian of the potential.
pub fn fi_search(v: &Potential, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let nq = v.nvars();
    if !is_first_var_monomial(v.expr.den()) {
        return Err(SearchError::UnsupportedDenominator);
    }

    let p_monos = momentum_monomials(nq, cfg.momentum_degree);
    let q_exps = position_exponents(nq, cfg.pole_order, cfg.degree_cap);
    let columns = p_monos.len() * q_exps.len();
    if columns > cfg.max_columns {
        return Err(SearchError::TooLarge {
            columns,
            cap: cfg.max_columns,
        });
    }

    let grad: Vec<RatFunc> = (0..nq).map(|i| v.expr.derivative(i)).collect();
    let k = v.degree;
    let graded = k == 0 || k == 2;

    // bracket of the Hamiltonian with a single ansatz column
    let bracket_column = |pm: &Monomial, coeff: &RatFunc| -> PhaseFunction {
        let mut out = PhaseFunction::zero(nq);
        for i in 0..nq {
            // dH/dq_i dE/dp_i term
            let e = pm.0[i];
            if e > 0 {
                let mut exps = pm.0.clone();
                exps[i] = e - 1;
                out.insert_add(
                    Monomial(exps),
                    grad[i]
                        .mul(coeff)
                        .scale(&GaussianRational::from_int(e as i64)),
                );
            }
            // -dH/dp_i dE/dq_i term
            let mut exps = pm.0.clone();
            exps[i] += 1;
            out.insert_add(Monomial(exps), coeff.derivative(i).neg());
        }
        out
    };

    // group ansatz columns into invariant blocks of the bracket
    let mut blocks: BTreeMap<(i64, u32), Vec<(Monomial, Vec<i64>)>> = BTreeMap::new();
    for pm in &p_monos {
        for exps in &q_exps {
            let label = if graded {
                let qdeg: i64 = exps.iter().sum();
                let pdeg = pm.total_degree();
                (2 * qdeg + k * pdeg as i64, pdeg % 2)
            } else {
                (0, 0)
            };
            blocks
                .entry(label)
                .or_default()
                .push((pm.clone(), exps.clone()));
        }
    }

    let h = PhaseFunction::hamiltonian(v);
    let mut basis: Vec<PhaseFunction> = Vec::new();
    for cols in blocks.values() {
        let mut images: Vec<PhaseFunction> = Vec::with_capacity(cols.len());
        let mut elements: Vec<PhaseFunction> = Vec::with_capacity(cols.len());
        for (pm, exps) in cols {
            let coeff = laurent_monomial(nq, exps);
            images.push(bracket_column(pm, &coeff));
            let mut b = PhaseFunction::zero(nq);
            b.insert_add(pm.clone(), coeff);
            elements.push(b);
        }
        // clear the common first-variable power so rows index plain monomials
        let clear = images
            .iter()
            .flat_map(|f| f.terms().map(|(_, c)| c.den().degree_in(0)))
            .max()
            .unwrap_or(0);
        let mut row_ids: BTreeMap<(Monomial, Monomial), usize> = BTreeMap::new();
        let sparse_cols: Vec<Vec<(usize, GaussianRational)>> = images
            .iter()
            .map(|image| {
                let mut entries = Vec::new();
                for (pm, c) in image.terms() {
                    let den = c.den();
                    assert!(
                        is_first_var_monomial(den),
                        "denominator not a first-var power"
                    );
                    let shift = clear - den.degree_in(0);
                    for (qm, coeff) in c.num().terms() {
                        let mut exps = qm.0.clone();
                        exps[0] += shift;
                        let key = (pm.clone(), Monomial(exps));
                        let next = row_ids.len();
                        let id = *row_ids.entry(key).or_insert(next);
                        entries.push((id, coeff.clone()));
                    }
                }
                entries
            })
            .collect();
        for combo in sparse_nullspace(sparse_cols, cols.len()) {
            let mut candidate = PhaseFunction::zero(nq);
            for (x, b) in combo.iter().zip(&elements) {
                if !x.is_zero() {
                    candidate = candidate.add(&b.scale(x));
                }
            }
            assert!(
                poisson_bracket(&h, &candidate).is_zero(),
                "candidate fails exact bracket verification"
            );
            basis.push(candidate);
        }
    }

    // span of the powers of H that fit the momentum-degree budget
    let mut powers: Vec<PhaseFunction> = Vec::new();
    let mut j = 0;
    loop {
        let hp = h.pow(j);
        if hp.momentum_degree() > cfg.momentum_degree {
            break;
        }
        powers.push(hp);
        j += 1;
    }
    let power_refs: Vec<&PhaseFunction> = powers.iter().collect();
    let base_rank = span_rank(&power_refs, nq);
    let mut beyond_basis: Vec<PhaseFunction> = Vec::new();
    let mut current = base_rank;
    for b in &basis {
        let mut refs = power_refs.clone();
        refs.extend(beyond_basis.iter());
        refs.push(b);
        let r = span_rank(&refs, nq);
        if r > current {
            current = r;
            beyond_basis.push(b.clone());
        }
    }

    Ok(SearchOutcome {
        basis,
        columns,
        beyond_energy_powers: current - base_rank,
        beyond_basis,
    })
}

/// Largest rank of the exact Jacobian of the given functions over several
/// random rational phase-space points: the count of functionally independent
/// functions among them.
pub fn independence_rank(fns: &[PhaseFunction], trials: usize, seed: u64) -> usize {
    if fns.is_empty() {
        return 0;
    }
    let nq = fns[0].nq();
    let partials: Vec<Vec<PhaseFunction>> = fns
        .iter()
        .map(|f| {
            (0..nq)
                .map(|i| f.partial_q(i))
                .chain((0..nq).map(|i| f.partial_p(i)))
                .collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    let mut done = 0;
    while done < trials {
        let sample = |rng: &mut ChaCha8Rng| -> GaussianRational {
            let n = rng.gen_range(-9i64..=9);
            let d = rng.gen_range(1i64..=4);
            GaussianRational::ratio(n, d)
        };
        let q: Vec<GaussianRational> = (0..nq).map(|_| sample(&mut rng)).collect();
        let p: Vec<GaussianRational> = (0..nq).map(|_| sample(&mut rng)).collect();
        let mut rows = Vec::with_capacity(fns.len());
        let mut ok = true;
        'outer: for parts in &partials {
            let mut row = Vec::with_capacity(2 * nq);
            for part in parts {
                match part.eval(&q, &p) {
                    Ok(val) => row.push(val),
                    Err(_) => {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            rows.push(row);
        }
        if !ok {
            continue;
        }
        best = best.max(QiMatrix::from_rows(rows).rank());
        done += 1;
        if best == fns.len().min(2 * nq) {
            break;
        }
    }
    best
}
