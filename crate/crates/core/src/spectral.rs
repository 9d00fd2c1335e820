//! Spectral analysis of Hessians at Darboux points: eigenvalues, Jordan
//! block structure, and the planar degree-zero closed form.
//!
//! Exact matrices get a fully certified analysis.  Numeric matrices are
//! handled integer-candidates-first: rank profiles of (A - zI)^j at integer
//! shifts are far more robust than clustering the roots of a numerically
//! computed characteristic polynomial, whose multiple roots smear over a
//! radius like eps^(1/m).

use crate::darboux::ProjectiveDarboux;
use crate::matrix::{
    c_max_abs, c_mul, c_rank, c_sub_scaled_identity, CMatrix, QiMatrix,
};
use crate::potential::Potential;
use crate::rational::GaussianRational;
use crate::unipoly::UniPoly;
use num::complex::Complex64;
use num::ToPrimitive;

/// Eigenvalue known exactly or only as a floating-point approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectralValue {
    Exact(GaussianRational),
    Numeric(Complex64),
}

impl SpectralValue {
    pub fn approx(&self) -> Complex64 {
        match self {
            SpectralValue::Exact(q) => q.to_complex(),
            SpectralValue::Numeric(z) => *z,
        }
    }

    pub fn exact(&self) -> Option<&GaussianRational> {
        match self {
            SpectralValue::Exact(q) => Some(q),
            SpectralValue::Numeric(_) => None,
        }
    }
}

/// One eigenvalue with its algebraic multiplicity and Jordan data.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenInfo {
    pub value: SpectralValue,
    pub multiplicity: usize,
    /// Jordan block sizes in descending order; empty when undetermined.
    pub block_sizes: Vec<usize>,
    /// Whether the eigenvalue is an integer; `None` when numerically ambiguous.
    pub is_integer: Option<bool>,
}

impl EigenInfo {
    pub fn integer_value(&self) -> Option<i64> {
        if self.is_integer != Some(true) {
            return None;
        }
        match &self.value {
            SpectralValue::Exact(q) => q.to_integer().and_then(|n| n.to_i64()),
            SpectralValue::Numeric(z) => Some(z.re.round() as i64),
        }
    }

    pub fn max_block(&self) -> Option<usize> {
        self.block_sizes.first().copied()
    }
}

/// Full spectral picture of one Hessian.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    pub dim: usize,
    pub char_poly: Option<UniPoly>,
    pub eigenvalues: Vec<EigenInfo>,
    pub semisimple: Option<bool>,
    pub all_integer: Option<bool>,
    /// True when numerics could not separate or classify everything.
    pub indeterminate: bool,
}

/// Exact planar Hessian at a proper projective Darboux point.
///
/// With s = 1/x*^2, w = v''(z*) s and u = (v'(z*) + z* v''(z*)) s the matrix
/// is [[-w-2, -u], [-u, w]]; its trace is -2 and its characteristic
/// polynomial is (x+1)^2 for every planar degree-zero potential.
pub fn planar_hessian(v: &Potential, pd: &ProjectiveDarboux) -> QiMatrix {
    let vpp = planar_second_derivative(v, pd);
    let s = pd.x_star_sq.inv();
    let w = &vpp * &s;
    let u = &(&pd.v1 + &(&pd.z_star * &vpp)) * &s;
    let two = GaussianRational::from_int(2);
    QiMatrix::from_rows(vec![
        vec![(&w + &two).neg(), u.neg()],
        vec![u.neg(), w],
    ])
}

/// v'(z*) + z* v''(z*): zero exactly when the planar Hessian is semisimple.
pub fn planar_semisimple_defect(v: &Potential, pd: &ProjectiveDarboux) -> GaussianRational {
    let vpp = planar_second_derivative(v, pd);
    &pd.v1 + &(&pd.z_star * &vpp)
}

fn planar_second_derivative(v: &Potential, pd: &ProjectiveDarboux) -> GaussianRational {
    let restricted = v
        .restrict_projective()
        .expect("finite on the affine chart");
    restricted
        .derivative(0)
        .derivative(0)
        .eval(&[pd.z_star.clone()])
        .expect("second derivative finite where the first is")
}

/// Certified spectral analysis of an exact matrix.
pub fn analyze_exact(m: &QiMatrix) -> SpectralData {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let char_poly = m.charpoly();
    let (rational_roots, residual) = char_poly.gaussian_roots();

    let mut eigenvalues = Vec::new();
    for (value, mult) in rational_roots {
        let shift = m.sub(&QiMatrix::identity(n).scale(&value));
        let blocks = blocks_from_ranks(n, mult, |j| shift.pow(j).rank());
        let is_integer = value.to_integer().is_some();
        eigenvalues.push(EigenInfo {
            value: SpectralValue::Exact(value),
            multiplicity: mult,
            block_sizes: blocks,
            is_integer: Some(is_integer),
        });
    }

    for (factor, mult) in squarefree_decomposition(&residual) {
        let roots = factor.complex_roots();
        let class_size = roots.len();
        let blocks = if mult == 1 {
            vec![1]
        } else {
            let eval = factor_of_matrix(m, &factor);
            let joint = blocks_from_ranks(n, mult * class_size, |j| eval.pow(j).rank());
            split_joint_blocks(&joint, class_size)
        };
        for root in roots {
            eigenvalues.push(EigenInfo {
                value: SpectralValue::Numeric(root),
                multiplicity: mult,
                block_sizes: blocks.clone(),
                is_integer: Some(false),
            });
        }
    }

    eigenvalues.sort_by(|a, b| {
        let (x, y) = (a.value.approx(), b.value.approx());
        x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
    });
    // the minimal polynomial settles diagonalizability even when block data
    // for an irrational class could not be split per root
    let semisimple = m.minpoly().is_squarefree();
    let all_integer = eigenvalues.iter().all(|e| e.is_integer == Some(true));
    SpectralData {
        dim: n,
        char_poly: Some(char_poly),
        eigenvalues,
        semisimple: Some(semisimple),
        all_integer: Some(all_integer),
        indeterminate: false,
    }
}

/// Numeric spectral analysis with integer candidates resolved by rank
/// profiles and everything else by root clustering.
pub fn analyze_numeric(m: &CMatrix, rel_tol: f64) -> SpectralData {
    let n = m.len();
    let scale = c_max_abs(m).max(1.0);
    let char_roots = crate::matrix::c_charpoly_roots(m);

    let mut indeterminate = false;
    let mut eigenvalues: Vec<EigenInfo> = Vec::new();
    let mut pool: Vec<Complex64> = char_roots.clone();

    // Integer candidates suggested by the numeric spectrum.
    let mut candidates: Vec<i64> = pool
        .iter()
        .filter(|z| z.im.abs() < 0.5)
        .map(|z| z.re.round() as i64)
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    candidates.retain(|&z| {
        pool.iter()
            .any(|r| (r - Complex64::new(z as f64, 0.0)).norm() < 0.5)
    });

    for z in candidates {
        let shift = c_sub_scaled_identity(m, Complex64::new(z as f64, 0.0));
        let ranks = numeric_rank_profile(&shift, n, rel_tol, scale);
        let mult = n - *ranks.last().expect("profile nonempty");
        if mult == 0 {
            continue;
        }
        let blocks = blocks_from_profile(n, mult, &ranks);
        // claim the `mult` nearest pool roots
        pool.sort_by(|a, b| {
            let za = (a - Complex64::new(z as f64, 0.0)).norm();
            let zb = (b - Complex64::new(z as f64, 0.0)).norm();
            za.total_cmp(&zb)
        });
        if pool.len() < mult {
            indeterminate = true;
            break;
        }
        let claimed: Vec<Complex64> = pool.drain(0..mult).collect();
        // a true eigenvalue of multiplicity m smears its numeric charpoly
        // roots over a radius like eps^(1/m); anything farther is suspect
        let smear = (f64::EPSILON * 100.0)
            .powf(1.0 / mult as f64)
            .max(1e-9)
            * scale.max(1.0);
        let suspicious = claimed
            .iter()
            .any(|r| (r - Complex64::new(z as f64, 0.0)).norm() > smear);
        let (blocks, is_integer) = if suspicious || blocks.is_empty() {
            indeterminate = true;
            (Vec::new(), None)
        } else {
            (blocks, Some(true))
        };
        eigenvalues.push(EigenInfo {
            value: SpectralValue::Exact(GaussianRational::from_int(z)),
            multiplicity: mult,
            block_sizes: blocks,
            is_integer,
        });
    }

    // Cluster whatever the integer pass did not account for.
    let cluster_tol = 1e-7 * scale;
    pool.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut idx = 0;
    while idx < pool.len() {
        let mut members = vec![pool[idx]];
        let mut j = idx + 1;
        while j < pool.len() && (pool[j] - *members.last().unwrap()).norm() < cluster_tol {
            members.push(pool[j]);
            j += 1;
        }
        idx = j;
        let center = members.iter().sum::<Complex64>() / members.len() as f64;
        let nearest_int = center.re.round();
        let int_distance = (center - Complex64::new(nearest_int, 0.0)).norm();
        let is_integer = if int_distance > 1e-4 {
            Some(false)
        } else {
            indeterminate = true;
            None
        };
        let blocks = if members.len() == 1 { vec![1] } else { Vec::new() };
        if blocks.is_empty() {
            indeterminate = true;
        }
        eigenvalues.push(EigenInfo {
            value: SpectralValue::Numeric(center),
            multiplicity: members.len(),
            block_sizes: blocks,
            is_integer,
        });
    }

    // Representatives too close together cannot be trusted as distinct.
    for a in 0..eigenvalues.len() {
        for b in a + 1..eigenvalues.len() {
            let d = (eigenvalues[a].value.approx() - eigenvalues[b].value.approx()).norm();
            if d < 1e-5 * scale.max(1.0) {
                indeterminate = true;
            }
        }
    }

    eigenvalues.sort_by(|a, b| {
        let (x, y) = (a.value.approx(), b.value.approx());
        x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
    });

    let known_nonsemisimple = eigenvalues
        .iter()
        .any(|e| e.block_sizes.first().map_or(false, |&s| s > 1));
    let all_blocks_known = eigenvalues.iter().all(|e| !e.block_sizes.is_empty());
    let semisimple = if known_nonsemisimple {
        Some(false)
    } else if all_blocks_known && !indeterminate {
        Some(true)
    } else {
        None
    };

    let known_nonint = eigenvalues.iter().any(|e| e.is_integer == Some(false));
    let all_int_known = eigenvalues.iter().all(|e| e.is_integer == Some(true));
    let all_integer = if known_nonint {
        Some(false)
    } else if all_int_known && !indeterminate {
        Some(true)
    } else {
        None
    };

    SpectralData {
        dim: n,
        char_poly: None,
        eigenvalues,
        semisimple,
        all_integer,
        indeterminate,
    }
}

/// Block sizes of one eigenvalue from the rank sequence of its shifted powers.
fn blocks_from_ranks(n: usize, mult: usize, mut rank_of_power: impl FnMut(usize) -> usize) -> Vec<usize> {
    let mut ranks = vec![n];
    for j in 1..=n {
        let r = rank_of_power(j);
        ranks.push(r);
        if r == n - mult {
            break;
        }
    }
    blocks_from_profile(n, mult, &ranks)
}

fn blocks_from_profile(_n: usize, mult: usize, ranks: &[usize]) -> Vec<usize> {
    // ranks[0] = n, ranks[j] = rank(shift^j); delta_j counts blocks of size >= j
    let mut deltas = Vec::new();
    for j in 1..ranks.len() {
        deltas.push(ranks[j - 1].saturating_sub(ranks[j]));
    }
    let mut blocks = Vec::new();
    for j in 0..deltas.len() {
        let exactly = deltas[j].saturating_sub(deltas.get(j + 1).copied().unwrap_or(0));
        for _ in 0..exactly {
            blocks.push(j + 1);
        }
    }
    blocks.sort_unstable_by(|a, b| b.cmp(a));
    // an inconsistent profile (possible with numeric thresholds) is reported
    // as undetermined rather than as a wrong structure
    if blocks.iter().sum::<usize>() != mult {
        return Vec::new();
    }
    blocks
}

fn numeric_rank_profile(shift: &CMatrix, n: usize, rel_tol: f64, base_scale: f64) -> Vec<usize> {
    let mut ranks = vec![n];
    let mut power = shift.clone();
    for _ in 1..=n {
        let scale = c_max_abs(&power).max(base_scale);
        let r = c_rank(&power, rel_tol, scale);
        let stalled = *ranks.last().unwrap() == r;
        ranks.push(r);
        if stalled || r == 0 {
            break;
        }
        power = c_mul(&power, shift);
    }
    ranks
}

/// Evaluates a polynomial at the matrix.
fn factor_of_matrix(m: &QiMatrix, p: &UniPoly) -> QiMatrix {
    let n = m.nrows();
    let mut acc = QiMatrix::zeros(n, n);
    for (j, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&m.pow(j).scale(c));
        }
    }
    acc
}

/// Squarefree decomposition by Yun's algorithm: pairs of (monic squarefree
/// factor, exact multiplicity in the input).
fn squarefree_decomposition(p: &UniPoly) -> Vec<(UniPoly, usize)> {
    match p.degree() {
        None | Some(0) => return Vec::new(),
        _ => {}
    }
    let p = p.monic();
    let a = p.gcd(&p.derivative());
    let mut b = p.divrem(&a).0;
    let c = p.derivative().divrem(&a).0;
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut mult = 1usize;
    while b.degree() > Some(0) {
        let factor = b.gcd(&d);
        if factor.degree() > Some(0) {
            out.push((factor.clone(), mult));
        }
        b = b.divrem(&factor).0;
        let cc = d.divrem(&factor).0;
        d = cc.sub(&b.derivative());
        mult += 1;
    }
    out
}

/// Divides a joint block multiset evenly over a class of conjugate roots.
fn split_joint_blocks(joint: &[usize], class_size: usize) -> Vec<usize> {
    let mut counts = std::collections::BTreeMap::new();
    for &b in joint {
        *counts.entry(b).or_insert(0usize) += 1;
    }
    let mut per_root = Vec::new();
    for (size, count) in counts.into_iter().rev() {
        if count % class_size != 0 {
            return Vec::new();
        }
        for _ in 0..count / class_size {
            per_root.push(size);
        }
    }
    per_root
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darboux::darboux_2d;
    use crate::potential::parse_potential;

    fn sample() -> Potential {
        parse_potential("q2*(9*q1^2+q2^2)/q1^3", &["q1", "q2"]).unwrap()
    }

    fn family(a: i64, b: i64) -> Potential {
        let expr = format!("q2*(q2-({a})*q1)*(q2-({b})*q1)/q1^3");
        parse_potential(&expr, &["q1", "q2"]).unwrap()
    }

    fn qi(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn sample_hessian_is_minus_identity() {
        let v = sample();
        for pd in darboux_2d(&v) {
            let h = planar_hessian(&v, &pd);
            assert_eq!(h, QiMatrix::identity(2).scale(&qi(-1)));
            assert!(planar_semisimple_defect(&v, &pd).is_zero());
        }
    }

    #[test]
    fn planar_trace_and_charpoly_are_rigid() {
        for (a, b) in [(1, 2), (0, 5), (-3, 4), (2, 7)] {
            let v = family(a, b);
            for pd in darboux_2d(&v) {
                let h = planar_hessian(&v, &pd);
                assert_eq!(h.trace(), qi(-2));
                let char_poly = h.charpoly();
                // (x+1)^2
                assert_eq!(
                    char_poly.coeffs(),
                    &[qi(1), qi(2), qi(1)]
                );
            }
        }
    }

    #[test]
    fn closed_form_matches_scaled_hessian() {
        for (a, b) in [(1, 2), (0, 3), (-1, 4)] {
            let v = family(a, b);
            let hess = v.hessian();
            for pd in darboux_2d(&v) {
                let closed = planar_hessian(&v, &pd);
                let s = pd.x_star_sq.inv();
                let chart = [GaussianRational::one(), pd.z_star.clone()];
                for i in 0..2 {
                    for j in 0..2 {
                        let entry = hess.0[i][j].eval(&chart).unwrap();
                        assert_eq!(*closed.get(i, j), &entry * &s);
                    }
                }
            }
        }
    }

    #[test]
    fn cubic_family_has_rank_one_defect() {
        let v = family(1, 2);
        let pd = &darboux_2d(&v)[0];
        assert!(!planar_semisimple_defect(&v, pd).is_zero());
        let h = planar_hessian(&v, pd);
        let shifted = h.add(&QiMatrix::identity(2));
        assert_eq!(shifted.rank(), 1);
        let data = analyze_exact(&h);
        assert_eq!(data.semisimple, Some(false));
        assert_eq!(data.eigenvalues.len(), 1);
        let e = &data.eigenvalues[0];
        assert_eq!(e.value, SpectralValue::Exact(qi(-1)));
        assert_eq!(e.multiplicity, 2);
        assert_eq!(e.block_sizes, vec![2]);
        assert_eq!(e.integer_value(), Some(-1));
    }

    #[test]
    fn exact_diagonal_matrix() {
        let m = QiMatrix::from_rows(vec![
            vec![qi(2), qi(0)],
            vec![qi(0), qi(3)],
        ]);
        let data = analyze_exact(&m);
        assert_eq!(data.semisimple, Some(true));
        assert_eq!(data.all_integer, Some(true));
        assert_eq!(data.eigenvalues.len(), 2);
        assert!(data.eigenvalues.iter().all(|e| e.block_sizes == vec![1]));
    }

    #[test]
    fn exact_jordan_structure() {
        // blocks {2, 1} at eigenvalue -1
        let m = QiMatrix::from_rows(vec![
            vec![qi(-1), qi(1), qi(0)],
            vec![qi(0), qi(-1), qi(0)],
            vec![qi(0), qi(0), qi(-1)],
        ]);
        let data = analyze_exact(&m);
        assert_eq!(data.semisimple, Some(false));
        assert_eq!(data.all_integer, Some(true));
        let e = &data.eigenvalues[0];
        assert_eq!(e.multiplicity, 3);
        assert_eq!(e.block_sizes, vec![2, 1]);
        assert!(!m.minpoly().is_squarefree());
    }

    #[test]
    fn exact_rational_noninteger() {
        let half = GaussianRational::ratio(1, 2);
        let m = QiMatrix::from_rows(vec![
            vec![half.clone(), qi(0), qi(0)],
            vec![qi(0), half, qi(0)],
            vec![qi(0), qi(0), qi(3)],
        ]);
        let data = analyze_exact(&m);
        assert_eq!(data.all_integer, Some(false));
        assert_eq!(data.semisimple, Some(true));
        let e = &data.eigenvalues[0];
        assert_eq!(e.multiplicity, 2);
        assert_eq!(e.block_sizes, vec![1, 1]);
        assert_eq!(e.is_integer, Some(false));
    }

    #[test]
    fn exact_irrational_semisimple_pair() {
        // companion(x^2 - 2) twice: eigenvalues +-sqrt(2), each doubled, diagonalizable
        let m = QiMatrix::from_rows(vec![
            vec![qi(0), qi(2), qi(0), qi(0)],
            vec![qi(1), qi(0), qi(0), qi(0)],
            vec![qi(0), qi(0), qi(0), qi(2)],
            vec![qi(0), qi(0), qi(1), qi(0)],
        ]);
        let data = analyze_exact(&m);
        assert_eq!(data.semisimple, Some(true));
        assert_eq!(data.all_integer, Some(false));
        assert_eq!(data.eigenvalues.len(), 2);
        for e in &data.eigenvalues {
            assert_eq!(e.multiplicity, 2);
            assert_eq!(e.block_sizes, vec![1, 1]);
            assert!((e.value.approx().re.abs() - 2f64.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_irrational_jordan_pair() {
        // [[C, I], [0, C]] with C = companion(x^2 - 2): one size-2 block per root
        let m = QiMatrix::from_rows(vec![
            vec![qi(0), qi(2), qi(1), qi(0)],
            vec![qi(1), qi(0), qi(0), qi(1)],
            vec![qi(0), qi(0), qi(0), qi(2)],
            vec![qi(0), qi(0), qi(1), qi(0)],
        ]);
        let data = analyze_exact(&m);
        assert_eq!(data.semisimple, Some(false));
        for e in &data.eigenvalues {
            assert_eq!(e.block_sizes, vec![2]);
            assert_eq!(e.is_integer, Some(false));
        }
        assert!(!m.minpoly().is_squarefree());
    }

    #[test]
    fn numeric_triple_eigenvalue_blocks() {
        // Hessian of q2 q3 / q1^2 at a certified Darboux point: triple -1, blocks {2,1}
        let v = parse_potential("q2*q3/q1^2", &["q1", "q2", "q3"]).unwrap();
        let s = 0.5f64.sqrt();
        let d = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, s),
            Complex64::new(0.0, s),
        ];
        let h = v.hessian().eval_complex(&d).unwrap();
        let data = analyze_numeric(&h, 1e-8);
        assert!(!data.indeterminate);
        assert_eq!(data.semisimple, Some(false));
        assert_eq!(data.all_integer, Some(true));
        assert_eq!(data.eigenvalues.len(), 1);
        let e = &data.eigenvalues[0];
        assert_eq!(e.multiplicity, 3);
        assert_eq!(e.block_sizes, vec![2, 1]);
        assert_eq!(e.integer_value(), Some(-1));
    }

    #[test]
    fn numeric_simple_spectrum() {
        let m = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(2.5, 0.0)],
        ];
        let data = analyze_numeric(&m, 1e-8);
        assert!(!data.indeterminate);
        assert_eq!(data.semisimple, Some(true));
        assert_eq!(data.all_integer, Some(false));
        assert_eq!(data.eigenvalues[0].is_integer, Some(true));
        assert_eq!(data.eigenvalues[1].is_integer, Some(false));
    }

    #[test]
    fn numeric_ambiguity_is_flagged() {
        let m = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0 + 1e-6, 0.0)],
        ];
        let data = analyze_numeric(&m, 1e-8);
        assert!(data.indeterminate);
        assert_eq!(data.semisimple, None);
    }

    #[test]
    fn numeric_matches_exact_on_rational_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let rows: Vec<Vec<GaussianRational>> = (0..3)
                .map(|_| (0..3).map(|_| qi(rng.gen_range(-3..=3))).collect())
                .collect();
            let m = QiMatrix::from_rows(rows.clone());
            let exact = analyze_exact(&m);
            let numeric_m: CMatrix = rows
                .iter()
                .map(|r| r.iter().map(|x| x.to_complex()).collect())
                .collect();
            let numeric = analyze_numeric(&numeric_m, 1e-8);
            if numeric.indeterminate {
                continue;
            }
            assert_eq!(numeric.semisimple, exact.semisimple);
            assert_eq!(numeric.all_integer, exact.all_integer);
        }
    }
}
