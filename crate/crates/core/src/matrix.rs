//! Exact matrices over Q(i) and small numeric helpers for complex matrices.

use crate::rational::GaussianRational;
use crate::unipoly::UniPoly;
use num::complex::Complex64;
use num::{BigInt, BigRational, Integer, One};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QiMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl QiMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QiMatrix {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GaussianRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c));
        QiMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussianRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[GaussianRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn add(&self, other: &QiMatrix) -> QiMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QiMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &QiMatrix) -> QiMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QiMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> QiMatrix {
        QiMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &QiMatrix) -> QiMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = &*out.get(i, j) + &(a * other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = GaussianRational::zero();
                for j in 0..self.cols {
                    acc = &acc + &(self.get(i, j) * &v[j]);
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: usize) -> QiMatrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> GaussianRational {
        assert_eq!(self.rows, self.cols);
        let mut acc = GaussianRational::zero();
        for i in 0..self.rows {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<GaussianRational>> =
            (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let pivot = (rank..self.rows).find(|&r| !m[r][col].is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => continue,
            };
            m.swap(rank, pivot);
            let inv = m[rank][col].inv();
            for r in rank + 1..self.rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] * &inv;
                for c in col..self.cols {
                    m[r][c] = &m[r][c] - &(&f * &m[rank][c]);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Characteristic polynomial (monic, ascending coefficients) by the
    /// Faddeev-LeVerrier recurrence.
    pub fn charpoly(&self) -> UniPoly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![GaussianRational::zero(); n + 1];
        coeffs[n] = GaussianRational::one();
        let mut m = self.clone();
        for k in 1..=n {
            let c = -&(&m.trace() / &GaussianRational::from_int(k as i64));
            coeffs[n - k] = c.clone();
            if k < n {
                m = self.mul(&m.add(&Self::identity(n).scale(&c)));
            }
        }
        UniPoly::new(coeffs)
    }

    /// Minimal polynomial (monic) from the first linear dependence among
    /// vectorized powers I, A, A^2, ...
    pub fn minpoly(&self) -> UniPoly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let dim = n * n;
        // Reduced basis rows with pivot column and combination over powers.
        let mut basis: Vec<(usize, Vec<GaussianRational>, Vec<GaussianRational>)> = Vec::new();
        let mut power = Self::identity(n);
        for d in 0..=n {
            let mut v = power.data.clone();
            let mut combo = vec![GaussianRational::zero(); n + 2];
            combo[d] = GaussianRational::one();
            for (piv, row, rcombo) in &basis {
                if v[*piv].is_zero() {
                    continue;
                }
                let f = &v[*piv] / &row[*piv];
                for j in 0..dim {
                    v[j] = &v[j] - &(&f * &row[j]);
                }
                for j in 0..combo.len() {
                    combo[j] = &combo[j] - &(&f * &rcombo[j]);
                }
            }
            match v.iter().position(|x| !x.is_zero()) {
                None => {
                    // combo encodes the monic dependence: coefficient of A^d is 1.
                    return UniPoly::new(combo[..=d].to_vec());
                }
                Some(p) => basis.push((p, v, combo)),
            }
            power = power.mul(self);
        }
        unreachable!("Cayley-Hamilton guarantees dependence by degree n");
    }

    /// Nullspace basis via fraction-free (Bareiss) elimination after clearing
    /// denominators; each vector is normalized with its free slot set to one.
    pub fn nullspace(&self) -> Vec<Vec<GaussianRational>> {
        let mut m: Vec<Vec<GaussianRational>> =
            (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        for row in m.iter_mut() {
            let mut l = BigInt::one();
            for e in row.iter() {
                l = l.lcm(e.re.denom());
                l = l.lcm(e.im.denom());
            }
            if !l.is_one() {
                let s = GaussianRational::from_rational(BigRational::from_integer(l));
                for e in row.iter_mut() {
                    *e = &*e * &s;
                }
            }
        }
        let mut pivots: Vec<usize> = Vec::new();
        let mut prev = GaussianRational::one();
        let mut r = 0usize;
        for c in 0..self.cols {
            let pivot = (r..self.rows).find(|&i| !m[i][c].is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => continue,
            };
            m.swap(r, pivot);
            for i in r + 1..self.rows {
                for j in c + 1..self.cols {
                    let t = &(&m[i][j] * &m[r][c]) - &(&m[i][c] * &m[r][j]);
                    m[i][j] = &t / &prev;
                }
                m[i][c] = GaussianRational::zero();
            }
            prev = m[r][c].clone();
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![GaussianRational::zero(); self.cols];
            v[free] = GaussianRational::one();
            for (row_idx, &p) in pivots.iter().enumerate().rev() {
                let mut acc = GaussianRational::zero();
                for j in p + 1..self.cols {
                    if !v[j].is_zero() {
                        acc = &acc + &(&m[row_idx][j] * &v[j]);
                    }
                }
                v[p] = -&(&acc / &m[row_idx][p]);
            }
            out.push(v);
        }
        out
    }

    /// One solution of `self * x = rhs` with free variables set to zero;
    /// `None` when inconsistent.
    pub fn solve(&self, rhs: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
        assert_eq!(rhs.len(), self.rows);
        let mut m: Vec<Vec<GaussianRational>> = (0..self.rows)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.push(rhs[i].clone());
                row
            })
            .collect();
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            let pivot = (r..self.rows).find(|&i| !m[i][c].is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => continue,
            };
            m.swap(r, pivot);
            let inv = m[r][c].inv();
            for i in 0..self.rows {
                if i == r || m[i][c].is_zero() {
                    continue;
                }
                let f = &m[i][c] * &inv;
                for j in c..=self.cols {
                    m[i][j] = &m[i][j] - &(&f * &m[r][j]);
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        for i in r..self.rows {
            if !m[i][self.cols].is_zero() {
                return None;
            }
        }
        let mut x = vec![GaussianRational::zero(); self.cols];
        for (row_idx, &p) in pivots.iter().enumerate() {
            x[p] = &m[row_idx][self.cols] / &m[row_idx][p];
        }
        Some(x)
    }
}

// ---- numeric helpers ----

pub type CMatrix = Vec<Vec<Complex64>>;

pub fn c_identity(n: usize) -> CMatrix {
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn c_mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.len();
    let p = b[0].len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); p]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            let v = a[i][k];
            if v.norm() == 0.0 {
                continue;
            }
            for j in 0..p {
                out[i][j] += v * bk[j];
            }
        }
    }
    out
}

pub fn c_sub_scaled_identity(a: &CMatrix, z: Complex64) -> CMatrix {
    let mut m = a.clone();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= z;
    }
    m
}

pub fn c_max_abs(a: &CMatrix) -> f64 {
    a.iter()
        .flat_map(|r| r.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Numeric rank by full-pivot elimination; entries below
/// `rel_tol * scale` count as zero, where `scale` is the max input magnitude.
pub fn c_rank(a: &CMatrix, rel_tol: f64, scale: f64) -> usize {
    let mut m = a.clone();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let thresh = rel_tol * scale.max(1e-300);
    let mut rank = 0;
    let mut used_cols = vec![false; cols];
    loop {
        let mut best = (0usize, 0usize, 0.0f64);
        for i in rank..rows {
            for j in 0..cols {
                if used_cols[j] {
                    continue;
                }
                let v = m[i][j].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 <= thresh {
            break;
        }
        let (pi, pj, _) = best;
        m.swap(rank, pi);
        used_cols[pj] = true;
        let pivot = m[rank][pj];
        for i in rank + 1..rows {
            let f = m[i][pj] / pivot;
            if f.norm() == 0.0 {
                continue;
            }
            for j in 0..cols {
                let sub = f * m[rank][j];
                m[i][j] -= sub;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Solves a dense complex system by partial pivoting; `None` when singular
/// to working precision.
pub fn c_solve(a: &CMatrix, b: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = a.len();
    let mut m: Vec<Vec<Complex64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for c in 0..n {
        let pivot = (c..n).max_by(|&i, &j| m[i][c].norm().total_cmp(&m[j][c].norm()))?;
        if m[pivot][c].norm() < 1e-300 {
            return None;
        }
        m.swap(c, pivot);
        for i in 0..n {
            if i == c {
                continue;
            }
            let f = m[i][c] / m[c][c];
            if f.norm() == 0.0 {
                continue;
            }
            for j in c..=n {
                let sub = f * m[c][j];
                m[i][j] -= sub;
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Eigenvalue approximations: roots of the numeric characteristic polynomial.
pub fn c_charpoly_roots(a: &CMatrix) -> Vec<Complex64> {
    crate::unipoly::durand_kerner(&c_charpoly(a))
}

/// Numeric characteristic polynomial (ascending, monic) by Faddeev-LeVerrier.
pub fn c_charpoly(a: &CMatrix) -> Vec<Complex64> {
    let n = a.len();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut m = a.clone();
    for k in 1..=n {
        let tr: Complex64 = (0..n).map(|i| m[i][i]).sum();
        let c = -tr / (k as f64);
        coeffs[n - k] = c;
        if k < n {
            let mut shifted = m.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] += c;
            }
            m = c_mul(a, &shifted);
        }
    }
    coeffs
}
