//! Multivariate polynomial gcd over Q(i) via primitive pseudo-remainder
//! sequences, recursing on the coefficient ring.  Inputs univariate in a
//! single shared variable drop to monic Euclid, which keeps the coefficient
//! growth of the content computations polynomial.

use crate::multipoly::MultiPoly;
use crate::rational::GaussianRational;
use crate::unipoly::UniPoly;

/// Coefficients of `f` viewed as univariate in variable `v`; each entry keeps
/// the full variable count with exponent zero in slot `v`.
fn univar(f: &MultiPoly, v: usize) -> Vec<MultiPoly> {
    let deg = f.degree_in(v) as usize;
    let mut coeffs = vec![MultiPoly::zero(f.nvars()); deg + 1];
    for (m, c) in f.terms() {
        let e = m.0[v] as usize;
        let mut exps = m.0.clone();
        exps[v] = 0;
        coeffs[e] = coeffs[e].add(&MultiPoly::monomial(f.nvars(), exps, c.clone()));
    }
    coeffs
}

fn collect(coeffs: &[MultiPoly], v: usize, nvars: usize) -> MultiPoly {
    let mut out = MultiPoly::zero(nvars);
    let xv = MultiPoly::var(nvars, v);
    let mut pow = MultiPoly::one(nvars);
    for c in coeffs {
        out = out.add(&c.mul(&pow));
        pow = pow.mul(&xv);
    }
    out
}

fn trim(coeffs: &mut Vec<MultiPoly>) {
    while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
        coeffs.pop();
    }
}

fn to_unipoly(f: &MultiPoly, v: usize) -> UniPoly {
    let mut coeffs = vec![GaussianRational::zero(); f.degree_in(v) as usize + 1];
    for (m, c) in f.terms() {
        coeffs[m.0[v] as usize] = c.clone();
    }
    UniPoly::new(coeffs)
}

fn from_unipoly(p: &UniPoly, v: usize, nvars: usize) -> MultiPoly {
    let mut out = MultiPoly::zero(nvars);
    for (e, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            let mut exps = vec![0; nvars];
            exps[v] = e as u32;
            out = out.add(&MultiPoly::monomial(nvars, exps, c.clone()));
        }
    }
    out
}

fn content(coeffs: &[MultiPoly]) -> MultiPoly {
    let nvars = coeffs
        .first()
        .map(|c| c.nvars())
        .expect("content of empty coefficient list");
    let mut acc = MultiPoly::zero(nvars);
    for c in coeffs {
        acc = gcd(&acc, c);
        if let Some(k) = acc.as_constant() {
            if k.is_one() {
                return acc;
            }
        }
    }
    acc
}

/// One pseudo-remainder step sequence: returns a polynomial multiple of
/// `rem(A, B)` obtained without coefficient division.
fn pseudo_rem(a: &[MultiPoly], b: &[MultiPoly], nvars: usize) -> Vec<MultiPoly> {
    let db = b.len() - 1;
    let lcb = b[db].clone();
    let mut r: Vec<MultiPoly> = a.to_vec();
    trim(&mut r);
    while r.len() > db {
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        let shift = dr - db;
        let mut next = vec![MultiPoly::zero(nvars); dr];
        for (j, item) in next.iter_mut().enumerate().take(dr) {
            let t1 = r.get(j).map(|p| p.mul(&lcb)).unwrap_or_else(|| MultiPoly::zero(nvars));
            let t2 = if j >= shift && j - shift <= db {
                b[j - shift].mul(&lcr)
            } else {
                MultiPoly::zero(nvars)
            };
            *item = t1.sub(&t2);
        }
        r = next;
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

// --- modular coprimality certificate ---------------------------------------
//
// A positive certificate that the gcd of two primitive polynomials (viewed
// univariately in the main variable) is 1, obtained from one Euclid run over
// GF(p) with the other variables specialized.  Soundness: divisibility
// survives reduction and specialization, and the specialized leading
// coefficients are checked to be nonzero, so the degree of the true gcd can
// only drop.  A failed certificate proves nothing and the caller falls back
// to the exact pseudo-remainder sequence.

fn mulmod_raw(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod_raw(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_raw(acc, base, p);
        }
        base = mulmod_raw(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the listed bases decide primality for all u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_raw(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_raw(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The largest prime `p = 1 mod 4` below `2^62`: large enough that lifted
/// gcd coefficients up to roughly `sqrt(p)` in absolute value are recovered
/// exactly, and small enough that the lattice arithmetic stays inside i128.
fn modulus() -> u64 {
    static MODULUS: std::sync::OnceLock<u64> = std::sync::OnceLock::new();
    *MODULUS.get_or_init(|| {
        let mut p = (1u64 << 62) - 3;
        loop {
            if is_prime_u64(p) {
                return p;
            }
            p -= 4;
        }
    })
}

fn mod_pow(base: u64, exp: u64) -> u64 {
    powmod_raw(base, exp, modulus())
}

fn mod_inv(x: u64) -> u64 {
    mod_pow(x, modulus() - 2)
}

fn sqrt_of_minus_one() -> u64 {
    let p = modulus();
    for a in 2.. {
        let r = mod_pow(a, (p - 1) / 4);
        if mulmod_raw(r, r, p) == p - 1 {
            return r;
        }
    }
    unreachable!()
}

fn big_mod(n: &num::BigInt) -> u64 {
    use num::ToPrimitive;
    let p = num::BigInt::from(modulus());
    let r = ((n % &p) + &p) % &p;
    r.to_u64().expect("reduced below the modulus")
}

/// Image of a Gaussian rational in GF(p); `None` when p divides a denominator.
fn coeff_mod(c: &GaussianRational, imag_unit: u64) -> Option<u64> {
    let part = |r: &num::BigRational| -> Option<u64> {
        let den = big_mod(r.denom());
        if den == 0 {
            return None;
        }
        Some(mulmod_raw(big_mod(r.numer()), mod_inv(den), modulus()))
    };
    let re = part(&c.re)?;
    let im = part(&c.im)?;
    let p = modulus();
    Some(((re as u128 + im as u128 * imag_unit as u128) % p as u128) as u64)
}

/// Specializes every variable except `v` and reduces to GF(p)[v].
/// `None` when a denominator vanishes mod p.
fn specialize_mod(
    coeffs: &[MultiPoly],
    vals: &[u64],
    imag_unit: u64,
) -> Option<Vec<u64>> {
    let mut out = vec![0u64; coeffs.len()];
    for (e, poly) in coeffs.iter().enumerate() {
        let mut acc: u64 = 0;
        for (m, c) in poly.terms() {
            let p = modulus();
            let mut term = coeff_mod(c, imag_unit)?;
            for (j, &exp) in m.0.iter().enumerate() {
                if exp > 0 {
                    term = mulmod_raw(term, mod_pow(vals[j], exp as u64), p);
                }
            }
            acc = ((acc as u128 + term as u128) % p as u128) as u64;
        }
        out[e] = acc;
    }
    Some(out)
}

fn mod_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn mul_mod(a: u64, b: u64) -> u64 {
    mulmod_raw(a, b, modulus())
}

fn add_mod(a: u64, b: u64) -> u64 {
    ((a as u128 + b as u128) % modulus() as u128) as u64
}

fn sub_mod(a: u64, b: u64) -> u64 {
    let p = modulus();
    ((a as u128 + (p - b) as u128) % p as u128) as u64
}

/// Monic gcd in GF(p)[x] by the Euclidean algorithm; empty means zero input.
fn mod_gcd_poly(mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    while !b.is_empty() {
        let lead_inv = mod_inv(*b.last().unwrap());
        let db = b.len() - 1;
        while a.len() > db {
            let da = a.len() - 1;
            if a[da] != 0 {
                let q = mul_mod(a[da], lead_inv);
                let shift = da - db;
                for j in 0..=db {
                    a[shift + j] = sub_mod(a[shift + j], mul_mod(q, b[j]));
                }
            }
            a.pop();
            mod_trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
        mod_trim(&mut b);
    }
    if let Some(&lead) = a.last() {
        let inv = mod_inv(lead);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv);
        }
    }
    a
}

/// Degree of gcd in GF(p)[x]; inputs nonempty.
fn mod_gcd_degree(a: Vec<u64>, b: Vec<u64>) -> usize {
    mod_gcd_poly(a, b).len().saturating_sub(1)
}

/// Coefficients of the Newton interpolation polynomial through
/// `(xs[k], ys[k])` over GF(p); the nodes must be distinct.
fn mod_interpolate(xs: &[u64], ys: &[u64]) -> Vec<u64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for k in (j..n).rev() {
            let num = sub_mod(dd[k], dd[k - 1]);
            let den = sub_mod(xs[k], xs[k - j]);
            dd[k] = mul_mod(num, mod_inv(den));
        }
    }
    let mut poly = vec![dd[n - 1]];
    for k in (0..n - 1).rev() {
        let mut next = vec![0u64; poly.len() + 1];
        for (idx, &cv) in poly.iter().enumerate() {
            next[idx + 1] = add_mod(next[idx + 1], cv);
            next[idx] = sub_mod(next[idx], mul_mod(cv, xs[k]));
        }
        next[0] = add_mod(next[0], dd[k]);
        poly = next;
    }
    mod_trim(&mut poly);
    poly
}

/// Shortest-vector basis of the lattice `{(x, y) : x + y*r = 0 mod p}` by
/// Lagrange reduction; used to lift residues back to small Gaussian integers.
fn reduced_unit_lattice(imag_unit: u64) -> ((i128, i128), (i128, i128)) {
    let mut u = (modulus() as i128, 0i128);
    let mut v = (-(imag_unit as i128), 1i128);
    loop {
        if u.0 * u.0 + u.1 * u.1 < v.0 * v.0 + v.1 * v.1 {
            std::mem::swap(&mut u, &mut v);
        }
        let nv = v.0 * v.0 + v.1 * v.1;
        let dot = u.0 * v.0 + u.1 * v.1;
        // nearest integer to dot/nv
        let q = (2 * dot + nv).div_euclid(2 * nv);
        if q == 0 {
            return (u, v);
        }
        u = (u.0 - q * v.0, u.1 - q * v.1);
    }
}

/// The small Gaussian integer `x + y*i` with `x + y*r = c mod p`, found by
/// rounding against the reduced lattice basis.
fn lift_gaussian(c: u64, basis: &((i128, i128), (i128, i128))) -> GaussianRational {
    let (b1, b2) = basis;
    let det = b1.0 * b2.1 - b1.1 * b2.0;
    let round_div = |n: i128, d: i128| -> i128 {
        let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
        (2 * n + d).div_euclid(2 * d)
    };
    let t = (c as i128, 0i128);
    let q1 = round_div(t.0 * b2.1 - t.1 * b2.0, det);
    let q2 = round_div(b1.0 * t.1 - b1.1 * t.0, det);
    let x = t.0 - q1 * b1.0 - q2 * b2.0;
    let y = t.1 - q1 * b1.1 - q2 * b2.1;
    GaussianRational::new(
        num::BigRational::from(num::BigInt::from(x)),
        num::BigRational::from(num::BigInt::from(y)),
    )
}

/// Rescales by a positive rational so the coefficients become Gaussian
/// integers whose integer parts share no common factor.
fn z_primitive(f: &MultiPoly) -> MultiPoly {
    use num::Integer;
    let mut den_lcm = num::BigInt::from(1);
    for (_, c) in f.terms() {
        den_lcm = den_lcm.lcm(c.re.denom());
        den_lcm = den_lcm.lcm(c.im.denom());
    }
    let mut num_gcd = num::BigInt::from(0);
    for (_, c) in f.terms() {
        num_gcd = num_gcd.gcd(&(c.re.numer() * &den_lcm / c.re.denom()));
        num_gcd = num_gcd.gcd(&(c.im.numer() * &den_lcm / c.im.denom()));
    }
    f.scale(&GaussianRational::from_rational(num::BigRational::new(
        den_lcm, num_gcd,
    )))
}

/// Modular gcd of two bivariate polynomials that are primitive in the main
/// variable `v`: monic univariate gcds at interpolation nodes in `w`, scaled
/// by a leading coefficient of the integer-primitive inputs (an integral
/// multiple of the gcd's leading coefficient, so the scaled images lift to
/// small Gaussian integers), then confirmed by exact division.  `None` means
/// the improbable unlucky-prime case; the caller then falls back to the
/// exact pseudo-remainder sequence, so correctness never depends on luck.
fn modular_gcd_bivariate(fp: &MultiPoly, gp: &MultiPoly, v: usize, w: usize) -> Option<MultiPoly> {
    let nvars = fp.nvars();
    let fz = z_primitive(fp);
    let gz = z_primitive(gp);
    let a = univar(&fz, v);
    let b = univar(&gz, v);
    let imag_unit = sqrt_of_minus_one();
    let bound_w = fz.degree_in(w).min(gz.degree_in(w)) as usize;
    let la = a.last().unwrap();
    let lb = b.last().unwrap();
    let gamma = if la.degree_in(w) <= lb.degree_in(w) {
        la.clone()
    } else {
        lb.clone()
    };
    // The scaled candidate has leading coefficient gamma, so its degree in w
    // is bounded by the gcd degree bound plus the degree of gamma.
    let nodes_needed = bound_w + gamma.degree_in(w) as usize + 1;
    let mut nodes: Vec<u64> = Vec::new();
    let mut images: Vec<Vec<u64>> = Vec::new();
    let mut best_degree = usize::MAX;
    let mut vals = vec![0u64; nvars];
    for t in 1..=(6 * nodes_needed as u64 + 30) {
        vals[w] = t;
        let (Some(am), Some(bm)) = (
            specialize_mod(&a, &vals, imag_unit),
            specialize_mod(&b, &vals, imag_unit),
        ) else {
            return None; // integer coefficients: reduction cannot fail
        };
        // the true leading coefficients must stay visible at this node
        if am.last() == Some(&0) || bm.last() == Some(&0) {
            continue;
        }
        let gm = specialize_mod(std::slice::from_ref(&gamma), &vals, imag_unit)?[0];
        let g = mod_gcd_poly(am, bm);
        let d = g.len() - 1;
        if d == 0 {
            // the primitive parts are coprime after all
            return Some(MultiPoly::one(nvars));
        }
        if d > best_degree {
            continue; // unlucky node
        }
        if d < best_degree {
            best_degree = d;
            nodes.clear();
            images.clear();
        }
        nodes.push(t);
        images.push(g.iter().map(|&c| mul_mod(c, gm)).collect());
        if nodes.len() == nodes_needed {
            break;
        }
    }
    if nodes.len() < nodes_needed {
        return None;
    }
    let basis = reduced_unit_lattice(imag_unit);
    let mut candidate = MultiPoly::zero(nvars);
    for j in 0..=best_degree {
        let values: Vec<u64> = images.iter().map(|g| g.get(j).copied().unwrap_or(0)).collect();
        for (l, &cw) in mod_interpolate(&nodes, &values).iter().enumerate() {
            if cw == 0 {
                continue;
            }
            let mut exps = vec![0u32; nvars];
            exps[v] = j as u32;
            exps[w] = l as u32;
            candidate = candidate.add(&MultiPoly::monomial(nvars, exps, lift_gaussian(cw, &basis)));
        }
    }
    if candidate.is_zero() {
        return None;
    }
    // restore primitivity in the main variable before the division check
    let cont = content(&univar(&candidate, v));
    let candidate = candidate.div_exact(&cont).expect("content must divide");
    if fz.div_exact(&candidate).is_some() && gz.div_exact(&candidate).is_some() {
        Some(candidate)
    } else {
        None
    }
}

/// True when one modular Euclid run certifies that the primitive parts are
/// coprime as polynomials in the main variable.
fn certified_coprime(a: &[MultiPoly], b: &[MultiPoly], nvars: usize) -> bool {
    let imag_unit = sqrt_of_minus_one();
    // two deterministic value sets; unlucky specializations just fall back
    for salt in [1u64, 2] {
        let vals: Vec<u64> = (0..nvars)
            .map(|j| 2 + salt * 37 + 17 * j as u64)
            .collect();
        let (Some(am), Some(bm)) = (
            specialize_mod(a, &vals, imag_unit),
            specialize_mod(b, &vals, imag_unit),
        ) else {
            continue;
        };
        // the true leading coefficients must stay visible mod p
        if am.last() == Some(&0) || bm.last() == Some(&0) {
            continue;
        }
        if mod_gcd_degree(am, bm) == 0 {
            return true;
        }
    }
    false
}

/// Gcd of two polynomials over Q(i), normalized so the graded-lex leading
/// coefficient is one. `gcd(0, 0) = 0`.
pub fn gcd(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    assert_eq!(f.nvars(), g.nvars());
    let nvars = f.nvars();
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    if f.as_constant().is_some() || g.as_constant().is_some() {
        return MultiPoly::one(nvars);
    }
    // Both univariate in the same variable: monic Euclid over the field.
    let active: Vec<usize> = (0..nvars)
        .filter(|&i| f.degree_in(i) > 0 || g.degree_in(i) > 0)
        .collect();
    if let [v] = active[..] {
        let u = to_unipoly(f, v).gcd(&to_unipoly(g, v));
        return from_unipoly(&u, v, nvars);
    }
    // Main variable: first one with positive degree in f.
    let v = (0..nvars)
        .find(|&i| f.degree_in(i) > 0)
        .expect("non-constant polynomial with no variables");
    if g.degree_in(v) == 0 {
        let cf = content(&univar(f, v));
        return gcd(&cf, g);
    }
    if f.degree_in(v) == 0 {
        let cg = content(&univar(g, v));
        return gcd(f, &cg);
    }

    let fu = univar(f, v);
    let gu = univar(g, v);
    let cf = content(&fu);
    let cg = content(&gu);
    let c = gcd(&cf, &cg);
    let primitive = |coeffs: &[MultiPoly], cont: &MultiPoly| -> Vec<MultiPoly> {
        coeffs
            .iter()
            .map(|p| p.div_exact(cont).expect("content must divide"))
            .collect()
    };
    let mut a = primitive(&fu, &cf);
    let mut b = primitive(&gu, &cg);
    if certified_coprime(&a, &b, nvars) {
        return c;
    }
    // The variable support may shrink once the contents are removed.
    let fp = collect(&a, v, nvars);
    let gp = collect(&b, v, nvars);
    let active: Vec<usize> = (0..nvars)
        .filter(|&i| fp.degree_in(i) > 0 || gp.degree_in(i) > 0)
        .collect();
    if let [x] = active[..] {
        let u = to_unipoly(&fp, x).gcd(&to_unipoly(&gp, x));
        return c.mul(&from_unipoly(&u, x, nvars)).monic();
    }
    if let [x, y] = active[..] {
        let w = if x == v { y } else { x };
        if let Some(h) = modular_gcd_bivariate(&fp, &gp, v, w) {
            return c.mul(&h).monic();
        }
    }
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_rem(&a, &b, nvars);
        if r.is_empty() {
            break;
        }
        let cr = content(&r);
        let rp = primitive(&r, &cr);
        a = b;
        b = rp;
    }
    let res = c.mul(&collect(&b, v, nvars));
    res.monic()
}
