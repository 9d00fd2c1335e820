//! Composite Gauss-Legendre quadrature for smooth complex-valued integrands.

use num::complex::Complex64;

/// Nodes and weights on [-1, 1], computed by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre_nodes(order: usize) -> Vec<(f64, f64)> {
    assert!(order >= 1);
    let n = order;
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Composite quadrature of `f` over [a, b] with the given panel count.
pub fn integrate_complex<F>(f: F, a: f64, b: f64, panels: usize, order: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let nodes = gauss_legendre_nodes(order);
    let mut acc = Complex64::new(0.0, 0.0);
    let width = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + width * p as f64;
        let mid = lo + width / 2.0;
        let half = width / 2.0;
        for &(x, w) in &nodes {
            acc += f(mid + half * x) * (w * half);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_integrate_high_degree_exactly() {
        // order n is exact through degree 2n-1
        let nodes = gauss_legendre_nodes(5);
        let val: f64 = nodes.iter().map(|&(x, w)| w * x.powi(8)).sum();
        assert!((val - 2.0 / 9.0).abs() < 1e-13);
        let odd: f64 = nodes.iter().map(|&(x, w)| w * x.powi(9)).sum();
        assert!(odd.abs() < 1e-14);
        let total: f64 = nodes.iter().map(|&(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-13);
    }

    #[test]
    fn sine_over_half_period() {
        let v = integrate_complex(
            |x| Complex64::new(x.sin(), 0.0),
            0.0,
            std::f64::consts::PI,
            4,
            16,
        );
        assert!((v.re - 2.0).abs() < 1e-12);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn complex_exponential() {
        let i = Complex64::new(0.0, 1.0);
        let v = integrate_complex(|x| (i * x).exp(), 0.0, 1.0, 2, 16);
        let exact = (i * 1.0).exp() - 1.0;
        assert!((v - exact / i).norm() < 1e-13);
    }

    #[test]
    fn gaussian_tail() {
        let v = integrate_complex(
            |x| Complex64::new((-x * x / 2.0).exp(), 0.0),
            -8.0,
            8.0,
            16,
            16,
        );
        assert!((v.re - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-10);
    }
}
