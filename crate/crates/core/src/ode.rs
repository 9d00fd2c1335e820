//! Adaptive Dormand-Prince 5(4) integration for complex-valued systems whose
//! right-hand sides can fail (poles, guard regions).

use num::complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("right-hand side failed at t = {t}: {msg}")]
    Rhs { t: f64, msg: String },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates y' = f(t, y) from t0 to t1, returning the final state.
pub fn dopri5<F>(
    mut rhs: F,
    t0: f64,
    t1: f64,
    y0: &[Complex64],
    atol: f64,
    rtol: f64,
) -> Result<Vec<Complex64>, OdeError>
where
    F: FnMut(f64, &[Complex64]) -> Result<Vec<Complex64>, String>,
{
    let n = y0.len();
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0.to_vec());
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = (span.abs() * 0.01).min(0.1).max(1e-8) * dir;
    let call = |rhs: &mut F, t: f64, y: &[Complex64]| -> Result<Vec<Complex64>, OdeError> {
        rhs(t, y).map_err(|msg| OdeError::Rhs { t, msg })
    };

    let mut k0 = call(&mut rhs, t, &y)?;
    let max_steps = 1_000_000usize;
    for _ in 0..max_steps {
        if (t1 - t) * dir <= 0.0 {
            return Ok(y);
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        if h.abs() < 1e-14 * (1.0 + t.abs()) {
            return Err(OdeError::StepUnderflow { t });
        }

        let mut k = vec![k0.clone()];
        let mut failed = false;
        for stage in 0..6 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate() {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..n {
                        ys[i] += kj[i] * (a * h);
                    }
                }
            }
            match call(&mut rhs, t + C[stage] * h, &ys) {
                Ok(ki) => k.push(ki),
                Err(_) => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            // retreat and retry; a persistent failure ends in underflow
            h *= 0.5;
            continue;
        }

        let mut y5 = y.clone();
        let mut err_sq = 0.0f64;
        let mut y_err = vec![Complex64::new(0.0, 0.0); n];
        for (j, kj) in k.iter().enumerate() {
            for i in 0..n {
                y5[i] += kj[i] * (B5[j] * h);
                y_err[i] += kj[i] * ((B5[j] - B4[j]) * h);
            }
        }
        for i in 0..n {
            let sc = atol + rtol * y[i].norm().max(y5[i].norm());
            let e = y_err[i].norm() / sc;
            err_sq += e * e;
        }
        let err = (err_sq / n as f64).sqrt();

        if err <= 1.0 {
            t += h;
            y = y5;
            // first-same-as-last
            k0 = k.pop().expect("seven stages");
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Err(OdeError::StepUnderflow { t })
}

/// States at each requested time, integrating segment by segment.
pub fn dopri5_path<F>(
    mut rhs: F,
    t0: f64,
    samples: &[f64],
    y0: &[Complex64],
    atol: f64,
    rtol: f64,
) -> Result<Vec<Vec<Complex64>>, OdeError>
where
    F: FnMut(f64, &[Complex64]) -> Result<Vec<Complex64>, String>,
{
    let mut out = Vec::with_capacity(samples.len());
    let mut t = t0;
    let mut y = y0.to_vec();
    for &s in samples {
        y = dopri5(&mut rhs, t, s, &y, atol, rtol)?;
        t = s;
        out.push(y.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponential_growth() {
        let y = dopri5(
            |_, y| Ok(vec![y[0]]),
            0.0,
            1.0,
            &[c(1.0, 0.0)],
            1e-10,
            1e-10,
        )
        .unwrap();
        assert!((y[0].re - 1.0f64.exp()).abs() < 1e-8);
        assert!(y[0].im.abs() < 1e-10);
    }

    #[test]
    fn complex_rotation() {
        let i = c(0.0, 1.0);
        let y = dopri5(
            move |_, y| Ok(vec![i * y[0]]),
            0.0,
            std::f64::consts::PI,
            &[c(1.0, 0.0)],
            1e-11,
            1e-11,
        )
        .unwrap();
        assert!((y[0] - c(-1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn oscillator_energy_is_conserved() {
        let y = dopri5(
            |_, y| Ok(vec![y[1], -y[0]]),
            0.0,
            20.0,
            &[c(1.0, 0.0), c(0.0, 0.0)],
            1e-11,
            1e-11,
        )
        .unwrap();
        let energy = 0.5 * (y[0].norm_sqr() + y[1].norm_sqr());
        assert!((energy - 0.5).abs() < 1e-8);
    }

    #[test]
    fn backward_integration() {
        let y = dopri5(
            |_, y| Ok(vec![y[0]]),
            1.0,
            0.0,
            &[c(1.0f64.exp(), 0.0)],
            1e-10,
            1e-10,
        )
        .unwrap();
        assert!((y[0].re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rhs_failure_propagates() {
        let r = dopri5(
            |t, _| {
                if t > 0.5 {
                    Err("guard".into())
                } else {
                    Ok(vec![c(1.0, 0.0)])
                }
            },
            0.0,
            1.0,
            &[c(0.0, 0.0)],
            1e-10,
            1e-10,
        );
        assert!(matches!(r, Err(OdeError::StepUnderflow { .. }) | Err(OdeError::Rhs { .. })));
    }

    #[test]
    fn sampled_path_matches_closed_form() {
        let samples = [0.25, 0.5, 1.0];
        let states = dopri5_path(
            |_, y| Ok(vec![y[0]]),
            0.0,
            &samples,
            &[c(1.0, 0.0)],
            1e-10,
            1e-10,
        )
        .unwrap();
        for (s, y) in samples.iter().zip(&states) {
            assert!((y[0].re - s.exp()).abs() < 1e-8);
        }
    }
}
