//! Faddeeva function w(z) = exp(-z^2) erfc(-iz) and the scaled complementary
//! error function W(z) = exp(z^2) erfc(-z) = w(-iz).
//!
//! The upper half-plane evaluation uses the Poppe-Wijers scheme: a power
//! series near the origin, the Laplace continued fraction far away, and a
//! truncated Taylor expansion driven by the continued fraction in between.

use crate::error::{Error, Result};
use num_complex::Complex64;

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// w(z) for Im z >= 0.
fn faddeeva_upper(z: Complex64) -> Complex64 {
    let xabs = z.re.abs();
    let yabs = z.im;
    debug_assert!(yabs >= 0.0);
    let x = xabs / 6.3;
    let y = yabs / 4.4;
    let mut qrho = x * x + y * y;
    let xquad = xabs * xabs - yabs * yabs;
    let yquad = 2.0 * xabs * yabs;

    let (u, v) = if qrho < 0.085264 {
        // Power series for erf, then w = exp(-z^2) (1 - erf(-iz)) rearranged.
        qrho = (1.0 - 0.85 * y) * qrho.sqrt();
        let n = (6.0 + 72.0 * qrho).round() as i32;
        let mut j = 2 * n + 1;
        let mut xsum = 1.0 / j as f64;
        let mut ysum = 0.0;
        for i in (1..=n).rev() {
            j -= 2;
            let xaux = (xsum * xquad - ysum * yquad) / i as f64;
            ysum = (xsum * yquad + ysum * xquad) / i as f64;
            xsum = xaux + 1.0 / j as f64;
        }
        let u1 = -TWO_OVER_SQRT_PI * (xsum * yabs + ysum * xabs) + 1.0;
        let v1 = TWO_OVER_SQRT_PI * (xsum * xabs - ysum * yabs);
        let daux = (-xquad).exp();
        let u2 = daux * yquad.cos();
        let v2 = -daux * yquad.sin();
        (u1 * u2 - v1 * v2, u1 * v2 + v1 * u2)
    } else {
        let (h, kapn, nu) = if qrho > 1.0 {
            let q = qrho.sqrt();
            (0.0, 0, (3.0 + 1442.0 / (26.0 * q + 77.0)) as i32)
        } else {
            let q = (1.0 - y) * (1.0 - qrho).sqrt();
            (
                1.88 * q,
                (7.0 + 34.0 * q).round() as i32,
                (16.0 + 26.0 * q).round() as i32,
            )
        };
        let h2 = 2.0 * h;
        let mut qlambda = if h > 0.0 { h2.powi(kapn) } else { 0.0 };
        let (mut rx, mut ry, mut sx, mut sy) = (0.0, 0.0, 0.0, 0.0);
        for n in (0..=nu).rev() {
            let np1 = (n + 1) as f64;
            let tx = yabs + h + np1 * rx;
            let ty = xabs - np1 * ry;
            let c = 0.5 / (tx * tx + ty * ty);
            rx = c * tx;
            ry = c * ty;
            if h > 0.0 && n <= kapn {
                let tx = qlambda + sx;
                sx = rx * tx - ry * sy;
                sy = ry * tx + rx * sy;
                qlambda /= h2;
            }
        }
        let (mut u, v) = if h == 0.0 {
            (TWO_OVER_SQRT_PI * rx, TWO_OVER_SQRT_PI * ry)
        } else {
            (TWO_OVER_SQRT_PI * sx, TWO_OVER_SQRT_PI * sy)
        };
        if yabs == 0.0 {
            u = (-xabs * xabs).exp();
        }
        (u, v)
    };
    if z.re < 0.0 {
        Complex64::new(u, -v)
    } else {
        Complex64::new(u, v)
    }
}

/// Faddeeva function on the whole plane. Errors if the result overflows.
pub fn faddeeva(z: Complex64) -> Result<Complex64> {
    if z.im >= 0.0 {
        return Ok(faddeeva_upper(z));
    }
    // w(z) = 2 exp(-z^2) - w(-z)
    let e = exp_checked(-z * z)?;
    Ok(e * 2.0 - faddeeva_upper(-z))
}

fn exp_checked(z: Complex64) -> Result<Complex64> {
    if z.re > 709.0 {
        return Err(Error::Overflow { what: "scaled_erfc" });
    }
    Ok(z.exp())
}

/// W(z) = exp(z^2) erfc(-z).
pub fn scaled_erfc(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidInput(format!("scaled_erfc argument {z}")));
    }
    // W(z) = w(-iz); -iz lies in the upper half-plane when Re z <= 0.
    let v = faddeeva(Complex64::new(z.im, -z.re))?;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Overflow { what: "scaled_erfc" });
    }
    Ok(v)
}

/// W(x) for real x.
pub fn scaled_erfc_real(x: f64) -> Result<f64> {
    Ok(scaled_erfc(Complex64::new(x, 0.0))?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn origin_is_one() {
        let v = scaled_erfc(c(0.0, 0.0)).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn large_negative_real_matches_asymptotic() {
        // erfc(x) ~ exp(-x^2)/(sqrt(pi) x) sum_n (-1)^n (2n-1)!! / (2x^2)^n
        let x = 10.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..8 {
            term *= -(2.0 * n as f64 - 1.0) / (2.0 * x * x);
            sum += term;
        }
        let series = sum / (x * PI.sqrt());
        let v = scaled_erfc(c(-x, 0.0)).unwrap();
        assert!((v.re - series).abs() < 1e-12 * series);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn conjugate_symmetry() {
        for &(re, im) in &[(0.3, 0.4), (-2.0, 5.0), (1.5, -0.2), (-7.0, -9.0), (0.1, 3.0)] {
            let a = scaled_erfc(c(re, im)).unwrap();
            let b = scaled_erfc(c(re, -im)).unwrap();
            assert!((a - b.conj()).norm() <= 1e-15 * a.norm());
        }
    }

    #[test]
    fn reflection_on_real_line() {
        for &x in &[0.1, 0.9, 2.0, 4.5] {
            let lhs = scaled_erfc_real(x).unwrap();
            let rhs = 2.0 * (x * x).exp() - scaled_erfc_real(-x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs());
        }
    }

    #[test]
    fn overflow_is_signalled() {
        assert!(matches!(
            scaled_erfc(c(30.0, 0.0)),
            Err(Error::Overflow { .. })
        ));
        assert!(scaled_erfc(c(-30.0, 0.0)).is_ok());
    }
}
