//! Bessel function of the first kind, order zero.

use crate::dd::DoubleDouble;
use std::f64::consts::PI;

// Below this the ascending series is summed in double-double; above it the
// Hankel expansion's optimal truncation error (about exp(-2x)) is under 1e-14.
const SERIES_LIMIT: f64 = 17.0;

pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        ascending(x)
    } else {
        hankel(x)
    }
}

fn ascending(x: f64) -> f64 {
    // sum (-x^2/4)^k / (k!)^2
    let q = -DoubleDouble::from_f64(x).sqr().mul_f64(0.25);
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    for k in 1..200 {
        let kk = DoubleDouble::from_f64((k * k) as f64);
        term = term * q / kk;
        sum += term;
        if term.to_f64().abs() < 1e-20 {
            break;
        }
    }
    sum.to_f64()
}

fn hankel(x: f64) -> f64 {
    // P ~ sum (-1)^k a_{2k} / x^{2k}, Q ~ -sum (-1)^k a_{2k+1} / x^{2k+1},
    // a_k = prod_{j=1..k} (2j-1)^2 / (k! 8^k).
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..60 {
        let t = a / x.powi(k);
        if t > prev || t < 1e-17 {
            break;
        }
        prev = t;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q -= sign * t;
        }
        let m = (2 * k + 1) as f64;
        a *= m * m / (8.0 * (k + 1) as f64);
    }
    // cos(x - pi/4) = (cos x + sin x)/sqrt 2, sin(x - pi/4) = (sin x - cos x)/sqrt 2
    let (s, c) = x.sin_cos();
    let cs = (c + s) / 2f64.sqrt();
    let sn = (s - c) / 2f64.sqrt();
    (2.0 / (PI * x)).sqrt() * (p * cs - q * sn)
}
