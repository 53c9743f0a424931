//! Fresnel integrals S(x) = int_0^x sin(pi t^2/2) dt, C(x) = int_0^x cos(pi t^2/2) dt.

use super::erfc::faddeeva;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

const SERIES_LIMIT: f64 = 1.6;

/// Returns (S(x), C(x)). Odd in x.
pub fn fresnel(x: f64) -> (f64, f64) {
    if x < 0.0 {
        let (s, c) = fresnel(-x);
        return (-s, -c);
    }
    if x == 0.0 {
        return (0.0, 0.0);
    }
    if x.is_infinite() {
        return (0.5, 0.5);
    }
    if x < SERIES_LIMIT {
        return fresnel_series(x);
    }
    // C + iS = (1+i)/2 [1 - exp(i pi x^2/2) w(sqrt(pi)(1+i)x/2)]
    let a = 0.5 * PI.sqrt() * x;
    let w = faddeeva(Complex64::new(a, a)).expect("first quadrant never overflows");
    let phase = FRAC_PI_2 * x * x;
    let e = Complex64::new(phase.cos(), phase.sin());
    let inner = Complex64::new(1.0, 0.0) - e * w;
    let v = Complex64::new(0.5, 0.5) * inner;
    (v.im, v.re)
}

fn fresnel_series(x: f64) -> (f64, f64) {
    // C = sum (-1)^n (pi/2)^{2n} x^{4n+1} / ((2n)! (4n+1))
    // S = sum (-1)^n (pi/2)^{2n+1} x^{4n+3} / ((2n+1)! (4n+3))
    let u = FRAC_PI_2 * x * x;
    let mut term = x; // (pi/2)^k x^{2k+1} / k! with sign folded in below
    let mut c = 0.0;
    let mut s = 0.0;
    for k in 0..60 {
        let contrib = term / (2 * k + 1) as f64;
        match k % 4 {
            0 => c += contrib,
            1 => s += contrib,
            2 => c -= contrib,
            _ => s -= contrib,
        }
        term *= u / (k + 1) as f64;
        if contrib.abs() < 1e-18 {
            break;
        }
    }
    (s, c)
}
