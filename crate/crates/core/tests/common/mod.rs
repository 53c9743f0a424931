#![allow(dead_code)]

use bagley_torvik::{solve_quartic_explicit, BTCoefficients, Complex64, RootSystem};
use std::f64::consts::PI;

pub fn canonical() -> BTCoefficients {
    BTCoefficients::new(1.3, 2.6, 3.4).unwrap()
}

pub fn canonical_roots() -> RootSystem {
    solve_quartic_explicit(canonical()).unwrap()
}

/// Fixed Talbot inversion of a Laplace transform with M nodes on the
/// contour s(theta) = r theta (cot theta + i), r = 2M/(5t).
pub fn talbot<F: Fn(Complex64) -> Complex64>(f: F, t: f64, m: usize) -> f64 {
    let r = 2.0 * m as f64 / (5.0 * t);
    let mut sum = 0.5 * (f(Complex64::new(r, 0.0)) * (r * t).exp()).re;
    for k in 1..m {
        let th = k as f64 * PI / m as f64;
        let cot = 1.0 / th.tan();
        let s = Complex64::new(r * th * cot, r * th);
        let sigma = th + (th * cot - 1.0) * cot;
        sum += ((s * t).exp() * f(s) * Complex64::new(1.0, sigma)).re;
    }
    r / m as f64 * sum
}

/// Laplace transform of s^lambda / (a s^2 + b s^{3/2} + c).
pub fn bt_transform(k: BTCoefficients, lambda: f64) -> impl Fn(Complex64) -> Complex64 {
    move |s: Complex64| s.powf(lambda) / (s * s * k.a + s.powf(1.5) * k.b + k.c)
}
