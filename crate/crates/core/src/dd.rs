//! Double-double arithmetic (about 32 significant digits).
//!
//! Only what the series oracles need: field operations, `exp`, `ln`,
//! `sqrt` and the reciprocal gamma function. Algorithms follow the usual
//! error-free transformations (two-sum, FMA-based two-product).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

pub const DD_EPSILON: f64 = 4.93038065763132e-32;

const LN2: DoubleDouble = DoubleDouble::new(std::f64::consts::LN_2, 2.3190468138462996e-17);
pub const DD_PI: DoubleDouble = DoubleDouble::new(std::f64::consts::PI, 1.2246467991473532e-16);

// B_{2m} / (2m (2m-1)) as exact numerator/denominator pairs.
const STIRLING: [(f64, f64); 11] = [
    (1.0, 12.0),
    (-1.0, 360.0),
    (1.0, 1260.0),
    (-1.0, 1680.0),
    (1.0, 1188.0),
    (-691.0, 360360.0),
    (1.0, 156.0),
    (-3617.0, 122400.0),
    (43867.0, 244188.0),
    (-174611.0, 125400.0),
    (77683.0, 5796.0),
];

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble::new(0.0, 0.0);
    pub const ONE: DoubleDouble = DoubleDouble::new(1.0, 0.0);

    pub const fn new(hi: f64, lo: f64) -> Self {
        DoubleDouble { hi, lo }
    }

    pub const fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn recip(self) -> Self {
        DoubleDouble::ONE / self
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = self.lo.mul_add(b, e);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return DoubleDouble::ONE;
        }
        let mut base = self;
        let mut m = n.unsigned_abs();
        let mut acc = DoubleDouble::ONE;
        while m > 0 {
            if m & 1 == 1 {
                acc = acc * base;
            }
            base = base.sqr();
            m >>= 1;
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return DoubleDouble::from_f64(self.hi.sqrt());
        }
        let x = self.hi.sqrt();
        // One Newton step on the f64 estimate.
        let (p, e) = two_prod(x, x);
        let r = ((self.hi - p) - e + self.lo) / (2.0 * x);
        let (hi, lo) = quick_two_sum(x, r);
        DoubleDouble { hi, lo }
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return DoubleDouble::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return DoubleDouble::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2.mul_f64(k);
        // exp(r) = (exp(r / 2^10))^(2^10); Taylor series on the reduced argument.
        let s = r.mul_f64(1.0 / 1024.0);
        let mut term = DoubleDouble::ONE;
        let mut sum = DoubleDouble::ZERO;
        for i in 1..=14 {
            term = term * s / DoubleDouble::from_f64(i as f64);
            sum += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        // (1 + sum)^2 - 1 = sum * (2 + sum), keeps the small part accurate.
        for _ in 0..10 {
            sum = sum * (sum + DoubleDouble::from_f64(2.0));
        }
        let e = sum + DoubleDouble::ONE;
        DoubleDouble::new(e.hi * 2f64.powi(k as i32), e.lo * 2f64.powi(k as i32))
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return DoubleDouble::from_f64(f64::NAN);
        }
        let y = DoubleDouble::from_f64(self.hi.ln());
        // Newton on exp(y) = x.
        y + self * (-y).exp() - DoubleDouble::ONE
    }

    /// ln Gamma(x) for x >= 40 by the Stirling series.
    fn ln_gamma_large(x: Self) -> Self {
        let half_ln_2pi = (DD_PI.mul_f64(2.0)).ln().mul_f64(0.5);
        let mut s = (x - DoubleDouble::from_f64(0.5)) * x.ln() - x + half_ln_2pi;
        let inv = x.recip();
        let inv2 = inv.sqr();
        let mut p = inv;
        for &(n, d) in STIRLING.iter() {
            s += p * DoubleDouble::from_f64(n) / DoubleDouble::from_f64(d);
            p = p * inv2;
        }
        s
    }

    /// 1/Gamma(x); exactly zero at non-positive integers.
    pub fn rgamma(self) -> Self {
        if !self.is_finite() {
            return DoubleDouble::from_f64(f64::NAN);
        }
        if self.hi <= 0.0 && self.lo == 0.0 && self.hi == self.hi.floor() {
            return DoubleDouble::ZERO;
        }
        // Shift upward: 1/Gamma(x) = x (x+1) ... (x+n-1) / Gamma(x+n).
        let mut x = self;
        let mut prod = DoubleDouble::ONE;
        while x.hi < 40.0 {
            prod = prod * x;
            x += DoubleDouble::ONE;
        }
        prod * (-Self::ln_gamma_large(x)).exp()
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble::new(-self.hi, -self.lo)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::from_f64(q3)
    }
}

impl AddAssign for DoubleDouble {
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl SubAssign for DoubleDouble {
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl MulAssign for DoubleDouble {
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} + {:e}", self.hi, self.lo)
    }
}

/// Scalar type the series oracles are generic over.
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + PartialOrd
{
    /// Unit roundoff of the arithmetic.
    const EPS: f64;
    fn of(x: f64) -> Self;
    fn f64(self) -> f64;
    fn magnitude(self) -> f64 {
        self.f64().abs()
    }
    fn rgamma(self) -> Self;
    fn sqrt(self) -> Self;
    fn zero() -> Self {
        Self::of(0.0)
    }
    fn one() -> Self {
        Self::of(1.0)
    }
}

impl Real for f64 {
    const EPS: f64 = f64::EPSILON / 2.0;
    fn of(x: f64) -> Self {
        x
    }
    fn f64(self) -> f64 {
        self
    }
    fn rgamma(self) -> Self {
        crate::special::rgamma(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

impl Real for DoubleDouble {
    const EPS: f64 = DD_EPSILON;
    fn of(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
    fn f64(self) -> f64 {
        self.to_f64()
    }
    fn rgamma(self) -> Self {
        DoubleDouble::rgamma(self)
    }
    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(x: f64) -> DoubleDouble {
        DoubleDouble::from_f64(x)
    }

    fn rel(a: DoubleDouble, b: DoubleDouble) -> f64 {
        ((a - b) / b).to_f64().abs()
    }

    #[test]
    fn division_roundtrip() {
        let x = dd(1.0) / dd(3.0);
        assert!(rel(x * dd(3.0), dd(1.0)) < 1e-31);
    }

    #[test]
    fn sqrt_two_squared() {
        let s = dd(2.0).sqrt();
        assert!(rel(s * s, dd(2.0)) < 1e-31);
    }

    #[test]
    fn exp_ln_inverse() {
        for &x in &[0.1, 1.0, 2.5, 37.0, 300.0] {
            let v = dd(x).ln().exp();
            assert!(rel(v, dd(x)) < 1e-30, "x={x}");
        }
        // e = 2.718281828459045 + 1.4456468917292502e-16
        let e = dd(1.0).exp();
        assert!(rel(e, DoubleDouble::new(std::f64::consts::E, 1.4456468917292502e-16)) < 1e-31);
    }

    #[test]
    fn rgamma_values() {
        // 1/Gamma(1/2) = 1/sqrt(pi)
        let r = dd(0.5).rgamma();
        let expected = DD_PI.sqrt().recip();
        assert!(rel(r, expected) < 1e-29);
        // 1/Gamma(11) = 1/3628800
        assert!(rel(dd(11.0).rgamma(), dd(1.0) / dd(3628800.0)) < 1e-29);
        assert_eq!(dd(-3.0).rgamma().to_f64(), 0.0);
        // Gamma(-1/2) = -2 sqrt(pi)
        assert!(rel(dd(-0.5).rgamma(), -(DD_PI.sqrt().mul_f64(2.0)).recip()) < 1e-29);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let x = dd(1.1);
        let mut p = DoubleDouble::ONE;
        for _ in 0..25 {
            p = p * x;
        }
        assert!(rel(x.powi(25), p) < 1e-30);
        assert!(rel(x.powi(-3), (x * x * x).recip()) < 1e-30);
    }
}
