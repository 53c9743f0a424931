//! Cohen-Rodriguez Villegas-Zagier acceleration of alternating sums
//! sum_{k>=0} (-1)^k a_k.

use crate::dd::Real;

/// Largest stage count before (3+sqrt 8)^n leaves the binary64 range.
pub const MAX_STAGES: usize = 380;

/// Accelerated value together with the algorithm's error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcceleratedSum {
    pub value: f64,
    pub error_estimate: f64,
    pub stages: usize,
}

/// CVZ weighted sum of `a[0..n]` in the arithmetic of `T`.
pub fn cvz<T: Real>(a: &[T], n: usize) -> T {
    assert!(n <= a.len(), "need {n} terms, have {}", a.len());
    assert!(n <= MAX_STAGES, "stage count {n} exceeds {MAX_STAGES}");
    if n == 0 {
        return T::zero();
    }
    let base = T::of(3.0) + T::of(8.0).sqrt();
    let mut d = T::one();
    for _ in 0..n {
        d = d * base;
    }
    d = (d + T::one() / d) * T::of(0.5);
    let mut b = T::of(-1.0);
    let mut c = -d;
    let mut s = T::zero();
    let nf = n as f64;
    for (k, &ak) in a.iter().enumerate().take(n) {
        c = b - c;
        s += c * ak;
        let kf = k as f64;
        b = b * T::of((kf + nf) * (kf - nf)) / T::of((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

/// Sum (-1)^k a_k using `n` stages.
///
/// The error estimate is the larger of the theoretical bound for totally
/// monotone sequences, 2|S| / (3+sqrt 8)^n, and the change against a run
/// with three quarters of the stages.
pub fn accelerate_alternating<F: FnMut(usize) -> f64>(mut a: F, n: usize) -> AcceleratedSum {
    let n = n.clamp(1, MAX_STAGES);
    let terms: Vec<f64> = (0..n).map(&mut a).collect();
    let s = cvz(&terms, n);
    let m = (3 * n).div_ceil(4);
    let s_m = cvz(&terms, m);
    let theory = 2.0 * s.abs() * (3.0 + 8f64.sqrt()).powi(-(n as i32));
    let roundoff = f64::EPSILON * terms.iter().map(|x| x.abs()).sum::<f64>();
    AcceleratedSum {
        value: s,
        error_estimate: theory.max((s - s_m).abs()) + roundoff,
        stages: n,
    }
}
