//! Adaptive Gauss-Kronrod (7/15) quadrature with global subdivision.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-9,
            rel_tol: 0.0,
            max_intervals: 2000,
        }
    }
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    if !value.is_finite() {
        return Err(Error::QuadratureFailure {
            achieved: f64::INFINITY,
            requested: 0.0,
        });
    }
    Ok((value, err))
}

/// Integrates a fallible integrand over [a, b].
pub fn integrate_fallible<F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (value, error) = kronrod(&mut f, a, b)?;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    loop {
        let bound = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= bound {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailure {
                achieved: total_err,
                requested: bound,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval cannot be split further in binary64.
            return Err(Error::QuadratureFailure {
                achieved: total_err,
                requested: bound,
            });
        }
        let (v1, e1) = kronrod(&mut f, worst.a, mid)?;
        let (v2, e2) = kronrod(&mut f, mid, worst.b)?;
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // Re-sum to shed the drift of the running totals.
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(QuadResult {
        value,
        error,
        evaluations,
    })
}

pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    integrate_fallible(|x| Ok(f(x)), a, b, opts)
}

/// Convolution-type integral int_0^t g(tau) d tau where g(tau) behaves like
/// a power series in sqrt(tau) at tau = 0 and in sqrt(t - tau) at tau = t.
///
/// The interval is split at `m = min(1, t)/2` and `t - m`; the end pieces use
/// tau = u^2 and tau = t - v^2 so both square-root endpoints become smooth.
pub fn integrate_sqrt_endpoints<F>(mut g: F, t: f64, opts: QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if t <= 0.0 {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let m = 0.5 * t.min(1.0);
    let split = QuadOptions {
        abs_tol: opts.abs_tol / 3.0,
        ..opts
    };
    let left = integrate_fallible(|u| Ok(2.0 * u * g(u * u)?), 0.0, m.sqrt(), split)?;
    let hi = t - m;
    let mid = if hi > m {
        integrate_fallible(&mut g, m, hi, split)?
    } else {
        QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        }
    };
    let lo_right = hi.max(m);
    let right = integrate_fallible(
        |v| Ok(2.0 * v * g(t - v * v)?),
        0.0,
        (t - lo_right).sqrt(),
        split,
    )?;
    Ok(QuadResult {
        value: left.value + mid.value + right.value,
        error: left.error + mid.error + right.error,
        evaluations: left.evaluations + mid.evaluations + right.evaluations,
    })
}
