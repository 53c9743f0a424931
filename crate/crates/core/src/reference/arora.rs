//! Recursive half-power series y(t) = sum_k d_k t^{k/2} for forces that are
//! finite sums of half-integer powers.

use crate::error::{Error, Result};
use crate::problem::InitialConditions;
use crate::roots::BTCoefficients;
use crate::special::ln_gamma;

/// Coefficients below this end the recursion.
pub const COEFFICIENT_CUTOFF: f64 = 1e-12;
const MAX_COEFFICIENTS: usize = 4000;
const GROWTH_RUN: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AroraValue {
    pub value: f64,
    pub terms: usize,
    /// |d_k t^{k/2}| grew for 10 consecutive k: the truncated series is not
    /// to be trusted at this t.
    pub diverging: bool,
}

/// d_0 = y0, d_1 = 0, d_2 = v0, d_3 = 0 and
/// d_{k+4} = [Gamma(k/2+1)(phi(k) - c d_k) - b Gamma((k+5)/2) d_{k+3}] / (a Gamma(k/2+3)),
/// where phi(k) is the coefficient of t^{k/2} in the force.
///
/// The stopping test |d_k| < 1e-12 (for k more than 4 past the highest
/// force index) is made inside the recursion; every coefficient produced
/// so far is kept.
pub fn arora_coefficients(
    k: &BTCoefficients,
    ics: InitialConditions,
    f_half_powers: &[(f64, usize)],
) -> Result<Vec<f64>> {
    let nmax = f_half_powers.iter().map(|&(_, i)| i).max().unwrap_or(0);
    let phi = |i: usize| -> f64 {
        f_half_powers
            .iter()
            .filter(|&&(_, j)| j == i)
            .map(|&(a, _)| a)
            .sum()
    };
    let mut d = vec![ics.y0, 0.0, ics.v0, 0.0];
    let mut i = 0;
    loop {
        if i > nmax + 4 && d[i].abs() < COEFFICIENT_CUTOFF {
            return Ok(d);
        }
        if d.len() >= MAX_COEFFICIENTS {
            return Err(Error::NonConvergence {
                what: "half-power series coefficients",
                terms: d.len(),
                largest: d.iter().fold(0.0, |m, x| m.max(x.abs())),
                estimate: d[i].abs(),
            });
        }
        let h = i as f64 / 2.0;
        // Gamma(k/2+1)/Gamma(k/2+3) and Gamma((k+5)/2)/Gamma(k/2+3)
        let g1 = 1.0 / ((h + 1.0) * (h + 2.0));
        let g2 = (ln_gamma(h + 2.5) - ln_gamma(h + 3.0)).exp();
        let next = (g1 * (phi(i) - k.c * d[i]) - k.b * g2 * d[i + 3]) / k.a;
        if !next.is_finite() {
            return Err(Error::Overflow {
                what: "half-power series coefficients",
            });
        }
        d.push(next);
        i += 1;
    }
}

pub fn arora_series(
    k: &BTCoefficients,
    ics: InitialConditions,
    f_half_powers: &[(f64, usize)],
    t: f64,
) -> Result<AroraValue> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidInput(format!("need finite t >= 0, got {t}")));
    }
    let d = arora_coefficients(k, ics, f_half_powers)?;
    Ok(evaluate(&d, t))
}

/// Sums a coefficient list at t and runs the growth detector.
pub fn evaluate(d: &[f64], t: f64) -> AroraValue {
    let s = t.sqrt();
    let mut pow = 1.0;
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut run = 0;
    let mut diverging = false;
    for (i, &di) in d.iter().enumerate() {
        if i > 0 {
            pow *= s;
        }
        let term = di * pow;
        sum += term;
        let m = term.abs();
        if m > prev {
            run += 1;
            if run >= GROWTH_RUN {
                diverging = true;
            }
        } else {
            run = 0;
        }
        prev = m;
    }
    AroraValue {
        value: sum,
        terms: d.len(),
        diverging: diverging || !sum.is_finite(),
    }
}

/// Rewrites sum_l C_l t^{alpha_l} as half-power coefficients, if every
/// alpha_l is a non-negative multiple of 1/2.
pub fn half_powers_of(terms: &[(f64, f64)]) -> Option<Vec<(f64, usize)>> {
    terms
        .iter()
        .map(|&(c, alpha)| {
            let twice = 2.0 * alpha;
            (twice >= 0.0 && twice.fract() == 0.0 && twice < 1e6).then_some((c, twice as usize))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_coefficients() {
        let k = BTCoefficients::new(1.3, 2.6, 3.4).unwrap();
        let d = arora_coefficients(&k, InitialConditions::new(0.7, -0.4), &[]).unwrap();
        assert_eq!(&d[..4], &[0.7, 0.0, -0.4, 0.0]);
        // d_4 = (1/2)(0 - c d_0)/a with d_3 = 0
        assert!((d[4] - (-3.4 * 0.7 / 2.0 / 1.3)).abs() < 1e-15);
    }

    #[test]
    fn free_mass_under_constant_force() {
        // a y'' = 1 with b = c = 0: y = t^2 / (2a).
        let k = BTCoefficients::new(2.0, 0.0, 0.0).unwrap();
        let v = arora_series(&k, InitialConditions::default(), &[(1.0, 0)], 3.0).unwrap();
        assert!((v.value - 9.0 / 4.0).abs() < 1e-14);
        assert!(!v.diverging);
    }

    #[test]
    fn half_power_conversion() {
        assert_eq!(half_powers_of(&[(1.0, 0.0), (2.0, 0.5)]), Some(vec![(1.0, 0), (2.0, 1)]));
        assert_eq!(half_powers_of(&[(1.0, 0.3)]), None);
    }

    #[test]
    fn growth_detector() {
        let d: Vec<f64> = (0..30).map(|_| 1.0).collect();
        assert!(evaluate(&d, 4.0).diverging);
        assert!(!evaluate(&d, 0.25).diverging);
    }
}
