//! Small-time and large-time approximations of y_c and y_f.
//!
//! The regime is chosen by the caller; nothing here decides when t is
//! "small" or "large".

use crate::closed_form::{i0, i1, SinusoidWeights};
use crate::error::{Error, Result};
use crate::problem::InitialConditions;
use crate::roots::{real_part, weight_a, BTCoefficients, RootSystem};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegimeKind {
    SmallT,
    LargeT,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AsymptoticRegime {
    pub kind: RegimeKind,
    pub order: u32,
}

impl AsymptoticRegime {
    pub const SMALL: AsymptoticRegime = AsymptoticRegime {
        kind: RegimeKind::SmallT,
        order: 1,
    };
    pub const LARGE: AsymptoticRegime = AsymptoticRegime {
        kind: RegimeKind::LargeT,
        order: 1,
    };

    fn validate(&self) -> Result<()> {
        let max = match self.kind {
            RegimeKind::SmallT => 2,
            RegimeKind::LargeT => 1,
        };
        if self.order < 1 || self.order > max {
            return Err(Error::UnsupportedParameter {
                what: "asymptotic order",
                detail: format!("{:?} supports orders 1..={max}, got {}", self.kind, self.order),
            });
        }
        Ok(())
    }
}

fn positive_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidInput(format!("asymptotic forms need t > 0, got {t}")));
    }
    Ok(())
}

fn needs_stiffness(k: &BTCoefficients) -> Result<()> {
    if k.c == 0.0 {
        return Err(Error::InvalidInput("large-time forms need c != 0".into()));
    }
    Ok(())
}

/// SmallT: y0 (1 - c t^2 / (2a)) + v0 t.
/// LargeT: b / (c sqrt(pi t)) (v0 - y0 / (2t)).
pub fn yc_asymptotic(k: &BTCoefficients, ics: InitialConditions, regime: AsymptoticRegime, t: f64) -> Result<f64> {
    regime.validate()?;
    positive_time(t)?;
    match regime.kind {
        RegimeKind::SmallT => Ok(ics.y0 * (1.0 - k.c * t * t / (2.0 * k.a)) + ics.v0 * t),
        RegimeKind::LargeT => {
            needs_stiffness(k)?;
            Ok(k.b / (k.c * (PI * t).sqrt()) * (ics.v0 - ics.y0 / (2.0 * t)))
        }
    }
}

/// First-order small-time y_f for a force with f(0) = f0, f'(0) = f1.
pub fn yf_smallt_general(rs: &RootSystem, f0: f64, f1: f64, t: f64) -> Result<f64> {
    positive_time(t)?;
    if f0 == 0.0 && f1 == 0.0 {
        return Ok(0.0);
    }
    let k = &rs.coeffs;
    let mut terms = [Complex64::new(0.0, 0.0); 4];
    for (term, &r) in terms.iter_mut().zip(&rs.roots) {
        let mut v = Complex64::new(0.0, 0.0);
        if f0 != 0.0 {
            v += i0(r, t)? * f0;
        }
        if f1 != 0.0 {
            v += i1(r, t)? * f1;
        }
        *term = v / ((r * (4.0 * k.a) + 3.0 * k.b) * r);
    }
    let scale: f64 = terms.iter().map(|z| z.norm()).sum();
    real_part("yf_smallt_general", rs.pair_sum(terms), scale, 1e-10)
}

/// The smallest |A_1| accepted before the small-time power form is refused.
const A1_FLOOR: f64 = 1e-12;

/// SmallT: A_1 sum_l C_l t^{2+alpha_l} / ((alpha_l+1)(alpha_l+2)).
/// LargeT: -A_{-3} sum_l C_l t^{alpha_l}.
pub fn yf_power_asymptotic(rs: &RootSystem, terms: &[(f64, f64)], regime: AsymptoticRegime, t: f64) -> Result<f64> {
    regime.validate()?;
    positive_time(t)?;
    for &(_, alpha) in terms {
        if !(alpha > -1.0) {
            return Err(Error::InvalidInput(format!("power exponent {alpha} must exceed -1")));
        }
    }
    match regime.kind {
        RegimeKind::SmallT => {
            let a1 = weight_a(rs, 1)?;
            // A_{-2} = A_{-1} = A_0 = 0 make A_1 the leading weight; if it
            // vanished too the form would be wrong, not just inaccurate.
            if a1.abs() < A1_FLOOR {
                return Err(Error::UnsupportedParameter {
                    what: "yf_power_asymptotic",
                    detail: format!("A_1 = {a1:e} vanishes; the leading small-time term is absent"),
                });
            }
            Ok(a1
                * terms
                    .iter()
                    .map(|&(c, al)| c * t.powf(2.0 + al) / ((al + 1.0) * (al + 2.0)))
                    .sum::<f64>())
        }
        RegimeKind::LargeT => {
            needs_stiffness(&rs.coeffs)?;
            let am3 = weight_a(rs, -3)?;
            Ok(-am3 * terms.iter().map(|&(c, al)| c * t.powf(al)).sum::<f64>())
        }
    }
}

/// Large-time steady state of the sinusoidal response: the Fresnel and
/// trigonometric terms without the decaying W sum.
pub fn yf_sinusoid_asymptotic(rs: &RootSystem, amplitude: f64, omega: f64, t: f64) -> Result<f64> {
    positive_time(t)?;
    if !(omega > 0.0) {
        return Err(Error::InvalidInput(format!("sinusoid needs omega > 0, got {omega}")));
    }
    if amplitude == 0.0 {
        return Ok(0.0);
    }
    let w = SinusoidWeights::new(rs, omega)?;
    Ok(amplitude * (w.fresnel_part(t) + w.trig_part(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::solve_quartic_explicit;

    fn rs() -> RootSystem {
        solve_quartic_explicit(BTCoefficients::new(1.3, 2.6, 3.4).unwrap()).unwrap()
    }

    #[test]
    fn trivial_zeros() {
        let rs = rs();
        let k = rs.coeffs;
        assert_eq!(
            yc_asymptotic(&k, InitialConditions::default(), AsymptoticRegime::LARGE, 3.0).unwrap(),
            0.0
        );
        assert_eq!(yf_smallt_general(&rs, 0.0, 0.0, 0.1).unwrap(), 0.0);
        assert_eq!(yf_sinusoid_asymptotic(&rs, 0.0, 2.5, 50.0).unwrap(), 0.0);
    }

    #[test]
    fn constant_force_far_field() {
        let rs = rs();
        let v = yf_power_asymptotic(&rs, &[(2.0, 0.0)], AsymptoticRegime::LARGE, 1e3).unwrap();
        assert!((v - 2.0 / 3.4).abs() < 1e-12);
    }

    #[test]
    fn order_range() {
        let rs = rs();
        let bad = AsymptoticRegime {
            kind: RegimeKind::LargeT,
            order: 2,
        };
        assert!(yf_power_asymptotic(&rs, &[(1.0, 0.0)], bad, 10.0).is_err());
        assert!(yc_asymptotic(&rs.coeffs, InitialConditions::new(1.0, 0.0), AsymptoticRegime::SMALL, 0.0).is_err());
    }
}
