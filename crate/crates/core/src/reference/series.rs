//! Green-function series built from derivatives of E_{1/2,mu}, for the
//! forced response and for the initial-condition response.

use crate::error::{Error, Result};
use crate::problem::{Forcing, InitialConditions};
use crate::quadrature::{integrate_sqrt_endpoints, QuadOptions};
use crate::roots::BTCoefficients;
use crate::special::{ml_derivative_with, MLParams, Precision, SeriesTolerance, SeriesValue, MAX_STAGES};

/// Truncation and acceleration settings for the series oracles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesControls {
    /// Largest outer index k.
    pub outer_truncation: usize,
    /// Most acceleration stages for each inner alternating series.
    pub accel_stages: usize,
    /// Outer terms below this count as negligible; also the absolute
    /// accuracy demanded from each outer term.
    pub abs_tol: f64,
    pub precision: Precision,
    pub quad: QuadOptions,
}

impl Default for SeriesControls {
    fn default() -> Self {
        SeriesControls {
            outer_truncation: 200,
            accel_stages: MAX_STAGES,
            abs_tol: 1e-12,
            precision: Precision::DoubleDouble,
            quad: QuadOptions::default(),
        }
    }
}

impl SeriesControls {
    fn validate(&self) -> Result<()> {
        if self.outer_truncation < 1 || !(self.abs_tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "series controls need outer_truncation >= 1 and abs_tol > 0, got {} and {}",
                self.outer_truncation, self.abs_tol
            )));
        }
        Ok(())
    }
}

const NEGLIGIBLE_RUN: usize = 3;

/// sum_k (-1)^k/k! (c/a)^k t^{2k + shift} E^{(k)}_{1/2, mu0 + 3k/2}(-(b/a) sqrt t).
fn outer_sum(
    k: &BTCoefficients,
    ctl: &SeriesControls,
    t: f64,
    shift: f64,
    mu0: f64,
) -> Result<SeriesValue> {
    ctl.validate()?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidInput(format!("series needs finite t >= 0, got {t}")));
    }
    let z = -(k.b / k.a) * t.sqrt();
    let x = (k.c / k.a) * t * t;
    let mut pref = t.powf(shift);
    let mut sum = 0.0;
    let mut est = 0.0;
    let mut largest = 0.0f64;
    let mut run = 0;
    for n in 0..=ctl.outer_truncation {
        if n > 0 {
            pref *= -x / n as f64;
        }
        if pref == 0.0 {
            run += 1;
        } else {
            let tol = SeriesTolerance {
                precision: ctl.precision,
                rel_tol: 1e-12,
                abs_tol: ctl.abs_tol / pref.abs(),
                max_stages: ctl.accel_stages,
            };
            let e = ml_derivative_with(MLParams::derivative(0.5, mu0 + 1.5 * n as f64, n as u32), z, tol)?;
            let term = pref * e.value;
            sum += term;
            est += pref.abs() * e.error_estimate;
            largest = largest.max(term.abs());
            if term.abs() < ctl.abs_tol {
                run += 1;
            } else {
                run = 0;
            }
        }
        if run >= NEGLIGIBLE_RUN && n >= NEGLIGIBLE_RUN {
            return Ok(SeriesValue {
                value: sum,
                error_estimate: est + f64::EPSILON * largest,
                terms: n + 1,
                largest_term: largest,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "green series",
        terms: ctl.outer_truncation + 1,
        largest,
        estimate: est,
    })
}

/// The Green function G(t) as its series in Mittag-Leffler derivatives.
pub fn podlubny_green_with(k: &BTCoefficients, ctl: &SeriesControls, t: f64) -> Result<SeriesValue> {
    let mut v = outer_sum(k, ctl, t, 1.0, 2.0)?;
    v.value /= k.a;
    v.error_estimate /= k.a.abs();
    v.largest_term /= k.a.abs();
    Ok(v)
}

pub fn podlubny_green(k: &BTCoefficients, ctl: &SeriesControls, t: f64) -> Result<f64> {
    Ok(podlubny_green_with(k, ctl, t)?.value)
}

/// Forced response int_0^t f(t - u) G(u) du with G from the series.
///
/// A pulse is handled as the difference of two constant-force responses so
/// the quadrature never sees the jump.
pub fn podlubny_yf(k: &BTCoefficients, f: &Forcing, ctl: &SeriesControls, t: f64) -> Result<f64> {
    f.validate()?;
    match f {
        Forcing::Zero => Ok(0.0),
        Forcing::Pulse { amplitude, t_off } => {
            let unit = Forcing::Constant { c0: 1.0 };
            let on = podlubny_yf(k, &unit, ctl, t)?;
            let off = if t > *t_off {
                podlubny_yf(k, &unit, ctl, t - t_off)?
            } else {
                0.0
            };
            Ok(amplitude * (on - off))
        }
        _ => {
            let r = integrate_sqrt_endpoints(
                |u| Ok(f.eval(t - u) * podlubny_green(k, ctl, u)?),
                t,
                ctl.quad,
            )?;
            Ok(r.value)
        }
    }
}

/// Initial-condition response as four series in Mittag-Leffler derivatives.
pub fn pang_yc(k: &BTCoefficients, ics: InitialConditions, ctl: &SeriesControls, t: f64) -> Result<f64> {
    let ba = k.b / k.a;
    let mut y = 0.0;
    if ics.y0 != 0.0 {
        let s1 = outer_sum(k, ctl, t, 0.0, 1.0)?.value;
        let s2 = outer_sum(k, ctl, t, 0.5, 1.5)?.value;
        y += ics.y0 * (s1 + ba * s2);
    }
    if ics.v0 != 0.0 {
        let s3 = outer_sum(k, ctl, t, 1.5, 2.5)?.value;
        let s4 = outer_sum(k, ctl, t, 1.0, 2.0)?.value;
        y += ics.v0 * (ba * s3 + s4);
    }
    Ok(y)
}
