//! Discrete Caputo residual a y'' + b D^{3/2} y + c y - f of a computed
//! solution, with a central second difference for y'' and first-order
//! Grunwald-Letnikov weights on y - y(0) - t y'(0) for D^{3/2}.

use crate::closed_form::ClosedForm;
use crate::error::{Error, Result};
use crate::reference::gl_weights;
use crate::solution::pointwise;

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub h: f64,
    pub t: Vec<f64>,
    pub residual: Vec<f64>,
}

impl ResidualReport {
    pub fn max_abs(&self) -> f64 {
        self.residual.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Residual from samples y_m = y(m h), m = 0..=n, at the interior grid
/// indices `at` (each must satisfy 1 <= m < n).
pub fn caputo_residual_samples(
    coeffs: &crate::roots::BTCoefficients,
    y0: f64,
    v0: f64,
    f: impl Fn(f64) -> f64,
    y: &[f64],
    h: f64,
    at: &[usize],
) -> Result<Vec<f64>> {
    let n = y.len().saturating_sub(1);
    if let Some(&bad) = at.iter().find(|&&m| m == 0 || m >= n) {
        return Err(Error::InvalidInput(format!(
            "residual index {bad} is not interior to a grid of {} samples",
            y.len()
        )));
    }
    let top = at.iter().copied().max().unwrap_or(0);
    let w = gl_weights(1.5, top);
    let u: Vec<f64> = y
        .iter()
        .enumerate()
        .map(|(m, &v)| v - y0 - v0 * m as f64 * h)
        .collect();
    let scale = h.powf(-1.5);
    Ok(at
        .iter()
        .map(|&m| {
            let ypp = (y[m + 1] - 2.0 * y[m] + y[m - 1]) / (h * h);
            let frac: f64 = (0..=m).map(|j| w[j] * u[m - j]).sum::<f64>() * scale;
            coeffs.a * ypp + coeffs.b * frac + coeffs.c * y[m] - f(m as f64 * h)
        })
        .collect())
}

/// Samples the closed-form solution on m h, m = 0..=max+1, and evaluates the
/// residual at the requested times, which must be multiples of h.
pub fn caputo_residual(cf: &ClosedForm, h: f64, times: &[f64]) -> Result<ResidualReport> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidInput(format!("residual step must be positive, got {h}")));
    }
    let mut at = Vec::with_capacity(times.len());
    for &t in times {
        let m = (t / h).round();
        if !(m >= 1.0) || (m * h - t).abs() > 1e-9 * t.max(1.0) {
            return Err(Error::InvalidInput(format!("time {t} is not a positive multiple of h = {h}")));
        }
        at.push(m as usize);
    }
    let top = at.iter().copied().max().unwrap_or(0);
    let times: Vec<f64> = (1..=top + 1).map(|m| m as f64 * h).collect();
    let mut y = Vec::with_capacity(top + 2);
    y.push(cf.problem().ics.y0);
    for v in pointwise(&times, 0, |t| cf.eval(t).map(|p| p.y)) {
        y.push(v?);
    }
    let p = cf.problem();
    let residual = caputo_residual_samples(&p.coeffs, p.ics.y0, p.ics.v0, |t| p.forcing.eval(t), &y, h, &at)?;
    Ok(ResidualReport {
        h,
        t: at.iter().map(|&m| m as f64 * h).collect(),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{BTProblem, Forcing, InitialConditions};
    use crate::roots::BTCoefficients;

    #[test]
    fn pure_oscillator_has_small_residual() {
        // b = 0: y = cos t solves y'' + y = 0.
        let k = BTCoefficients::new(1.0, 0.0, 1.0).unwrap();
        let h = 1e-3;
        let y: Vec<f64> = (0..=2001).map(|m| (m as f64 * h).cos()).collect();
        let r = caputo_residual_samples(&k, 1.0, 0.0, |_| 0.0, &y, h, &[500, 1000, 2000]).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-6), "{r:?}");
    }

    #[test]
    fn fractional_part_of_a_power() {
        // D^{3/2} t^2 = Gamma(3)/Gamma(3/2) t^{1/2}.
        let k = BTCoefficients::new(1.0, 1.0, 0.0).unwrap();
        let h = 1e-3;
        let y: Vec<f64> = (0..=1001).map(|m| (m as f64 * h).powi(2)).collect();
        let exact = 2.0 / crate::special::gamma(1.5);
        let f = |t: f64| 2.0 + exact * t.sqrt();
        let r = caputo_residual_samples(&k, 0.0, 0.0, f, &y, h, &[1000]).unwrap();
        assert!(r[0].abs() < 5e-3, "{r:?}");
    }

    #[test]
    fn rejects_off_grid_times() {
        let p = BTProblem::new(
            BTCoefficients::new(1.3, 2.6, 3.4).unwrap(),
            InitialConditions::default(),
            Forcing::Zero,
        )
        .unwrap();
        let cf = ClosedForm::new(p).unwrap();
        assert!(caputo_residual(&cf, 0.1, &[0.25]).is_err());
        assert_eq!(caputo_residual(&cf, 0.1, &[0.5]).unwrap().max_abs(), 0.0);
    }
}
