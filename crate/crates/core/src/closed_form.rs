//! Closed-form solution y = y_c + y_f in terms of W(z) = exp(z^2) erfc(-z)
//! evaluated at r_k sqrt(t), r_k the roots of a r^4 + b r^3 + c.

use crate::error::{Error, Result};
use crate::problem::{BTProblem, Forcing, InitialConditions};
use crate::quadrature::{integrate_sqrt_endpoints, QuadOptions, QuadResult};
use crate::roots::{real_part, solve_poly_general, solve_quartic_explicit, weight_b, RootSystem};
use crate::special::{fresnel, gamma, mittag_leffler, scaled_erfc, MLParams};
use num_complex::Complex64;
use std::f64::consts::PI;

const YC_RESIDUE: f64 = 1e-10;
const KERNEL_RESIDUE: f64 = 1e-11;
const POWER_RESIDUE: f64 = 1e-9;
const SIN_RESIDUE: f64 = 1e-9;

fn check_time(what: &str, t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidInput(format!("{what}: need finite t >= 0, got {t}")));
    }
    Ok(())
}

/// W(r_k sqrt(t)) for each root.
fn w_at(rs: &RootSystem, t: f64) -> Result<[Complex64; 4]> {
    let s = t.sqrt();
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (o, r) in out.iter_mut().zip(rs.roots) {
        *o = scaled_erfc(r * s)?;
    }
    Ok(out)
}

fn settle(rs: &RootSystem, what: &'static str, terms: [Complex64; 4], tol: f64) -> Result<f64> {
    let scale: f64 = terms.iter().map(|z| z.norm()).sum();
    real_part(what, rs.pair_sum(terms), scale, tol)
}

/// Response to the initial conditions.
pub fn yc(rs: &RootSystem, ics: InitialConditions, t: f64) -> Result<f64> {
    check_time("yc", t)?;
    if ics.is_homogeneous() {
        return Ok(0.0);
    }
    let k = &rs.coeffs;
    let w = w_at(rs, t)?;
    let mut terms = [Complex64::new(0.0, 0.0); 4];
    for i in 0..4 {
        let r = rs.roots[i];
        let r2 = r * r;
        let coef = (r * k.a + k.b) * (r2 * ics.y0 + ics.v0) / ((r * (4.0 * k.a) + 3.0 * k.b) * r2);
        terms[i] = coef * w[i];
    }
    settle(rs, "yc", terms, YC_RESIDUE)
}

/// Convolution kernel K(tau) = sum_k W(r_k sqrt(tau)) / ((4a r_k + 3b) r_k),
/// the impulse response of the equation.
pub fn kernel(rs: &RootSystem, tau: f64) -> Result<f64> {
    check_time("kernel", tau)?;
    if tau == 0.0 {
        return Ok(0.0);
    }
    let k = &rs.coeffs;
    let w = w_at(rs, tau)?;
    let mut terms = [Complex64::new(0.0, 0.0); 4];
    for i in 0..4 {
        let r = rs.roots[i];
        terms[i] = w[i] / ((r * (4.0 * k.a) + 3.0 * k.b) * r);
    }
    settle(rs, "kernel", terms, KERNEL_RESIDUE)
}

/// y_f(t) = int_0^t f(t - tau) K(tau) d tau by adaptive quadrature.
pub fn yf_convolution<F>(rs: &RootSystem, f: F, t: f64, opts: QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    check_time("yf_convolution", t)?;
    integrate_sqrt_endpoints(|tau| Ok(f(t - tau) * kernel(rs, tau)?), t, opts)
}

/// Response to the constant force C0.
pub fn yf_constant(rs: &RootSystem, c0: f64, t: f64) -> Result<f64> {
    check_time("yf_constant", t)?;
    if t == 0.0 || c0 == 0.0 {
        return Ok(0.0);
    }
    // W(z) - 1 = z E_{1/2,3/2}(z) keeps small t accurate.
    let k = &rs.coeffs;
    let s = t.sqrt();
    let p = MLParams::new(0.5, 1.5);
    let mut terms = [Complex64::new(0.0, 0.0); 4];
    for i in 0..4 {
        let r = rs.roots[i];
        let z = r * s;
        let wm1 = z * mittag_leffler(p, z)?;
        terms[i] = wm1 / (r * r * r * (r * (4.0 * k.a) + 3.0 * k.b));
    }
    Ok(c0 * settle(rs, "yf_constant", terms, YC_RESIDUE)?)
}

/// Response to sum_l C_l t^{alpha_l}.
pub fn yf_power(rs: &RootSystem, terms: &[(f64, f64)], t: f64) -> Result<f64> {
    check_time("yf_power", t)?;
    let mut total = 0.0;
    for &(c, alpha) in terms {
        if !(alpha > -1.0) {
            return Err(Error::InvalidInput(format!(
                "power exponent {alpha} must exceed -1"
            )));
        }
        if c == 0.0 || t == 0.0 {
            continue;
        }
        let p = MLParams::new(0.5, 1.5 + alpha);
        let s = t.sqrt();
        let mut parts = [Complex64::new(0.0, 0.0); 4];
        for i in 0..4 {
            parts[i] = mittag_leffler(p, rs.roots[i] * s)? / rs.dp[i];
        }
        let sum = settle(rs, "yf_power", parts, POWER_RESIDUE)?;
        total += c * gamma(alpha + 1.0) * t.powf(0.5 + alpha) * sum;
    }
    Ok(total)
}

/// The weights B_{-1}, B_0, B_1, B_2 of the sinusoidal solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinusoidWeights {
    pub omega: f64,
    pub b_m1: f64,
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
}

impl SinusoidWeights {
    pub fn new(rs: &RootSystem, omega: f64) -> Result<Self> {
        Ok(SinusoidWeights {
            omega,
            b_m1: weight_b(rs, -1, omega)?,
            b0: weight_b(rs, 0, omega)?,
            b1: weight_b(rs, 1, omega)?,
            b2: weight_b(rs, 2, omega)?,
        })
    }

    /// The Fresnel part, which is the steady state together with
    /// `trig_part`.
    pub(crate) fn fresnel_part(&self, t: f64) -> f64 {
        let w = self.omega;
        let (s, c) = fresnel((2.0 * w * t / PI).sqrt());
        let (sn, cs) = (w * t).sin_cos();
        (2.0 / w).sqrt() * (s * (self.b2 * cs - self.b0 * w * sn) - c * (self.b2 * sn + self.b0 * w * cs))
    }

    pub(crate) fn trig_part(&self, t: f64) -> f64 {
        let (sn, cs) = (self.omega * t).sin_cos();
        -(self.b_m1 * self.omega * cs + self.b1 * sn)
    }
}

pub(crate) fn yf_sinusoid_with(
    rs: &RootSystem,
    weights: &SinusoidWeights,
    amplitude: f64,
    t: f64,
) -> Result<f64> {
    check_time("yf_sinusoid", t)?;
    if amplitude == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let k = &rs.coeffs;
    let w = weights.omega;
    let wv = w_at(rs, t)?;
    let mut terms = [Complex64::new(0.0, 0.0); 4];
    for i in 0..4 {
        let r = rs.roots[i];
        terms[i] = wv[i] / (r * (r * (4.0 * k.a) + 3.0 * k.b) * (r.powi(4) + w * w));
    }
    let transient = settle(rs, "yf_sinusoid", terms, SIN_RESIDUE)?;
    Ok(amplitude * (w * transient + weights.trig_part(t) + weights.fresnel_part(t)))
}

/// Response to amplitude * sin(omega t).
pub fn yf_sinusoid(rs: &RootSystem, amplitude: f64, omega: f64, t: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::InvalidInput(format!("sinusoid needs omega > 0, got {omega}")));
    }
    let weights = SinusoidWeights::new(rs, omega)?;
    yf_sinusoid_with(rs, &weights, amplitude, t)
}

/// Response to a rectangular pulse of height `amplitude` on [0, t_off),
/// by superposition of two constant-force responses.
pub fn yf_pulse(rs: &RootSystem, amplitude: f64, t_off: f64, t: f64) -> Result<f64> {
    if !(t_off > 0.0) {
        return Err(Error::InvalidInput(format!("pulse needs t_off > 0, got {t_off}")));
    }
    let on = yf_constant(rs, 1.0, t)?;
    let off = if t > t_off {
        yf_constant(rs, 1.0, t - t_off)?
    } else {
        0.0
    };
    Ok(amplitude * (on - off))
}

/// One evaluated point of a solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolutionPoint {
    pub t: f64,
    pub y: f64,
    pub yc: f64,
    pub yf: f64,
}

/// Closed-form solver for one problem; roots and weights are computed once.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    problem: BTProblem,
    rs: RootSystem,
    sinusoid: Option<SinusoidWeights>,
    quad: QuadOptions,
}

impl ClosedForm {
    pub fn new(problem: BTProblem) -> Result<Self> {
        problem.forcing.validate()?;
        let rs = solve_quartic_explicit(problem.coeffs)?;
        let sinusoid = match problem.forcing {
            Forcing::Sinusoid { omega, .. } => Some(SinusoidWeights::new(&rs, omega)?),
            _ => None,
        };
        Ok(ClosedForm {
            problem,
            rs,
            sinusoid,
            quad: QuadOptions::default(),
        })
    }

    pub fn with_quadrature(mut self, quad: QuadOptions) -> Self {
        self.quad = quad;
        self
    }

    pub fn roots(&self) -> &RootSystem {
        &self.rs
    }

    pub fn problem(&self) -> &BTProblem {
        &self.problem
    }

    pub fn yf(&self, t: f64) -> Result<f64> {
        let rs = &self.rs;
        match &self.problem.forcing {
            Forcing::Zero => Ok(0.0),
            Forcing::Constant { c0 } => yf_constant(rs, *c0, t),
            Forcing::PowerSum { terms } => yf_power(rs, terms, t),
            Forcing::Sinusoid { amplitude, .. } => {
                let w = self.sinusoid.as_ref().expect("weights built with the solver");
                yf_sinusoid_with(rs, w, *amplitude, t)
            }
            Forcing::Pulse { amplitude, t_off } => yf_pulse(rs, *amplitude, *t_off, t),
            f @ (Forcing::BesselJ0 { .. } | Forcing::Callable { .. }) => {
                Ok(yf_convolution(rs, |x| f.eval(x), t, self.quad)?.value)
            }
        }
    }

    pub fn yc(&self, t: f64) -> Result<f64> {
        yc(&self.rs, self.problem.ics, t)
    }

    pub fn eval(&self, t: f64) -> Result<SolutionPoint> {
        check_time("solve", t)?;
        let yc = self.yc(t)?;
        let yf = self.yf(t)?;
        Ok(SolutionPoint {
            t,
            y: yc + yf,
            yc,
            yf,
        })
    }
}

/// y(t) for a single time. Builds the roots on every call; use
/// [`ClosedForm`] for grids.
pub fn solve(problem: &BTProblem, t: f64) -> Result<SolutionPoint> {
    ClosedForm::new(problem.clone())?.eval(t)
}

/// H_r(t) = int_0^t sin(t - tau) W(r sqrt(tau)) d tau in closed form.
pub fn h_r(r: Complex64, t: f64) -> Result<Complex64> {
    check_time("h_r", t)?;
    let den = Complex64::new(1.0, 0.0) + r.powi(4);
    if den.norm() < 1e-12 {
        return Err(Error::ResonantDenominator {
            what: "h_r",
            value: den.norm(),
        });
    }
    let (s, c) = fresnel((2.0 * t / PI).sqrt());
    let (sn, cs) = t.sin_cos();
    let r2 = r * r;
    let w = scaled_erfc(r * t.sqrt())?;
    let fres = (r2 * cs - sn) * s - (r2 * sn + cs) * c;
    Ok((w - r2 * sn - cs + r * 2f64.sqrt() * fres) / den)
}

/// Parameters of s^lambda / (a s^m + b s^{p/q} + c).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralizedKernelSpec {
    pub m: u32,
    pub p: u32,
    pub q: u32,
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl GeneralizedKernelSpec {
    fn validate(&self) -> Result<()> {
        if self.m == 0 || self.p == 0 || self.q == 0 {
            return Err(Error::InvalidInput("m, p, q must be >= 1".into()));
        }
        if gcd(self.p, self.q) != 1 {
            return Err(Error::InvalidInput(format!(
                "p/q = {}/{} is not in lowest terms",
                self.p, self.q
            )));
        }
        if !(self.lambda.is_finite() && self.a.is_finite() && self.b.is_finite() && self.c.is_finite()) {
            return Err(Error::InvalidInput("non-finite kernel parameter".into()));
        }
        Ok(())
    }

    /// Coefficients of P(r) = a r^{mq} + b r^p + c in descending order.
    pub fn polynomial(&self) -> Vec<f64> {
        let mq = (self.m * self.q) as usize;
        let p = self.p as usize;
        let n = mq.max(p);
        let mut coef = vec![0.0; n + 1];
        coef[n - mq] += self.a;
        coef[n - p] += self.b;
        coef[n] += self.c;
        coef
    }
}

/// Inverse Laplace transform of s^lambda / (a s^m + b s^{p/q} + c) at t > 0
/// as a sum of Mittag-Leffler functions over the roots of P.
pub fn inverse_laplace_general(spec: &GeneralizedKernelSpec, t: f64) -> Result<f64> {
    spec.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidInput(format!("need t > 0, got {t}")));
    }
    let coef = spec.polynomial();
    let roots = solve_poly_general(&coef)?;
    let rmax = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = (roots[i] - roots[j]).norm();
            if d <= 1e-8 * rmax.max(f64::MIN_POSITIVE) {
                return Err(Error::DegenerateRoots { separation: d });
            }
        }
    }
    let mq = (spec.m * spec.q) as i32;
    let p = spec.p as i32;
    let inv_q = 1.0 / spec.q as f64;
    let params = MLParams::new(inv_q, inv_q - spec.lambda);
    let tq = t.powf(inv_q);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for r in &roots {
        let dp = r.powi(mq - 1) * (spec.a * mq as f64) + r.powi(p - 1) * (spec.b * p as f64);
        let term = mittag_leffler(params, r * tq)? / dp;
        scale += term.norm();
        sum += term;
    }
    let v = real_part("inverse_laplace_general", sum, scale, 1e-9)?;
    Ok(t.powf(inv_q - spec.lambda - 1.0) * v)
}

/// I_0(nu, t) = int_0^t W(nu sqrt(tau)) d tau.
pub fn i0(nu: Complex64, t: f64) -> Result<Complex64> {
    let x = nu * t.sqrt();
    if x.norm() < 0.5 {
        // t sum_{n>=2} x^{n-2} / Gamma(n/2 + 1)
        return Ok(t * w_tail(x, 2));
    }
    let lead = Complex64::new(1.0, 0.0) + x * (2.0 / PI.sqrt());
    Ok((scaled_erfc(x)? - lead) / (nu * nu))
}

/// I_1(nu, t) = int_0^t (t - tau) W(nu sqrt(tau)) d tau.
pub fn i1(nu: Complex64, t: f64) -> Result<Complex64> {
    let x = nu * t.sqrt();
    if x.norm() < 0.5 {
        return Ok(t * t * w_tail(x, 4));
    }
    let sp = PI.sqrt();
    let lead = Complex64::new(1.0, 0.0) + x * (2.0 / sp) + x * x + x * x * x * (4.0 / (3.0 * sp));
    Ok((scaled_erfc(x)? - lead) / nu.powi(4))
}

/// sum_{n >= n0} x^{n-n0} / Gamma(n/2 + 1), the tail of the series of W.
fn w_tail(x: Complex64, n0: i32) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for n in n0..n0 + 40 {
        let term = pow * crate::special::rgamma(n as f64 / 2.0 + 1.0);
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
        pow *= x;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{weight_a, BTCoefficients};

    fn rs() -> RootSystem {
        solve_quartic_explicit(BTCoefficients::new(1.3, 2.6, 3.4).unwrap()).unwrap()
    }

    #[test]
    fn yc_zero_ics_and_initial_value() {
        let rs = rs();
        assert_eq!(yc(&rs, InitialConditions::new(0.0, 0.0), 3.0).unwrap(), 0.0);
        let v = yc(&rs, InitialConditions::new(1.0, 1.0), 0.0).unwrap();
        assert!((v - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn kernel_small_time_slope() {
        let rs = rs();
        assert_eq!(kernel(&rs, 0.0).unwrap(), 0.0);
        // K = A_1 tau + A_2 tau^{3/2} / Gamma(5/2) + O(tau^2), A_2 = -b/a^2.
        let a1 = weight_a(&rs, 1).unwrap();
        let a2 = weight_a(&rs, 2).unwrap();
        assert!((a2 + 2.6 / (1.3 * 1.3)).abs() < 1e-13);
        let tau: f64 = 1e-4;
        let k = kernel(&rs, tau).unwrap();
        assert!(((k - a1 * tau) / (a1 * tau)).abs() < 2e-2);
        let two = a1 * tau + a2 * tau.powf(1.5) / gamma(2.5);
        assert!(((k - two) / (a1 * tau)).abs() < 2e-4);
    }

    #[test]
    fn constant_force_limits() {
        let rs = rs();
        assert_eq!(yf_constant(&rs, 1.0, 0.0).unwrap(), 0.0);
        let am3 = weight_a(&rs, -3).unwrap();
        let far = yf_constant(&rs, 2.0, 400.0).unwrap();
        assert!((far + 2.0 * am3).abs() < 5e-3);
    }

    #[test]
    fn power_zero_exponent_is_constant_force() {
        let rs = rs();
        for &t in &[0.01, 0.7, 3.0, 9.0] {
            let p = yf_power(&rs, &[(1.0, 0.0)], t).unwrap();
            let c = yf_constant(&rs, 1.0, t).unwrap();
            assert!((p - c).abs() < 1e-10, "t={t}");
        }
        assert_eq!(yf_power(&rs, &[(1.0, 0.5)], 0.0).unwrap(), 0.0);
        assert!(yf_power(&rs, &[(1.0, -0.8)], 1e-8).unwrap().abs() < 1e-6);
    }

    #[test]
    fn sinusoid_vanishes_at_origin_and_zero_amplitude() {
        let rs = rs();
        let w = SinusoidWeights::new(&rs, 2.5).unwrap();
        assert!(yf_sinusoid_with(&rs, &w, 1.0, 1e-300).unwrap().abs() < 1e-14);
        assert_eq!(yf_sinusoid(&rs, 0.0, 2.5, 4.0).unwrap(), 0.0);
    }

    #[test]
    fn convolution_matches_constant_and_sinusoid() {
        let rs = rs();
        let opts = QuadOptions::default();
        let q = yf_convolution(&rs, |_| 1.0, 2.0, opts).unwrap();
        assert!((q.value - yf_constant(&rs, 1.0, 2.0).unwrap()).abs() < 1e-8);
        let q = yf_convolution(&rs, |x| (2.5 * x).sin(), 2.0, opts).unwrap();
        assert!((q.value - yf_sinusoid(&rs, 1.0, 2.5, 2.0).unwrap()).abs() < 1e-8);
        assert_eq!(yf_convolution(&rs, |_| 0.0, 2.0, opts).unwrap().value, 0.0);
    }

    #[test]
    fn pulse_superposition() {
        let rs = rs();
        let a = yf_pulse(&rs, 8.0, 1.0, 0.6).unwrap();
        assert_eq!(a, yf_constant(&rs, 8.0, 0.6).unwrap());
        let am3 = weight_a(&rs, -3).unwrap();
        assert!(yf_pulse(&rs, 8.0, 1.0, 100.0).unwrap().abs() <= 0.05 * (8.0 * am3).abs());
        let below = yf_pulse(&rs, 8.0, 1.0, 1.0 - 1e-9).unwrap();
        let above = yf_pulse(&rs, 8.0, 1.0, 1.0 + 1e-9).unwrap();
        assert!((below - above).abs() < 1e-7);
    }

    #[test]
    fn zero_problem_stays_at_rest() {
        let p = BTProblem::new(
            BTCoefficients::new(1.3, 2.6, 3.4).unwrap(),
            InitialConditions::default(),
            Forcing::Zero,
        )
        .unwrap();
        for &t in &[0.0, 1.0, 7.5] {
            assert_eq!(solve(&p, t).unwrap().y, 0.0);
        }
    }

    #[test]
    fn h_r_at_origin() {
        let v = h_r(Complex64::new(0.3, 0.4), 0.0).unwrap();
        assert!(v.norm() < 1e-15);
        assert!(matches!(
            h_r(Complex64::from_polar(1.0, PI / 4.0), 1.0),
            Err(Error::ResonantDenominator { .. })
        ));
    }

    #[test]
    fn elementary_inverse_transform() {
        let spec = GeneralizedKernelSpec {
            m: 1,
            p: 1,
            q: 1,
            lambda: 0.0,
            a: 1.0,
            b: 0.0,
            c: 1.0,
        };
        for &t in &[0.1, 1.0, 5.0] {
            let v = inverse_laplace_general(&spec, t).unwrap();
            assert!((v - (-t).exp()).abs() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn generalized_transform_reproduces_kernel() {
        let rs = rs();
        let spec = GeneralizedKernelSpec {
            m: 2,
            p: 3,
            q: 2,
            lambda: 0.0,
            a: 1.3,
            b: 2.6,
            c: 3.4,
        };
        for &t in &[0.2, 1.0, 4.0] {
            let g = inverse_laplace_general(&spec, t).unwrap();
            assert!((g - kernel(&rs, t).unwrap()).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn small_argument_integrals_are_continuous() {
        // The series branch ends where |nu| sqrt(t) = 0.5.
        let nu = Complex64::new(0.6, 0.8);
        let t = 0.25;
        let (lo, hi) = (t * (1.0 - 1e-9), t * (1.0 + 1e-9));
        assert!((i0(nu, lo).unwrap() - i0(nu, hi).unwrap()).norm() < 1e-9);
        assert!((i1(nu, lo).unwrap() - i1(nu, hi).unwrap()).norm() < 1e-9);
    }
}
