//! Roots of the characteristic quartic P(r) = a r^4 + b r^3 + c and the
//! root-sum weights built from them.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Coefficients of a y'' + b D^{3/2} y + c y.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BTCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl BTCoefficients {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "coefficients must be finite, got ({a}, {b}, {c})"
            )));
        }
        if a == 0.0 {
            return Err(Error::ZeroLeadingCoefficient);
        }
        Ok(BTCoefficients { a, b, c })
    }

    pub fn p(&self, r: Complex64) -> Complex64 {
        (r * self.a + self.b) * r * r * r + self.c
    }

    /// P'(r) = 4a r^3 + 3b r^2.
    pub fn dp(&self, r: Complex64) -> Complex64 {
        (r * (4.0 * self.a) + 3.0 * self.b) * r * r
    }

    fn residual_scale(&self, rmax: f64) -> f64 {
        self.a.abs() * rmax.powi(4) + self.b.abs() * rmax.powi(3) + self.c.abs()
    }
}

/// Intermediate quantities of the radical formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuarticIntermediates {
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
    pub r: Complex64,
    pub t_plus: Complex64,
    pub t_minus: Complex64,
}

/// Which route produced the roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootMethod {
    Radicals,
    /// Radical formulas broke down (0/0 or failed validation); the roots
    /// come from the general polynomial solver.
    GeneralFallback,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSystem {
    pub coeffs: BTCoefficients,
    /// Sorted by real part, then imaginary part.
    pub roots: [Complex64; 4],
    /// P'(r_k) for each root.
    pub dp: [Complex64; 4],
    pub intermediates: QuarticIntermediates,
    pub method: RootMethod,
    /// Index groups of conjugate pairs and real roots, used for pairwise sums.
    groups: Vec<Vec<usize>>,
}

const NEWTON_STEPS: usize = 5;
const SEPARATION: f64 = 1e-8;
const RESIDUAL: f64 = 1e-10;
const WEIGHT_RESIDUE: f64 = 1e-12;

fn cbrt(z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        z
    } else {
        z.powf(1.0 / 3.0)
    }
}

fn radicals(k: &BTCoefficients) -> (QuarticIntermediates, [Complex64; 4]) {
    let c = |x: f64| Complex64::new(x, 0.0);
    let beta = c(k.b / k.a);
    let gamma = c(k.c / k.a);
    let beta2 = beta * beta;
    let delta = (beta2 * 9.0 + (beta2 * beta2 * 81.0 - gamma * 768.0).sqrt()) * gamma;
    let d18 = cbrt(delta / 18.0);
    let r = 0.5 * (beta2 / 4.0 + d18 + gamma * 8.0 / cbrt(delta * 12.0)).sqrt();
    let common = beta2 / 2.0 - gamma * 4.0 * cbrt(c(2.0) / (delta * 3.0)) - d18;
    let cubic = beta2 * beta / (r * 8.0);
    let t_plus = 0.5 * (common - cubic).sqrt();
    let t_minus = 0.5 * (common + cubic).sqrt();
    let base = -beta / 4.0;
    let roots = [
        base + r + t_plus,
        base - r + t_minus,
        base + r - t_plus,
        base - r - t_minus,
    ];
    (
        QuarticIntermediates {
            beta,
            gamma,
            delta,
            r,
            t_plus,
            t_minus,
        },
        roots,
    )
}

fn polish(k: &BTCoefficients, r: Complex64) -> Complex64 {
    let mut r = r;
    for _ in 0..NEWTON_STEPS {
        let d = k.dp(r);
        if d.norm() == 0.0 {
            break;
        }
        let step = k.p(r) / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        r -= step;
        if step.norm() <= 4.0 * f64::EPSILON * r.norm() {
            break;
        }
    }
    r
}

fn cmp_roots(x: &Complex64, y: &Complex64) -> std::cmp::Ordering {
    x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
}

/// Snaps near-real roots onto the axis and makes the pairs exact conjugates.
/// Returns the pair/singleton groups.
fn symmetrize(roots: &mut [Complex64]) -> Vec<Vec<usize>> {
    let scale = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let n = roots.len();
    let mut used = vec![false; n];
    let mut groups = Vec::new();
    for i in 0..n {
        if roots[i].im.abs() <= 1e-12 * scale {
            roots[i].im = 0.0;
        }
    }
    for i in 0..n {
        if used[i] {
            continue;
        }
        used[i] = true;
        if roots[i].im == 0.0 {
            groups.push(vec![i]);
            continue;
        }
        let target = roots[i].conj();
        let partner = (0..n)
            .filter(|&j| !used[j] && roots[j].im != 0.0 && roots[j].im.signum() != roots[i].im.signum())
            .min_by(|&p, &q| (roots[p] - target).norm().total_cmp(&(roots[q] - target).norm()));
        match partner {
            Some(j) if (roots[j] - target).norm() <= 1e-6 * scale.max(1.0) => {
                used[j] = true;
                let avg = 0.5 * (roots[i] + roots[j].conj());
                roots[i] = avg;
                roots[j] = avg.conj();
                groups.push(vec![i, j]);
            }
            _ => groups.push(vec![i]),
        }
    }
    groups
}

fn min_separation(roots: &[Complex64]) -> f64 {
    let mut sep = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            sep = sep.min((roots[i] - roots[j]).norm());
        }
    }
    sep
}

impl RootSystem {
    fn assemble(coeffs: BTCoefficients, raw: [Complex64; 4], ints: QuarticIntermediates, method: RootMethod) -> Result<Self> {
        let mut roots = raw.map(|r| polish(&coeffs, r));
        roots.sort_by(cmp_roots);
        symmetrize(&mut roots);
        roots.sort_by(cmp_roots);
        let groups = symmetrize(&mut roots);
        let rmax = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let sep = min_separation(&roots);
        if !(sep > SEPARATION * rmax) {
            return Err(Error::DegenerateRoots { separation: sep });
        }
        let scale = coeffs.residual_scale(rmax);
        for r in &roots {
            let res = coeffs.p(*r).norm();
            if !(res <= RESIDUAL * scale) {
                return Err(Error::NonConvergence {
                    what: "quartic roots",
                    terms: NEWTON_STEPS,
                    largest: scale,
                    estimate: res,
                });
            }
        }
        let dp = roots.map(|r| coeffs.dp(r));
        Ok(RootSystem {
            coeffs,
            roots,
            dp,
            intermediates: ints,
            method,
            groups,
        })
    }

    /// Sums per-root complex terms pair by pair, so conjugate contributions
    /// cancel before they meet the other pair.
    pub fn pair_sum(&self, terms: [Complex64; 4]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for g in &self.groups {
            let mut s = Complex64::new(0.0, 0.0);
            for &i in g {
                s += terms[i];
            }
            total += s;
        }
        total
    }

    /// Conjugate-pair groups (real roots appear alone).
    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Largest |P(r_k)| over the roots.
    pub fn max_residual(&self) -> f64 {
        self.roots
            .iter()
            .map(|r| self.coeffs.p(*r).norm())
            .fold(0.0, f64::max)
    }

    /// A_l = sum_k r_k^l / (4a r_k + 3b), in complex form.
    pub fn weight_a_complex(&self, ell: i32) -> Complex64 {
        let k = &self.coeffs;
        self.pair_sum(self.roots.map(|r| r.powi(ell) / (r * (4.0 * k.a) + 3.0 * k.b)))
    }

    /// B_m = sum_k r_k^m / ((4a r_k + 3b)(w^2 + r_k^4)), in complex form.
    pub fn weight_b_complex(&self, m: i32, omega: f64) -> Result<Complex64> {
        let k = &self.coeffs;
        let w2 = omega * omega;
        let mut terms = [Complex64::new(0.0, 0.0); 4];
        for (t, r) in terms.iter_mut().zip(self.roots) {
            let den = r.powi(4) + w2;
            if den.norm() < 1e-12 * w2 {
                return Err(Error::ResonantDenominator {
                    what: "weight_b",
                    value: den.norm(),
                });
            }
            *t = r.powi(m) / ((r * (4.0 * k.a) + 3.0 * k.b) * den);
        }
        Ok(self.pair_sum(terms))
    }
}

/// Checks that a conjugate-symmetric sum came out real and returns it.
pub(crate) fn real_part(what: &'static str, z: Complex64, scale: f64, tol: f64) -> Result<f64> {
    let bound = tol * scale.max(1.0);
    if z.im.abs() > bound || !z.re.is_finite() {
        return Err(Error::ImaginaryResidue {
            what,
            residue: z.im.abs(),
            bound,
        });
    }
    Ok(z.re)
}

/// Roots of a r^4 + b r^3 + c from the explicit radical formulas with
/// principal branches, polished by Newton and sorted by (re, im).
pub fn solve_quartic_explicit(coeffs: BTCoefficients) -> Result<RootSystem> {
    let coeffs = BTCoefficients::new(coeffs.a, coeffs.b, coeffs.c)?;
    if coeffs.c == 0.0 {
        // Triple root at zero.
        return Err(Error::DegenerateRoots { separation: 0.0 });
    }
    let (ints, raw) = radicals(&coeffs);
    let finite = raw.iter().all(|r| r.re.is_finite() && r.im.is_finite());
    if finite {
        match RootSystem::assemble(coeffs, raw, ints, RootMethod::Radicals) {
            Ok(rs) => return Ok(rs),
            Err(Error::DegenerateRoots { separation }) => {
                // The radicals may have landed twice on one root; only trust
                // the verdict if the general solver agrees.
                let general = general_roots(&coeffs)?;
                if min_separation(&general) <= SEPARATION * general.iter().map(|r| r.norm()).fold(0.0, f64::max) {
                    return Err(Error::DegenerateRoots { separation });
                }
            }
            Err(_) => {}
        }
    }
    let general = general_roots(&coeffs)?;
    let raw = [general[0], general[1], general[2], general[3]];
    RootSystem::assemble(coeffs, raw, ints, RootMethod::GeneralFallback)
}

fn general_roots(k: &BTCoefficients) -> Result<Vec<Complex64>> {
    solve_poly_general(&[k.a, k.b, 0.0, 0.0, k.c])
}

/// A_l as a real number after checking the conjugate residue.
pub fn weight_a(rs: &RootSystem, ell: i32) -> Result<f64> {
    let z = rs.weight_a_complex(ell);
    let k = &rs.coeffs;
    let scale: f64 = rs
        .roots
        .iter()
        .map(|r| (r.powi(ell) / (r * (4.0 * k.a) + 3.0 * k.b)).norm())
        .sum();
    real_part("weight_a", z, scale, WEIGHT_RESIDUE)
}

/// B_m as a real number after checking the conjugate residue.
pub fn weight_b(rs: &RootSystem, m: i32, omega: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidInput(format!("weight_b needs omega > 0, got {omega}")));
    }
    let z = rs.weight_b_complex(m, omega)?;
    let k = &rs.coeffs;
    let w2 = omega * omega;
    let scale: f64 = rs
        .roots
        .iter()
        .map(|r| (r.powi(m) / ((r * (4.0 * k.a) + 3.0 * k.b) * (r.powi(4) + w2))).norm())
        .sum();
    real_part("weight_b", z, scale, WEIGHT_RESIDUE)
}

fn horner(coef: &[f64], z: Complex64) -> (Complex64, Complex64) {
    // Returns (P(z), P'(z)); coefficients in descending order.
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coef {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of sum_i coef[i] z^{N-i} (coefficients in descending order)
/// by Aberth-Ehrlich simultaneous iteration.
pub fn solve_poly_general(coef: &[f64]) -> Result<Vec<Complex64>> {
    if coef.len() < 2 {
        return Err(Error::InvalidInput("polynomial needs degree >= 1".into()));
    }
    if coef.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("polynomial coefficients must be finite".into()));
    }
    if coef[0] == 0.0 {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let n = coef.len() - 1;
    // Zero roots split off exactly.
    let zeros = coef.iter().rev().take_while(|&&c| c == 0.0).count();
    let core = &coef[..coef.len() - zeros];
    let m = core.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if m > 0 {
        roots.extend(aberth(core)?);
    }
    debug_assert_eq!(roots.len(), n);
    roots.sort_by(cmp_roots);
    Ok(roots)
}

fn aberth(coef: &[f64]) -> Result<Vec<Complex64>> {
    let m = coef.len() - 1;
    let lead = coef[0];
    // Initial guesses on a circle whose radius is the geometric-mean root size.
    let radius = (coef[m] / lead).abs().powf(1.0 / m as f64).max(1e-3);
    let cauchy = 1.0 + coef[1..].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let r0 = radius.min(cauchy);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / m as f64 + 0.4))
        .collect();
    let scale = |w: Complex64| -> f64 {
        let a = w.norm();
        coef.iter().fold(0.0, |s, c| s * a + c.abs())
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..m {
            let (p, dp) = horner(coef, z[i]);
            if p.norm() <= 4.0 * f64::EPSILON * scale(z[i]) {
                continue;
            }
            let ratio = p / dp;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..m {
                if j != i {
                    sum += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for w in &z {
        let (p, _) = horner(coef, *w);
        if !(p.norm() <= 1e-9 * scale(*w)) {
            return Err(Error::NonConvergence {
                what: "polynomial roots",
                terms: 500,
                largest: scale(*w),
                estimate: p.norm(),
            });
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical() -> RootSystem {
        solve_quartic_explicit(BTCoefficients::new(1.3, 2.6, 3.4).unwrap()).unwrap()
    }

    #[test]
    fn canonical_roots_frozen() {
        let rs = canonical();
        assert_eq!(rs.method, RootMethod::Radicals);
        let expected = [
            Complex64::new(-1.578_267_680_241_971_8, -0.425_215_023_267_739_3),
            Complex64::new(-1.578_267_680_241_971_8, 0.425_215_023_267_739_3),
            Complex64::new(0.578_267_680_241_971_8, -0.802_816_644_381_656),
            Complex64::new(0.578_267_680_241_971_8, 0.802_816_644_381_656),
        ];
        for (r, e) in rs.roots.iter().zip(expected) {
            assert!((r - e).norm() < 1e-14, "{r} vs {e}");
        }
    }

    #[test]
    fn unit_quartic() {
        let rs = solve_quartic_explicit(BTCoefficients::new(1.0, 0.0, -1.0).unwrap()).unwrap();
        let expected = [
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 0.0),
        ];
        for (r, e) in rs.roots.iter().zip(expected) {
            assert!((r - e).norm() < 1e-14, "{r} vs {e}");
        }
    }

    #[test]
    fn degenerate_and_invalid() {
        let r = solve_quartic_explicit(BTCoefficients { a: 1.0, b: -5.0, c: 0.0 });
        assert!(matches!(r, Err(Error::DegenerateRoots { .. })));
        assert!(matches!(BTCoefficients::new(0.0, 1.0, 1.0), Err(Error::ZeroLeadingCoefficient)));
    }

    #[test]
    fn vanishing_weights() {
        let rs = canonical();
        for ell in [0, -1, -2] {
            assert!(weight_a(&rs, ell).unwrap().abs() <= 1e-10, "A_{ell}");
        }
        assert!((weight_a(&rs, 1).unwrap() - 1.0 / 1.3).abs() < 1e-13);
        assert!((weight_a(&rs, -3).unwrap() + 1.0 / 3.4).abs() < 1e-13);
    }

    #[test]
    fn weight_b_identities() {
        let rs = canonical();
        assert!(weight_b(&rs, 0, 1e6).unwrap().abs() <= 1e-10);
        let w = 2.5;
        let b0 = weight_b(&rs, 0, w).unwrap();
        let b4 = weight_b(&rs, 4, w).unwrap();
        assert!((b4 + w * w * b0).abs() < 1e-11);
    }

    #[test]
    fn resonance_detected() {
        // r^4 = -w^2 exactly at a root of r^4 + 4 = 0 with w = 2.
        let rs = solve_quartic_explicit(BTCoefficients::new(1.0, 0.0, 4.0).unwrap()).unwrap();
        assert!(matches!(weight_b(&rs, 0, 2.0), Err(Error::ResonantDenominator { .. })));
    }

    #[test]
    fn stored_derivative_is_recomputed_value() {
        let rs = canonical();
        for (r, d) in rs.roots.iter().zip(rs.dp) {
            assert_eq!(d, rs.coeffs.dp(*r));
        }
    }

    #[test]
    fn general_solver_examples() {
        let r = solve_poly_general(&[1.0, 0.0, -1.0]).unwrap();
        assert!((r[0] + 1.0).norm() < 1e-14 && (r[1] - 1.0).norm() < 1e-14);
        let r = solve_poly_general(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let expected = [Complex64::new(-1.0, 0.0), Complex64::new(0.5, -h), Complex64::new(0.5, h)];
        for (x, e) in r.iter().zip(expected) {
            assert!((x - e).norm() < 1e-13, "{x} vs {e}");
        }
        let r = solve_poly_general(&[2.0, -3.0, 0.0]).unwrap();
        assert!(r[0].norm() == 0.0 && (r[1] - 1.5).norm() < 1e-14);
    }

    #[test]
    fn general_matches_explicit() {
        let rs = canonical();
        let g = solve_poly_general(&[1.3, 2.6, 0.0, 0.0, 3.4]).unwrap();
        for (r, q) in rs.roots.iter().zip(&g) {
            assert!((r - q).norm() < 1e-9);
        }
    }
}
