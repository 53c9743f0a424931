//! Evaluating any of the solution methods over a time grid.

use crate::asymptotics::{
    yc_asymptotic, yf_power_asymptotic, yf_sinusoid_asymptotic, yf_smallt_general, AsymptoticRegime,
};
use crate::closed_form::{ClosedForm, SolutionPoint};
use crate::error::{Error, Result};
use crate::problem::{BTProblem, Forcing};
use crate::quadrature::QuadOptions;
use crate::reference::{
    arora_coefficients, arora_evaluate, fd_values, half_powers_of, pang_yc, podlubny_yf, FDGrid, FdVariant,
    SeriesControls,
};
use crate::roots::{solve_quartic_explicit, RootSystem};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    PodlubnySeries,
    AroraSeries,
    FiniteDifference,
    AsymptoticSmallT,
    AsymptoticLargeT,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::ClosedForm,
        Method::PodlubnySeries,
        Method::AroraSeries,
        Method::FiniteDifference,
        Method::AsymptoticSmallT,
        Method::AsymptoticLargeT,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::PodlubnySeries => "podlubny-series",
            Method::AroraSeries => "arora-series",
            Method::FiniteDifference => "finite-difference",
            Method::AsymptoticSmallT => "asymptotic-small",
            Method::AsymptoticLargeT => "asymptotic-large",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown method '{s}'")))
    }
}

/// n points t_i = t_min + i (t_max - t_min)/n, i = 1..=n; t_min itself is
/// excluded.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub n_points: usize,
}

impl TimeGrid {
    pub fn new(t_min: f64, t_max: f64, n_points: usize) -> Result<Self> {
        if !(t_min >= 0.0) || !t_max.is_finite() || !(t_max > t_min) || n_points == 0 {
            return Err(Error::InvalidInput(format!(
                "grid needs 0 <= t_min < t_max and n >= 1, got ({t_min}, {t_max}, {n_points})"
            )));
        }
        Ok(TimeGrid { t_min, t_max, n_points })
    }

    pub fn step(&self) -> f64 {
        (self.t_max - self.t_min) / self.n_points as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let h = self.step();
        (1..=self.n_points).map(|i| self.t_min + i as f64 * h).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PointStatus {
    Ok,
    /// Value returned but known to be unreliable (e.g. a diverging series).
    Suspect(String),
    /// No value; y, yc and yf are NaN.
    Failed(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPoint {
    pub t: f64,
    pub y: f64,
    pub yc: f64,
    pub yf: f64,
    pub status: PointStatus,
}

impl SeriesPoint {
    fn ok(p: SolutionPoint) -> Self {
        SeriesPoint {
            t: p.t,
            y: p.y,
            yc: p.yc,
            yf: p.yf,
            status: PointStatus::Ok,
        }
    }

    fn failed(t: f64, e: &Error) -> Self {
        SeriesPoint {
            t,
            y: f64::NAN,
            yc: f64::NAN,
            yf: f64::NAN,
            status: PointStatus::Failed(e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMeta {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub y0: f64,
    pub v0: f64,
    pub forcing: String,
    pub grid: TimeGrid,
    pub wall_time: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSeries {
    pub method: Method,
    pub points: Vec<SeriesPoint>,
    pub meta: SeriesMeta,
}

impl SolutionSeries {
    pub fn failures(&self) -> impl Iterator<Item = &SeriesPoint> {
        self.points.iter().filter(|p| matches!(p.status, PointStatus::Failed(_)))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EvalOptions {
    pub quad: QuadOptions,
    pub series: SeriesControls,
    pub fd_variant: FdVariant,
    /// Worker threads for the pointwise methods; 0 picks the machine's
    /// parallelism.
    pub threads: usize,
}

/// Seconds since the call; wasm32 has no monotonic clock in std, so there
/// it always reads zero.
#[cfg(not(target_arch = "wasm32"))]
fn stopwatch() -> impl Fn() -> f64 {
    let start = std::time::Instant::now();
    move || start.elapsed().as_secs_f64()
}

#[cfg(target_arch = "wasm32")]
fn stopwatch() -> impl Fn() -> f64 {
    || 0.0
}

/// Runs `eval` on each time, in order, splitting the grid into contiguous
/// chunks across threads.
pub(crate) fn pointwise<T, F>(times: &[f64], threads: usize, eval: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64) -> T + Sync,
{
    let workers = if threads == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        threads
    }
    .min(times.len())
    .max(1);
    if workers == 1 {
        return times.iter().map(|&t| eval(t)).collect();
    }
    let chunk = times.len().div_ceil(workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = times
            .chunks(chunk)
            .map(|part| {
                let eval = &eval;
                s.spawn(move || part.iter().map(|&t| eval(t)).collect::<Vec<_>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("grid worker panicked"))
            .collect()
    })
}

fn asymptotic_yf(rs: &RootSystem, f: &Forcing, regime: AsymptoticRegime, t: f64) -> Result<f64> {
    let small = regime == AsymptoticRegime::SMALL;
    match f {
        Forcing::Zero => Ok(0.0),
        Forcing::Constant { c0 } => yf_power_asymptotic(rs, &[(*c0, 0.0)], regime, t),
        Forcing::PowerSum { terms } => yf_power_asymptotic(rs, terms, regime, t),
        Forcing::Sinusoid { amplitude, omega } if small => yf_smallt_general(rs, 0.0, amplitude * omega, t),
        Forcing::Sinusoid { amplitude, omega } => yf_sinusoid_asymptotic(rs, *amplitude, *omega, t),
        Forcing::Pulse { amplitude, .. } | Forcing::BesselJ0 { amplitude } if small => {
            yf_smallt_general(rs, *amplitude, 0.0, t)
        }
        Forcing::Callable { f, smoothness_hint } if small && *smoothness_hint >= 1 => {
            // one-sided second-order difference for f'(0)
            let d = 1e-5;
            let f1 = (-3.0 * f(0.0) + 4.0 * f(d) - f(2.0 * d)) / (2.0 * d);
            yf_smallt_general(rs, f(0.0), f1, t)
        }
        other => Err(Error::UnsupportedParameter {
            what: "asymptotic forced response",
            detail: format!("no {} form for {}", if small { "small-time" } else { "large-time" }, other.descriptor()),
        }),
    }
}

/// Evaluates one method over the grid. Numerical failures at single points
/// are recorded in the points; setup errors (bad grid, unsupported forcing
/// for the method) are returned.
pub fn evaluate(problem: &BTProblem, method: Method, grid: TimeGrid, opts: &EvalOptions) -> Result<SolutionSeries> {
    let grid = TimeGrid::new(grid.t_min, grid.t_max, grid.n_points)?;
    problem.forcing.validate()?;
    let times = grid.times();
    let elapsed = stopwatch();
    let points = match method {
        Method::ClosedForm => {
            let cf = ClosedForm::new(problem.clone())?.with_quadrature(opts.quad);
            pointwise(&times, opts.threads, |t| match cf.eval(t) {
                Ok(p) => SeriesPoint::ok(p),
                Err(e) => SeriesPoint::failed(t, &e),
            })
        }
        Method::PodlubnySeries => {
            let k = problem.coeffs;
            let ctl = opts.series;
            pointwise(&times, opts.threads, |t| {
                let r = pang_yc(&k, problem.ics, &ctl, t)
                    .and_then(|yc| Ok((yc, podlubny_yf(&k, &problem.forcing, &ctl, t)?)));
                match r {
                    Ok((yc, yf)) => SeriesPoint::ok(SolutionPoint { t, y: yc + yf, yc, yf }),
                    Err(e) => SeriesPoint::failed(t, &e),
                }
            })
        }
        Method::AroraSeries => {
            let powers = match &problem.forcing {
                Forcing::Zero => Some(vec![]),
                Forcing::Constant { c0 } => Some(vec![(*c0, 0)]),
                Forcing::PowerSum { terms } => half_powers_of(terms),
                _ => None,
            }
            .ok_or_else(|| Error::UnsupportedParameter {
                what: "arora-series",
                detail: format!("force {} is not a sum of half-integer powers", problem.forcing.descriptor()),
            })?;
            let dc = arora_coefficients(&problem.coeffs, problem.ics, &[])?;
            let df = arora_coefficients(&problem.coeffs, Default::default(), &powers)?;
            times
                .iter()
                .map(|&t| {
                    let c = arora_evaluate(&dc, t);
                    let f = arora_evaluate(&df, t);
                    let status = if c.diverging || f.diverging {
                        PointStatus::Suspect("series terms growing".into())
                    } else {
                        PointStatus::Ok
                    };
                    SeriesPoint {
                        t,
                        y: c.value + f.value,
                        yc: c.value,
                        yf: f.value,
                        status,
                    }
                })
                .collect()
        }
        Method::FiniteDifference => {
            if grid.t_min != 0.0 {
                return Err(Error::InvalidInput("finite differences start at t_min = 0".into()));
            }
            let fd = FDGrid::new(grid.step(), grid.n_points.max(2))?;
            let yc = fd_values(&problem.coeffs, problem.ics, &Forcing::Zero, fd, opts.fd_variant);
            let yf = fd_values(&problem.coeffs, Default::default(), &problem.forcing, fd, opts.fd_variant);
            times
                .iter()
                .enumerate()
                .map(|(i, &t)| SeriesPoint::ok(SolutionPoint { t, y: yc[i + 1] + yf[i + 1], yc: yc[i + 1], yf: yf[i + 1] }))
                .collect()
        }
        Method::AsymptoticSmallT | Method::AsymptoticLargeT => {
            let regime = if method == Method::AsymptoticSmallT {
                AsymptoticRegime::SMALL
            } else {
                AsymptoticRegime::LARGE
            };
            let rs = solve_quartic_explicit(problem.coeffs)?;
            // Probe once so unsupported forcings fail up front.
            asymptotic_yf(&rs, &problem.forcing, regime, times[0])?;
            pointwise(&times, opts.threads, |t| {
                let r = yc_asymptotic(&problem.coeffs, problem.ics, regime, t)
                    .and_then(|yc| Ok((yc, asymptotic_yf(&rs, &problem.forcing, regime, t)?)));
                match r {
                    Ok((yc, yf)) => SeriesPoint::ok(SolutionPoint { t, y: yc + yf, yc, yf }),
                    Err(e) => SeriesPoint::failed(t, &e),
                }
            })
        }
    };
    let wall_time = elapsed();
    let k = problem.coeffs;
    Ok(SolutionSeries {
        method,
        points,
        meta: SeriesMeta {
            a: k.a,
            b: k.b,
            c: k.c,
            y0: problem.ics.y0,
            v0: problem.ics.v0,
            forcing: problem.forcing.descriptor(),
            grid,
            wall_time,
        },
    })
}

/// Wall times of the closed form and the Green-function series over the
/// same grid, and their ratio chi = series / closed.
#[derive(Clone, Debug, PartialEq)]
pub struct TimingComparison {
    pub closed_form: f64,
    pub series: f64,
    pub chi: f64,
    pub series_failures: usize,
}

/// Times both methods single-threaded so the ratio compares work, not
/// scheduling.
pub fn time_ratio(problem: &BTProblem, grid: TimeGrid, opts: &EvalOptions) -> Result<TimingComparison> {
    let serial = EvalOptions { threads: 1, ..*opts };
    let closed = evaluate(problem, Method::ClosedForm, grid, &serial)?;
    let series = evaluate(problem, Method::PodlubnySeries, grid, &serial)?;
    let (tc, ts) = (closed.meta.wall_time, series.meta.wall_time);
    Ok(TimingComparison {
        closed_form: tc,
        series: ts,
        chi: ts / tc.max(1e-9),
        series_failures: series.failures().count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::InitialConditions;
    use crate::roots::BTCoefficients;

    fn problem(f: Forcing, y0: f64, v0: f64) -> BTProblem {
        BTProblem::new(
            BTCoefficients::new(1.3, 2.6, 3.4).unwrap(),
            InitialConditions::new(y0, v0),
            f,
        )
        .unwrap()
    }

    #[test]
    fn grid_excludes_start() {
        let g = TimeGrid::new(0.0, 10.0, 200).unwrap();
        let t = g.times();
        assert_eq!(t.len(), 200);
        assert_eq!(t[0], 0.05);
        assert_eq!(t[199], 10.0);
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        assert!(TimeGrid::new(1.0, 1.0, 3).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("nope".parse::<Method>().is_err());
    }

    #[test]
    fn threaded_and_serial_agree() {
        let p = problem(Forcing::Sinusoid { amplitude: 1.0, omega: 2.5 }, 1.0, -1.0);
        let g = TimeGrid::new(0.0, 5.0, 37).unwrap();
        let one = evaluate(&p, Method::ClosedForm, g, &EvalOptions { threads: 1, ..Default::default() }).unwrap();
        let many = evaluate(&p, Method::ClosedForm, g, &EvalOptions { threads: 4, ..Default::default() }).unwrap();
        assert_eq!(one.points, many.points);
    }

    #[test]
    fn arora_rejects_smooth_forces() {
        let p = problem(Forcing::BesselJ0 { amplitude: 1.0 }, 0.0, 0.0);
        let g = TimeGrid::new(0.0, 1.0, 4).unwrap();
        assert!(matches!(
            evaluate(&p, Method::AroraSeries, g, &EvalOptions::default()),
            Err(Error::UnsupportedParameter { .. })
        ));
    }

    #[test]
    fn fd_requires_origin() {
        let p = problem(Forcing::Zero, 1.0, 0.0);
        let g = TimeGrid::new(0.5, 1.0, 4).unwrap();
        assert!(evaluate(&p, Method::FiniteDifference, g, &EvalOptions::default()).is_err());
    }

    #[test]
    fn large_time_pulse_is_unsupported() {
        let p = problem(Forcing::Pulse { amplitude: 1.0, t_off: 1.0 }, 0.0, 0.0);
        let g = TimeGrid::new(0.0, 1.0, 4).unwrap();
        assert!(evaluate(&p, Method::AsymptoticLargeT, g, &EvalOptions::default()).is_err());
        assert!(evaluate(&p, Method::AsymptoticSmallT, g, &EvalOptions::default()).is_ok());
    }
}
