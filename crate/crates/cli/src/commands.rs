//! The subcommands. Each returns `Err(Failure)` with the exit code class.

use crate::config::{ProblemConfig, Resolved};
use crate::output::{emit, sidecar, Csv};
use bagley_torvik::roots::weight_a;
use bagley_torvik::{
    evaluate, solve_quartic_explicit, time_ratio, Complex64, Forcing, Method, PointStatus, SolutionSeries,
};
use serde_json::{json, Value};
use std::path::Path;

pub enum Failure {
    /// Exit 2: bad configuration or flags.
    Config(String),
    /// Exit 3: a numerical method failed.
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numerical(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn config_err(e: impl ToString) -> Failure {
    Failure::Config(e.to_string())
}

fn first_failure(s: &SolutionSeries) -> Option<(f64, String)> {
    s.failures().next().map(|p| match &p.status {
        PointStatus::Failed(why) => (p.t, why.clone()),
        _ => unreachable!(),
    })
}

fn run(r: &Resolved, method: Method) -> Result<SolutionSeries, Failure> {
    evaluate(&r.problem, method, r.grid, &r.opts).map_err(config_err)
}

fn header(command: &str, cfg: &ProblemConfig, extra: &str) -> String {
    format!(
        "bagley-torvik {command}{extra}\nconfig-sha256 {}\nforce {} a {} b {} c {} y0 {} v0 {}",
        cfg.hash(),
        cfg.force,
        cfg.a,
        cfg.b,
        cfg.c,
        cfg.y0,
        cfg.v0
    )
}

fn suspects(s: &SolutionSeries) -> Vec<Value> {
    s.points
        .iter()
        .filter_map(|p| match &p.status {
            PointStatus::Suspect(why) => Some(json!({"t": p.t, "reason": why})),
            _ => None,
        })
        .collect()
}

pub fn solve(cfg: &ProblemConfig, out: Option<&Path>) -> Outcome {
    let r = cfg.resolve().map_err(Failure::Config)?;
    let method = *r.methods.first().ok_or_else(|| config_err("no method given"))?;
    let s = run(&r, method)?;
    if let Some((t, why)) = first_failure(&s) {
        return Err(Failure::Numerical(format!("{method} failed at t = {t}: {why}")));
    }
    let mut csv = Csv::new(&header("solve", cfg, &format!(" method {method}")), &["t", "y", "yc", "yf"]);
    for p in &s.points {
        csv.row(&[p.t, p.y, p.yc, p.yf]);
    }
    let suspect = suspects(&s);
    if let Some(first) = suspect.first() {
        eprintln!("warning: {} points flagged unreliable, first at t = {}", suspect.len(), first["t"]);
    }
    emit(out, &csv.into_string()).map_err(config_err)?;
    match out {
        Some(path) => sidecar(
            path,
            &json!({
                "command": "solve",
                "method": method.name(),
                "config": cfg,
                "config_sha256": cfg.hash(),
                "points": s.points.len(),
                "wall_time": s.meta.wall_time,
                "suspect_points": suspect,
            }),
        )
        .map_err(config_err),
        None => {
            eprintln!("{method}: {} points in {:.3e} s", s.points.len(), s.meta.wall_time);
            Ok(())
        }
    }
}

/// Stretches of the grid where a method is known to go wrong.
fn known_issues(r: &Resolved, method: Method, s: &SolutionSeries) -> Vec<String> {
    let mut notes = vec![];
    let t_max = r.grid.t_max;
    match method {
        Method::AroraSeries => {
            let half = matches!(&r.problem.forcing, Forcing::PowerSum { terms } if terms.iter().any(|&(_, a)| a.fract() != 0.0));
            if half && t_max > 3.0 {
                notes.push("half-power series: known divergence for t >~ 3".into());
            }
            if let Some(p) = s.points.iter().find(|p| matches!(p.status, PointStatus::Suspect(_))) {
                notes.push(format!("series terms growing from t = {}", p.t));
            }
        }
        Method::PodlubnySeries if t_max > 9.0 => {
            notes.push("Green-function series: precision limit reached for t >~ 9".into());
        }
        Method::FiniteDifference if !r.problem.ics.is_homogeneous() && r.opts.fd_variant == Default::default() => {
            notes.push("as-printed finite differences do not converge to the solution for nonzero initial conditions".into());
        }
        Method::AsymptoticSmallT => notes.push("small-time form: valid for t << 1".into()),
        Method::AsymptoticLargeT => notes.push("large-time form: valid for t >> 1".into()),
        _ => {}
    }
    if let Some((t, why)) = first_failure(s) {
        notes.push(format!("{} failed points, first at t = {t}: {why}", s.failures().count()));
    }
    notes
}

pub fn compare(cfg: &ProblemConfig, out: Option<&Path>) -> Outcome {
    let r = cfg.resolve().map_err(Failure::Config)?;
    let mut methods = r.methods.clone();
    methods.dedup();
    if methods.len() < 2 {
        return Err(config_err(format!(
            "compare needs at least two methods, got {}",
            methods.len()
        )));
    }
    let reference = run(&r, Method::ClosedForm)?;
    if let Some((t, why)) = first_failure(&reference) {
        return Err(Failure::Numerical(format!("closed-form reference failed at t = {t}: {why}")));
    }
    let runs = methods
        .iter()
        .map(|&m| if m == Method::ClosedForm { Ok(reference.clone()) } else { run(&r, m) })
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = vec![];
    println!("{:<20} {:>12} {:>12} {:>8}  notes", "method", "max |dev|", "mean |dev|", "failed");
    for (m, s) in methods.iter().zip(&runs) {
        let devs: Vec<f64> = s
            .points
            .iter()
            .zip(&reference.points)
            .filter(|(p, _)| !matches!(p.status, PointStatus::Failed(_)))
            .map(|(p, q)| (p.y - q.y).abs())
            .collect();
        let max = devs.iter().fold(0.0f64, |a, &d| a.max(d));
        let mean = if devs.is_empty() { f64::NAN } else { devs.iter().sum::<f64>() / devs.len() as f64 };
        let notes = known_issues(&r, *m, s);
        let failed = s.failures().count();
        println!("{:<20} {max:>12.3e} {mean:>12.3e} {failed:>8}  {}", m.name(), notes.join("; "));
        report.push(json!({
            "method": m.name(),
            "max_abs_deviation": max,
            "mean_abs_deviation": mean,
            "failed_points": failed,
            "wall_time": s.meta.wall_time,
            "notes": notes,
        }));
    }
    if let Some(path) = out {
        let names: Vec<&str> = methods.iter().map(|m| m.name()).collect();
        let mut cols = vec!["t"];
        cols.extend(&names);
        let mut csv = Csv::new(&header("compare", cfg, ""), &cols);
        for (i, p) in reference.points.iter().enumerate() {
            let mut row = vec![p.t];
            row.extend(runs.iter().map(|s| s.points[i].y));
            csv.row(&row);
        }
        emit(Some(path), &csv.into_string()).map_err(config_err)?;
        sidecar(
            path,
            &json!({"command": "compare", "config": cfg, "config_sha256": cfg.hash(), "reference": "closed-form", "methods": report}),
        )
        .map_err(config_err)?;
    }
    Ok(())
}

pub const BENCH_FORCES: [&str; 3] = ["besselj0:1", "constant:1", "sin:1,2.5"];

pub fn bench(cfg: &ProblemConfig, all: bool, out: Option<&Path>) -> Outcome {
    let forces: Vec<String> = if all {
        BENCH_FORCES.iter().map(|s| s.to_string()).collect()
    } else {
        vec![cfg.force.clone()]
    };
    let mut rows = vec![];
    println!(
        "{:<14} {:>14} {:>18} {:>10} {:>16}",
        "force", "closed-form s", "podlubny-series s", "chi", "series failures"
    );
    for force in forces {
        let cfg = ProblemConfig { force, ..cfg.clone() };
        let r = cfg.resolve().map_err(Failure::Config)?;
        if !matches!(
            r.problem.forcing,
            Forcing::BesselJ0 { .. } | Forcing::Constant { .. } | Forcing::Sinusoid { .. }
        ) {
            return Err(config_err(format!(
                "bench supports besselj0, constant and sin forces, got {}",
                cfg.force
            )));
        }
        let t = time_ratio(&r.problem, r.grid, &r.opts).map_err(|e| Failure::Numerical(e.to_string()))?;
        println!(
            "{:<14} {:>14.3e} {:>18.3e} {:>10.1} {:>16}",
            cfg.force, t.closed_form, t.series, t.chi, t.series_failures
        );
        rows.push(json!({
            "force": cfg.force,
            "closed_form_s": t.closed_form,
            "podlubny_series_s": t.series,
            "chi": t.chi,
            "series_failures": t.series_failures,
        }));
    }
    let machine = json!({
        "os": std::env::consts::OS,
        "arch": std::env::consts::ARCH,
        "available_parallelism": std::thread::available_parallelism().map_or(1, |n| n.get()),
        "threads_used": 1,
        "profile": if cfg!(debug_assertions) { "debug" } else { "release" },
    });
    println!("machine: {machine}");
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&json!({
            "command": "bench",
            "config": cfg,
            "y0": cfg.y0,
            "v0": cfg.v0,
            "results": rows,
            "machine": machine,
        }))
        .expect("report serializes");
        emit(Some(path), &(text + "\n")).map_err(config_err)?;
    }
    Ok(())
}

fn complex(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

pub fn roots(cfg: &ProblemConfig, out: Option<&Path>) -> Outcome {
    let numerical = |e: bagley_torvik::Error| Failure::Numerical(e.to_string());
    let k = bagley_torvik::BTCoefficients::new(cfg.a, cfg.b, cfg.c).map_err(numerical)?;
    let rs = solve_quartic_explicit(k).map_err(numerical)?;
    let mut weights = serde_json::Map::new();
    for ell in -3..=1 {
        weights.insert(ell.to_string(), json!(weight_a(&rs, ell).map_err(numerical)?));
    }
    let q = rs.intermediates;
    let report = json!({
        "coefficients": {"a": k.a, "b": k.b, "c": k.c},
        "method": format!("{:?}", rs.method),
        "roots": rs.roots.iter().map(|&r| complex(r)).collect::<Vec<_>>(),
        "residuals": rs.roots.iter().map(|&r| k.p(r).norm()).collect::<Vec<_>>(),
        "weights": weights,
        "intermediates": {
            "beta": complex(q.beta),
            "gamma": complex(q.gamma),
            "delta": complex(q.delta),
            "R": complex(q.r),
            "T_plus": complex(q.t_plus),
            "T_minus": complex(q.t_minus),
        },
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    emit(out, &(text + "\n")).map_err(config_err)
}

pub fn asymptotics(cfg: &ProblemConfig, out: Option<&Path>) -> Outcome {
    let r = cfg.resolve().map_err(Failure::Config)?;
    let closed = run(&r, Method::ClosedForm)?;
    if let Some((t, why)) = first_failure(&closed) {
        return Err(Failure::Numerical(format!("closed form failed at t = {t}: {why}")));
    }
    let mut columns = vec![];
    for m in [Method::AsymptoticSmallT, Method::AsymptoticLargeT] {
        match evaluate(&r.problem, m, r.grid, &r.opts) {
            Ok(s) => columns.push(s.points.iter().map(|p| p.y).collect::<Vec<_>>()),
            Err(e) => {
                eprintln!("{m}: {e}; column left as NaN");
                columns.push(vec![f64::NAN; closed.points.len()]);
            }
        }
    }
    let mut csv = Csv::new(&header("asymptotics", cfg, ""), &["t", "closed", "small", "large"]);
    for (i, p) in closed.points.iter().enumerate() {
        csv.row(&[p.t, p.y, columns[0][i], columns[1][i]]);
    }
    emit(out, &csv.into_string()).map_err(config_err)
}
