//! Three operations for the browser page in `www/`: a solution curve, a
//! method comparison and the root report. Results are JSON strings.

use bagley_torvik::roots::weight_a;
use bagley_torvik::{
    evaluate, solve_quartic_explicit, BTCoefficients, BTProblem, EvalOptions, Forcing, InitialConditions, Method,
    PointStatus, SolutionSeries, TimeGrid,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn problem(a: f64, b: f64, c: f64, y0: f64, v0: f64, force: &str) -> Result<BTProblem, String> {
    let forcing: Forcing = force.parse().map_err(|e: bagley_torvik::Error| e.to_string())?;
    let k = BTCoefficients::new(a, b, c).map_err(|e| e.to_string())?;
    BTProblem::new(k, InitialConditions::new(y0, v0), forcing).map_err(|e| e.to_string())
}

fn series(p: &BTProblem, method: Method, t_max: f64, n: usize) -> Result<SolutionSeries, String> {
    let grid = TimeGrid::new(0.0, t_max, n).map_err(|e| e.to_string())?;
    let opts = EvalOptions {
        threads: 1,
        ..Default::default()
    };
    evaluate(p, method, grid, &opts).map_err(|e| e.to_string())
}

/// NaN is not JSON; failed points become null.
fn finite(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn column(s: &SolutionSeries, pick: impl Fn(&bagley_torvik::solution::SeriesPoint) -> f64) -> Vec<Value> {
    s.points.iter().map(|p| finite(pick(p))).collect()
}

#[allow(clippy::too_many_arguments)]
pub fn solve_json(
    a: f64,
    b: f64,
    c: f64,
    y0: f64,
    v0: f64,
    force: &str,
    method: &str,
    t_max: f64,
    n: usize,
) -> Result<String, String> {
    let p = problem(a, b, c, y0, v0, force)?;
    let method: Method = method.parse().map_err(|e: bagley_torvik::Error| e.to_string())?;
    let s = series(&p, method, t_max, n)?;
    let notes: Vec<String> = s
        .points
        .iter()
        .filter_map(|p| match &p.status {
            PointStatus::Ok => None,
            PointStatus::Suspect(why) | PointStatus::Failed(why) => Some(format!("t = {:.4}: {why}", p.t)),
        })
        .collect();
    Ok(json!({
        "method": method.name(),
        "t": column(&s, |p| p.t),
        "y": column(&s, |p| p.y),
        "yc": column(&s, |p| p.yc),
        "yf": column(&s, |p| p.yf),
        "notes": notes,
    })
    .to_string())
}

/// Every listed method on the same grid, with the largest deviation from
/// the closed form over points where both have values.
#[allow(clippy::too_many_arguments)]
pub fn compare_json(
    a: f64,
    b: f64,
    c: f64,
    y0: f64,
    v0: f64,
    force: &str,
    methods: &str,
    t_max: f64,
    n: usize,
) -> Result<String, String> {
    let p = problem(a, b, c, y0, v0, force)?;
    let reference = series(&p, Method::ClosedForm, t_max, n)?;
    let mut curves = serde_json::Map::new();
    let mut deviation = serde_json::Map::new();
    let mut errors = serde_json::Map::new();
    for name in methods.split(',').map(str::trim).filter(|m| !m.is_empty()) {
        let m: Method = name.parse().map_err(|e: bagley_torvik::Error| e.to_string())?;
        match series(&p, m, t_max, n) {
            Ok(s) => {
                let dev = s
                    .points
                    .iter()
                    .zip(&reference.points)
                    .map(|(x, r)| (x.y - r.y).abs())
                    .filter(|d| d.is_finite())
                    .fold(0.0f64, f64::max);
                deviation.insert(m.name().into(), json!(dev));
                curves.insert(m.name().into(), Value::Array(column(&s, |p| p.y)));
            }
            // e.g. the half-power series with a sinusoidal force
            Err(e) => {
                errors.insert(m.name().into(), json!(e));
            }
        }
    }
    Ok(json!({
        "t": column(&reference, |p| p.t),
        "closed-form": column(&reference, |p| p.y),
        "curves": curves,
        "max_deviation": deviation,
        "errors": errors,
    })
    .to_string())
}

pub fn roots_json(a: f64, b: f64, c: f64) -> Result<String, String> {
    let k = BTCoefficients::new(a, b, c).map_err(|e| e.to_string())?;
    let rs = solve_quartic_explicit(k).map_err(|e| e.to_string())?;
    let weights: Vec<Value> = (-3..=1)
        .map(|l| weight_a(&rs, l).map(|w| json!({"l": l, "A": w})).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    Ok(json!({
        "roots": rs.roots.iter().map(|r| json!([r.re, r.im])).collect::<Vec<_>>(),
        "residuals": rs.roots.iter().map(|&r| k.p(r).norm()).collect::<Vec<_>>(),
        "weights": weights,
    })
    .to_string())
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn solve(a: f64, b: f64, c: f64, y0: f64, v0: f64, force: &str, method: &str, t_max: f64, n: usize) -> Result<String, JsValue> {
    solve_json(a, b, c, y0, v0, force, method, t_max, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn compare(a: f64, b: f64, c: f64, y0: f64, v0: f64, force: &str, methods: &str, t_max: f64, n: usize) -> Result<String, JsValue> {
    compare_json(a, b, c, y0, v0, force, methods, t_max, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn roots(a: f64, b: f64, c: f64) -> Result<String, JsValue> {
    roots_json(a, b, c).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn curve_has_requested_points() {
        let v = parse(&solve_json(1.3, 2.6, 3.4, 0.0, 0.0, "sin:1,2.5", "closed-form", 10.0, 50).unwrap());
        assert_eq!(v["t"].as_array().unwrap().len(), 50);
        assert!(v["notes"].as_array().unwrap().is_empty());
    }

    #[test]
    fn failed_points_become_null() {
        let v = parse(&solve_json(1.3, 2.6, 3.4, 0.0, 0.0, "sin:1,2.5", "podlubny-series", 10.0, 2).unwrap());
        assert!(v["y"][1].is_null());
        assert_eq!(v["notes"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn compare_reports_unsupported_methods_separately() {
        let v = parse(
            &compare_json(1.3, 2.6, 3.4, 0.0, 0.0, "sin:1,2.5", "finite-difference,arora-series", 10.0, 200).unwrap(),
        );
        assert!(v["max_deviation"]["finite-difference"].as_f64().unwrap() < 2e-2);
        assert!(v["errors"]["arora-series"].is_string());
    }

    #[test]
    fn roots_and_errors() {
        let v = parse(&roots_json(1.3, 2.6, 3.4).unwrap());
        assert_eq!(v["roots"].as_array().unwrap().len(), 4);
        assert!(roots_json(0.0, 1.0, 1.0).is_err());
        assert!(solve_json(1.0, 1.0, 1.0, 0.0, 0.0, "sin:", "closed-form", 1.0, 3).is_err());
    }
}
