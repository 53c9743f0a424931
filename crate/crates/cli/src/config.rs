//! Problem configuration: defaults, JSON config files and flag overrides.

use bagley_torvik::reference::FdVariant;
use bagley_torvik::{BTCoefficients, BTProblem, EvalOptions, Forcing, InitialConditions, Method, TimeGrid};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub n_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Absolute tolerance of the convolution quadratures.
    pub quadrature: f64,
    /// Absolute tolerance of the series references.
    pub series: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub y0: f64,
    pub v0: f64,
    /// Same syntax as `--force`.
    pub force: String,
    pub grid: GridConfig,
    pub methods: Vec<String>,
    pub tolerances: Tolerances,
    /// `as-printed` or `caputo-corrected`.
    pub fd_variant: String,
    /// 0 uses every available core.
    pub threads: usize,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        ProblemConfig {
            a: 1.3,
            b: 2.6,
            c: 3.4,
            y0: 0.0,
            v0: 0.0,
            force: "sin:1,2.5".into(),
            grid: GridConfig {
                t_min: 0.0,
                t_max: 10.0,
                n_points: 200,
            },
            methods: vec![Method::ClosedForm.name().into()],
            tolerances: Tolerances {
                quadrature: 1e-9,
                series: 1e-12,
            },
            fd_variant: "as-printed".into(),
            threads: 0,
        }
    }
}

/// Everything a command needs, validated.
pub struct Resolved {
    pub problem: BTProblem,
    pub grid: TimeGrid,
    pub methods: Vec<Method>,
    pub opts: EvalOptions,
}

/// Overlays `top` onto `base`, recursing into objects.
fn overlay(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => overlay(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, t) => *b = t,
    }
}

impl ProblemConfig {
    /// `base` with the keys present in the JSON file at `path` replaced.
    pub fn load_over(base: &ProblemConfig, path: &Path) -> Result<ProblemConfig, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let file: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        if !file.is_object() {
            return Err(format!("{}: config must be a JSON object", path.display()));
        }
        let mut merged = serde_json::to_value(base).expect("config serializes");
        overlay(&mut merged, file);
        serde_json::from_value(merged).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the compact JSON form; identical configs hash identically.
    pub fn hash(&self) -> String {
        let compact = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(compact.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn fd_variant(&self) -> Result<FdVariant, String> {
        match self.fd_variant.as_str() {
            "as-printed" => Ok(FdVariant::AsPrinted),
            "caputo-corrected" => Ok(FdVariant::CaputoCorrected),
            other => Err(format!("unknown fd_variant '{other}' (as-printed, caputo-corrected)")),
        }
    }

    pub fn coefficients(&self) -> Result<BTCoefficients, String> {
        BTCoefficients::new(self.a, self.b, self.c).map_err(|e| e.to_string())
    }

    pub fn resolve(&self) -> Result<Resolved, String> {
        let forcing: Forcing = self.force.parse().map_err(|e: bagley_torvik::Error| e.to_string())?;
        let problem = BTProblem::new(self.coefficients()?, InitialConditions::new(self.y0, self.v0), forcing)
            .map_err(|e| e.to_string())?;
        let grid = TimeGrid::new(self.grid.t_min, self.grid.t_max, self.grid.n_points).map_err(|e| e.to_string())?;
        let methods = self
            .methods
            .iter()
            .map(|m| m.parse::<Method>().map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        let tol = self.tolerances;
        if !(tol.quadrature > 0.0) || !(tol.series > 0.0) {
            return Err(format!("tolerances must be positive, got {tol:?}"));
        }
        let mut opts = EvalOptions {
            fd_variant: self.fd_variant()?,
            threads: self.threads,
            ..Default::default()
        };
        opts.quad.abs_tol = tol.quadrature;
        opts.series.abs_tol = tol.series;
        Ok(Resolved {
            problem,
            grid,
            methods,
            opts,
        })
    }
}
