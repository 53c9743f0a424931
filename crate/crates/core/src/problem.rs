//! Problem description shared by every solver.

use crate::error::{Error, Result};
use crate::roots::BTCoefficients;
use crate::special::bessel_j0;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct InitialConditions {
    pub y0: f64,
    pub v0: f64,
}

impl InitialConditions {
    pub fn new(y0: f64, v0: f64) -> Self {
        InitialConditions { y0, v0 }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.y0 == 0.0 && self.v0 == 0.0
    }
}

pub type ForceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// External force f(t).
#[derive(Clone)]
pub enum Forcing {
    Zero,
    Constant { c0: f64 },
    /// sum_l C_l t^{alpha_l}, alpha_l > -1.
    PowerSum { terms: Vec<(f64, f64)> },
    /// amplitude * sin(omega t).
    Sinusoid { amplitude: f64, omega: f64 },
    /// amplitude on [0, t_off), zero afterwards.
    Pulse { amplitude: f64, t_off: f64 },
    BesselJ0 { amplitude: f64 },
    /// Arbitrary force, integrated numerically. `smoothness_hint` is the
    /// number of continuous derivatives the caller vouches for.
    Callable { f: ForceFn, smoothness_hint: u32 },
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Forcing::Zero => write!(f, "Zero"),
            Forcing::Constant { c0 } => write!(f, "Constant({c0})"),
            Forcing::PowerSum { terms } => write!(f, "PowerSum({terms:?})"),
            Forcing::Sinusoid { amplitude, omega } => write!(f, "Sinusoid({amplitude}, {omega})"),
            Forcing::Pulse { amplitude, t_off } => write!(f, "Pulse({amplitude}, {t_off})"),
            Forcing::BesselJ0 { amplitude } => write!(f, "BesselJ0({amplitude})"),
            Forcing::Callable { smoothness_hint, .. } => {
                write!(f, "Callable(smoothness {smoothness_hint})")
            }
        }
    }
}

impl Forcing {
    pub fn callable<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F, smoothness_hint: u32) -> Self {
        Forcing::Callable {
            f: Arc::new(f),
            smoothness_hint,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        match self {
            Forcing::Zero => Ok(()),
            Forcing::Constant { c0 } if !c0.is_finite() => bad(format!("constant force {c0}")),
            Forcing::PowerSum { terms } => {
                for &(c, alpha) in terms {
                    if !c.is_finite() || !(alpha > -1.0) || !alpha.is_finite() {
                        return bad(format!(
                            "power term ({c}, {alpha}): need finite C and exponent > -1"
                        ));
                    }
                }
                Ok(())
            }
            Forcing::Sinusoid { amplitude, omega } => {
                if !amplitude.is_finite() || !(*omega > 0.0) || !omega.is_finite() {
                    return bad(format!("sinusoid ({amplitude}, {omega}): need omega > 0"));
                }
                Ok(())
            }
            Forcing::Pulse { amplitude, t_off } => {
                if !amplitude.is_finite() || !(*t_off > 0.0) || !t_off.is_finite() {
                    return bad(format!("pulse ({amplitude}, {t_off}): need t_off > 0"));
                }
                Ok(())
            }
            Forcing::BesselJ0 { amplitude } if !amplitude.is_finite() => {
                bad(format!("Bessel amplitude {amplitude}"))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Forcing::Zero => 0.0,
            Forcing::Constant { c0 } => *c0,
            Forcing::PowerSum { terms } => terms
                .iter()
                .map(|&(c, alpha)| if alpha == 0.0 { c } else { c * t.powf(alpha) })
                .sum(),
            Forcing::Sinusoid { amplitude, omega } => amplitude * (omega * t).sin(),
            Forcing::Pulse { amplitude, t_off } => {
                if t < *t_off {
                    *amplitude
                } else {
                    0.0
                }
            }
            Forcing::BesselJ0 { amplitude } => amplitude * bessel_j0(t),
            Forcing::Callable { f, .. } => f(t),
        }
    }

    /// Same force with every amplitude multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Forcing {
        match self {
            Forcing::Zero => Forcing::Zero,
            Forcing::Constant { c0 } => Forcing::Constant { c0: s * c0 },
            Forcing::PowerSum { terms } => Forcing::PowerSum {
                terms: terms.iter().map(|&(c, a)| (s * c, a)).collect(),
            },
            Forcing::Sinusoid { amplitude, omega } => Forcing::Sinusoid {
                amplitude: s * amplitude,
                omega: *omega,
            },
            Forcing::Pulse { amplitude, t_off } => Forcing::Pulse {
                amplitude: s * amplitude,
                t_off: *t_off,
            },
            Forcing::BesselJ0 { amplitude } => Forcing::BesselJ0 {
                amplitude: s * amplitude,
            },
            Forcing::Callable { f, smoothness_hint } => {
                let f = f.clone();
                Forcing::callable(move |t| s * f(t), *smoothness_hint)
            }
        }
    }

    /// Short machine-readable tag, matching the CLI `--force` syntax.
    pub fn descriptor(&self) -> String {
        match self {
            Forcing::Zero => "zero".into(),
            Forcing::Constant { c0 } => format!("constant:{c0}"),
            Forcing::PowerSum { terms } => {
                let parts: Vec<String> = terms.iter().map(|(c, a)| format!("{c},{a}")).collect();
                format!("power:{}", parts.join(","))
            }
            Forcing::Sinusoid { amplitude, omega } => format!("sin:{amplitude},{omega}"),
            Forcing::Pulse { amplitude, t_off } => format!("pulse:{amplitude},{t_off}"),
            Forcing::BesselJ0 { amplitude } => format!("besselj0:{amplitude}"),
            Forcing::Callable { .. } => "callable".into(),
        }
    }
}

/// Parses the `--force` syntax produced by [`Forcing::descriptor`]:
/// `zero`, `constant:C`, `power:C0,a0[,C1,a1...]`, `sin:A,omega`,
/// `pulse:A,toff`, `besselj0:A`.
impl FromStr for Forcing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<f64> = if args.trim().is_empty() {
            vec![]
        } else {
            args.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidInput(format!("bad number '{x}' in force '{s}'")))
                })
                .collect::<Result<_>>()?
        };
        let arity = |n: usize| -> Result<()> {
            if nums.len() != n {
                return Err(Error::InvalidInput(format!("force '{kind}' takes {n} arguments, got '{s}'")));
            }
            Ok(())
        };
        let f = match kind.to_ascii_lowercase().as_str() {
            "zero" => {
                arity(0)?;
                Forcing::Zero
            }
            "constant" => {
                arity(1)?;
                Forcing::Constant { c0: nums[0] }
            }
            "power" => {
                if nums.is_empty() || nums.len() % 2 != 0 {
                    return Err(Error::InvalidInput(format!("power force needs C,alpha pairs, got '{s}'")));
                }
                Forcing::PowerSum {
                    terms: nums.chunks(2).map(|p| (p[0], p[1])).collect(),
                }
            }
            "sin" => {
                arity(2)?;
                Forcing::Sinusoid {
                    amplitude: nums[0],
                    omega: nums[1],
                }
            }
            "pulse" => {
                arity(2)?;
                Forcing::Pulse {
                    amplitude: nums[0],
                    t_off: nums[1],
                }
            }
            "besselj0" => {
                arity(1)?;
                Forcing::BesselJ0 { amplitude: nums[0] }
            }
            _ => return Err(Error::InvalidInput(format!("unknown force '{s}'"))),
        };
        f.validate()?;
        Ok(f)
    }
}

#[derive(Clone, Debug)]
pub struct BTProblem {
    pub coeffs: BTCoefficients,
    pub ics: InitialConditions,
    pub forcing: Forcing,
}

impl BTProblem {
    pub fn new(coeffs: BTCoefficients, ics: InitialConditions, forcing: Forcing) -> Result<Self> {
        let coeffs = BTCoefficients::new(coeffs.a, coeffs.b, coeffs.c)?;
        if !(ics.y0.is_finite() && ics.v0.is_finite()) {
            return Err(Error::InvalidInput(format!("initial conditions {ics:?}")));
        }
        forcing.validate()?;
        Ok(BTProblem {
            coeffs,
            ics,
            forcing,
        })
    }
}
