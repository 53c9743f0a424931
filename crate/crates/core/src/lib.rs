//! Solver for the Bagley-Torvik equation
//!
//! ```text
//! a y''(t) + b D^{3/2} y(t) + c y(t) = f(t),   y(0) = y0, y'(0) = v0,
//! ```
//!
//! with D^{3/2} the Caputo derivative. The main route is the closed form built
//! from the four roots of a r^4 + b r^3 + c and the scaled complementary error
//! function; the `reference` module holds independent literature methods used
//! as oracles.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod closed_form;
pub mod dd;
pub mod error;
pub mod problem;
pub mod quadrature;
pub mod reference;
pub mod residual;
pub mod roots;
pub mod solution;
pub mod special;

pub use closed_form::{solve, ClosedForm, SolutionPoint};
pub use error::{Error, Result};
pub use problem::{BTProblem, Forcing, InitialConditions};
pub use roots::{solve_quartic_explicit, BTCoefficients, RootSystem};
pub use solution::{evaluate, time_ratio, EvalOptions, Method, PointStatus, SolutionSeries, TimeGrid};
pub use num_complex::Complex64;
