//! Independent literature methods, kept as oracles and comparison baselines:
//! the Green-function series in Mittag-Leffler derivatives, the recursive
//! half-power series, and Grunwald-Letnikov finite differences.

mod arora;
mod finite_difference;
mod series;

pub use arora::{arora_coefficients, arora_series, evaluate as arora_evaluate, half_powers_of, AroraValue, COEFFICIENT_CUTOFF};
pub use finite_difference::{fd_values, finite_difference_solve, gl_weights, FDGrid, FdVariant};
pub use series::{pang_yc, podlubny_green, podlubny_green_with, podlubny_yf, SeriesControls};
