//! Scalar special functions used by the closed forms and the oracles.

mod accel;
mod bessel;
mod erfc;
mod fresnel;
mod gamma;
mod mittag_leffler;

pub use accel::{accelerate_alternating, cvz, AcceleratedSum, MAX_STAGES};
pub use bessel::bessel_j0;
pub use erfc::{faddeeva, scaled_erfc, scaled_erfc_real};
pub use fresnel::fresnel;
pub use gamma::{gamma, ln_gamma, rgamma, sinpi};
pub use mittag_leffler::{
    ml_derivative, ml_derivative_with, mittag_leffler, mittag_leffler_general, MLParams, Precision, SeriesTolerance,
    SeriesValue,
};
