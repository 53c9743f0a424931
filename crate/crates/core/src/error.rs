use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("leading coefficient a is zero")]
    ZeroLeadingCoefficient,

    #[error("characteristic polynomial has repeated roots (min separation {separation:e})")]
    DegenerateRoots { separation: f64 },

    #[error("{what} did not converge (terms used {terms}, largest term {largest:e}, error estimate {estimate:e})")]
    NonConvergence {
        what: &'static str,
        terms: usize,
        largest: f64,
        estimate: f64,
    },

    #[error("resonant denominator in {what} (|denominator| = {value:e})")]
    ResonantDenominator { what: &'static str, value: f64 },

    #[error("unsupported parameters for {what}: {detail}")]
    UnsupportedParameter { what: &'static str, detail: String },

    #[error("{what} overflows the representable range")]
    Overflow { what: &'static str },

    #[error("quadrature failed: achieved error {achieved:e}, requested {requested:e}")]
    QuadratureFailure { achieved: f64, requested: f64 },

    #[error("{what}: imaginary residue {residue:e} exceeds bound {bound:e}")]
    ImaginaryResidue {
        what: &'static str,
        residue: f64,
        bound: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
