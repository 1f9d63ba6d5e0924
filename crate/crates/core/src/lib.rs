//! Exact Boolean function complexity measures and the combinatorics relating
//! 1-certificate complexity to 0-sensitivity and 0-block sensitivity.
//!
//! * [`function`]: bit-packed truth tables, inputs, blocks, certificates.
//! * [`measures`]: `s`, `bs` and `C`, per input and per output value.
//! * [`constructions`]: `g0(k)`, its OR composition and baseline tables.
//! * [`certgraph`]: the contradiction graph of a zero-input instance and the
//!   lower-bound checks built on it.
//! * [`witness`]: explicit 0-inputs with many sensitive positions, obtained by
//!   the overlap and component reductions.
//! * [`search`]: exhaustive and sampled sweeps over function space.

pub mod certgraph;
pub mod constructions;
pub mod error;
pub mod function;
pub mod measures;
mod packing;
pub mod ratio;
pub mod search;
pub mod witness;

pub use error::{Error, Result};
pub use function::{
    is_minimal_certificate, is_one_certificate, minimize_certificate, satisfies, Block,
    BooleanFunction, Certificate, InputWord, Restriction, MAX_VARS,
};
pub use measures::{
    block_sensitivity_at, certificate_at, minimal_sensitive_blocks, profile, sensitivity_at,
    MeasureProfile,
};
pub use ratio::Rational;
