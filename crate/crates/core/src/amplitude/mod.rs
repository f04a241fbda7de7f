//! Exact scalar kernel: the field Q(√2, √3) and polynomial amplitudes in the
//! input-state symbols.

mod amp;
mod qroot;

pub use amp::{Amp, Monomial, NORMALIZATION_TOL};
pub use qroot::QRoot;
