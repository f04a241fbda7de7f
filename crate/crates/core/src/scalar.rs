//! Amplitude backends.
//!
//! States are generic over [`Scalar`]. The exact backend is [`Amp`]; the
//! numeric backend is `Complex64` with the input amplitudes substituted up
//! front. Both run the same state algebra, so their results can be compared.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::amplitude::{Amp, QRoot};
use crate::error::{Error, Result};

/// Entries below this magnitude are dropped from numeric states.
pub const PRUNE_TOL: f64 = 1e-14;
/// Residual norm² below which a numeric vector counts as linearly dependent.
pub const RANK_TOL: f64 = 1e-10;
/// Comparison tolerance for numeric amplitudes.
pub const APPROX_TOL: f64 = 1e-12;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_field(x: &QRoot) -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    /// Canonical form modulo the normalization constraint on the input state.
    fn reduce(&self) -> Self;
    /// Given a squared norm, returns `1/√self`.
    fn inv_sqrt(&self) -> Result<Self>;
    /// Inverse of a constant scalar.
    fn inv(&self) -> Result<Self>;
    /// Whether a squared norm should be treated as zero.
    fn is_null_norm(&self) -> bool;
    /// A constant `c` with `self = c·other`, if one exists.
    fn ratio(&self, other: &Self) -> Option<Self>;
    fn is_unit_modulus(&self) -> bool;
    /// Free of input symbols once reduced.
    fn is_constant(&self) -> bool;
    fn approx_eq(&self, other: &Self) -> bool;
    /// Human-readable form for reports.
    fn render(&self) -> String;
    /// Numeric value at the given input amplitudes.
    fn to_complex(&self, alpha: Complex64, beta: Complex64) -> Complex64;
}

impl Scalar for Amp {
    fn zero() -> Self {
        Amp::zero()
    }

    fn one() -> Self {
        Amp::one()
    }

    fn from_field(x: &QRoot) -> Self {
        Amp::constant(x.clone())
    }

    fn is_zero(&self) -> bool {
        Amp::is_zero(self)
    }

    fn conj(&self) -> Self {
        Amp::conj(self)
    }

    fn reduce(&self) -> Self {
        Amp::reduce(self)
    }

    fn inv_sqrt(&self) -> Result<Self> {
        let norm = constant_of(self)?;
        if norm.is_zero() {
            return Err(Error::ZeroNorm);
        }
        Ok(Amp::constant(norm.sqrt()?.inv()?))
    }

    fn inv(&self) -> Result<Self> {
        let c = Amp::reduce(self)
            .as_constant()
            .ok_or_else(|| Error::NotConstant(self.to_string()))?;
        Ok(Amp::constant(c.inv()?))
    }

    fn is_null_norm(&self) -> bool {
        Amp::reduce(self).is_zero()
    }

    fn ratio(&self, other: &Self) -> Option<Self> {
        let (m, c_other) = other.terms().next()?;
        let c = (&self.coeff(m) / c_other).ok()?;
        if c.is_zero() {
            return None;
        }
        let candidate = Amp::constant(c);
        (&candidate * other == *self).then_some(candidate)
    }

    fn is_unit_modulus(&self) -> bool {
        // Coefficients are real, so |c| = 1 means c² = 1.
        match self.as_constant() {
            Some(c) => (&c * &c).is_one(),
            None => false,
        }
    }

    fn is_constant(&self) -> bool {
        Amp::reduce(self).as_constant().is_some()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        Amp::reduce(self) == Amp::reduce(other)
    }

    fn render(&self) -> String {
        self.to_string()
    }

    fn to_complex(&self, alpha: Complex64, beta: Complex64) -> Complex64 {
        self.eval_unchecked(alpha, beta)
    }
}

fn constant_of(x: &Amp) -> Result<QRoot> {
    Amp::reduce(x)
        .as_constant()
        .ok_or_else(|| Error::NormDependsOnSymbols(x.to_string()))
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_field(x: &QRoot) -> Self {
        Complex64::new(x.to_f64(), 0.0)
    }

    fn is_zero(&self) -> bool {
        self.norm() < PRUNE_TOL
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn reduce(&self) -> Self {
        *self
    }

    fn inv_sqrt(&self) -> Result<Self> {
        if self.re <= RANK_TOL {
            return Err(Error::ZeroNorm);
        }
        Ok(Complex64::new(self.re.sqrt().recip(), 0.0))
    }

    fn inv(&self) -> Result<Self> {
        if self.norm() < PRUNE_TOL {
            return Err(Error::DivisionByZero);
        }
        Ok(Complex64::new(1.0, 0.0) / self)
    }

    fn is_null_norm(&self) -> bool {
        self.norm() < RANK_TOL
    }

    fn ratio(&self, other: &Self) -> Option<Self> {
        if other.norm() < PRUNE_TOL {
            return None;
        }
        Some(self / other)
    }

    fn is_unit_modulus(&self) -> bool {
        (self.norm() - 1.0).abs() < APPROX_TOL
    }

    fn is_constant(&self) -> bool {
        true
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).norm() < APPROX_TOL
    }

    fn render(&self) -> String {
        format!("{:.15}{:+.15}i", self.re, self.im)
    }

    fn to_complex(&self, _alpha: Complex64, _beta: Complex64) -> Complex64 {
        *self
    }
}
