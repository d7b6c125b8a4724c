//! Numerical quadrature and series summation.
//!
//! Everything here is generic over [`QuadValue`], so the same adaptive driver
//! integrates real and complex integrands.

mod adaptive;
mod bessel;
mod filon;
mod legendre;
mod series;

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use adaptive::{
    integrate_adaptive, integrate_exponential_tail, integrate_finite, integrate_semi_infinite,
};
pub use bessel::spherical_bessel_j;
pub use filon::integrate_oscillatory;
pub use legendre::gauss_legendre;
pub use series::{sum_series, SeriesConfig, SeriesSum};

/// Values a quadrature rule can accumulate.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn norm(&self) -> f64;
    /// Scalar reported in convergence errors: the value itself for reals,
    /// the modulus for complex numbers.
    fn scalar(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn scalar(&self) -> f64 {
        *self
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
    fn scalar(&self) -> f64 {
        Complex64::norm(*self)
    }
}

/// How [`integrate_oscillatory`] treats the exponential factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OscillatoryMethod {
    /// Legendre expansion of the amplitude with exact moments of the
    /// exponential (spherical Bessel functions).
    #[default]
    Filon,
    /// Adaptive Gauss-Kronrod on every half period of the exponential.
    PanelPerHalfPeriod,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub oscillatory_method: OscillatoryMethod,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_subdivisions: 2000,
            oscillatory_method: OscillatoryMethod::Filon,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        QuadratureConfig { rel_tol, ..self }
    }

    pub fn with_method(self, oscillatory_method: OscillatoryMethod) -> Self {
        QuadratureConfig {
            oscillatory_method,
            ..self
        }
    }

    pub(crate) fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value)
    }
}

/// A quadrature result with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

impl<T: QuadValue> Estimate<T> {
    pub(crate) fn combine(self, other: Estimate<T>) -> Estimate<T> {
        Estimate {
            value: self.value + other.value,
            error: self.error + other.error,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}
