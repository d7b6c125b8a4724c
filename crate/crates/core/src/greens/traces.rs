use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::Mat2;
use crate::error::{Error, Result};
use crate::physics::constants::C;
use crate::physics::{CavitySpec, Side as Mirror};
use crate::quadrature::{
    integrate_exponential_tail, integrate_oscillatory, sum_series, QuadratureConfig, SeriesConfig,
};

/// How multiple reflections between the mirrors are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ReflectionPath {
    /// One reflection off each mirror, D = I. Exact for a single mirror and
    /// accurate when the cavity is many wavelengths wide.
    #[default]
    SingleReflection,
    /// D^-1 by 2x2 inversion inside the integrand.
    Direct,
    /// Round trips summed term by term outside the integral.
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct GreensConfig {
    pub path: ReflectionPath,
    pub quadrature: QuadratureConfig,
    pub series: SeriesConfig,
}

impl GreensConfig {
    pub fn with_path(self, path: ReflectionPath) -> Self {
        GreensConfig { path, ..self }
    }
}

/// Trace value or its derivative with respect to the molecule position z.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Value,
    DerivativeZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyBranch {
    Imaginary,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensTraces {
    /// tr G, 1/m.
    pub tr_g: Complex64,
    /// tr curl G, 1/m^2.
    pub tr_curl_g: Complex64,
    pub branch: FrequencyBranch,
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Electric,
    Chiral,
}

/// One mirror seen from the molecule.
struct Side {
    mirror: Mirror,
    distance: f64,
    /// d(distance)/dz.
    sign: f64,
    own: Mat2,
    other: Mat2,
}

fn sides(z: f64, cavity: &CavitySpec) -> Vec<Side> {
    let ra = Mat2::mirror_a(&cavity.mirror_a);
    let rb = Mat2::mirror_b(&cavity.mirror_b);
    let mut out = Vec::with_capacity(2);
    if cavity.mirror_a.is_reflective() {
        out.push(Side {
            mirror: Mirror::A,
            distance: z,
            sign: 1.0,
            own: ra,
            other: rb,
        });
    }
    if cavity.mirror_b.is_reflective() {
        out.push(Side {
            mirror: Mirror::B,
            distance: cavity.width_a - z,
            sign: -1.0,
            own: rb,
            other: ra,
        });
    }
    out
}

fn check(z: f64, cavity: &CavitySpec, cfg: &GreensConfig) -> Result<()> {
    cavity.check_position(z)?;
    if cfg.path != ReflectionPath::SingleReflection && cavity.round_trip_bound() >= 1.0 {
        return Err(Error::domain(
            "multiple-reflection paths need a round-trip norm below 1",
        ));
    }
    Ok(())
}

/// (I - phase own other)^-1 own.
fn resolvent(side: &Side, phase: Complex64) -> Mat2 {
    let d = Mat2::IDENTITY - (side.own * side.other).scale(phase);
    d.inverse_unchecked() * side.own
}

/// Product-form amplitude at imaginary frequency: xi^2 times the electric
/// bracket, or xi^2 / c times the chiral one.
fn imaginary_amplitude(kind: Kind, m: &Mat2, kappa: f64, xi: f64) -> f64 {
    let xi2 = xi * xi;
    let k2c2 = (kappa * C) * (kappa * C);
    match kind {
        Kind::Electric => m.ss.re * xi2 + (xi2 - 2.0 * k2c2) * m.pp.re,
        Kind::Chiral => (m.sp.re * (xi2 - 2.0 * k2c2) - m.ps.re * xi2) / C,
    }
}

fn real_amplitude(kind: Kind, m: &Mat2, k: Complex64, q: f64) -> Complex64 {
    let r = k * k * (2.0 / (q * q));
    match kind {
        Kind::Electric => m.ss - (r - 1.0) * m.pp,
        Kind::Chiral => m.sp * (1.0 - r) - m.ps,
    }
}

/// int_lower^inf e^{-2 kappa d} g(kappa) dkappa, with the decay at the
/// lower limit factored out before quadrature.
fn decaying(g: impl Fn(f64) -> f64, lower: f64, distance: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let rate = 2.0 * distance;
    // e^-600 is far below any contribution that survives the sum over
    // frequencies; cutting here keeps the quadrature out of subnormals
    if rate * lower > 600.0 {
        return Ok(0.0);
    }
    let prefactor = (-rate * lower).exp();
    let body = integrate_exponential_tail(|u: f64| (-rate * u).exp() * g(lower + u), 0.0, rate, cfg)?;
    Ok(prefactor * body.value)
}

fn imaginary_side(kind: Kind, order: Order, xi: f64, side: &Side, a: f64, cfg: &GreensConfig) -> Result<f64> {
    let lower = xi / C;
    let factor = |kappa: f64| match order {
        Order::Value => 1.0,
        Order::DerivativeZ => -2.0 * kappa * side.sign,
    };
    let q = &cfg.quadrature;
    match cfg.path {
        ReflectionPath::SingleReflection => decaying(
            |k| imaginary_amplitude(kind, &side.own, k, xi) * factor(k),
            lower,
            side.distance,
            q,
        ),
        ReflectionPath::Direct => decaying(
            |k| {
                let m = resolvent(side, Complex64::new((-2.0 * k * a).exp(), 0.0));
                imaginary_amplitude(kind, &m, k, xi) * factor(k)
            },
            lower,
            side.distance,
            q,
        ),
        ReflectionPath::Series => {
            let trip = side.own * side.other;
            let sum = sum_series(
                |n| {
                    let m = trip.powu(n as u32) * side.own;
                    decaying(
                        |k| imaginary_amplitude(kind, &m, k, xi) * factor(k),
                        lower,
                        side.distance + n as f64 * a,
                        q,
                    )
                },
                1.0,
                &cfg.series,
            )?;
            Ok(sum.value)
        }
    }
}

fn imaginary_product(kind: Kind, order: Order, xi: f64, z: f64, cavity: &CavitySpec, cfg: &GreensConfig, only: Option<Mirror>) -> Result<f64> {
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::domain(format!("imaginary frequency must be >= 0, got {xi:e}")));
    }
    check(z, cavity, cfg)?;
    let mut total = 0.0;
    for side in sides(z, cavity).iter().filter(|s| only.is_none_or(|m| m == s.mirror)) {
        total += imaginary_side(kind, order, xi, side, cavity.width_a, cfg)?;
    }
    Ok(total / (4.0 * PI))
}

/// xi^2 tr G(z, z, i xi), 1/(m s^2). Finite at xi = 0.
pub fn xi2_trace_g_imaginary(xi: f64, z: f64, cavity: &CavitySpec, cfg: &GreensConfig, order: Order) -> Result<f64> {
    imaginary_product(Kind::Electric, order, xi, z, cavity, cfg, None)
}

/// The term of [`xi2_trace_g_imaginary`] carrying the decay from one mirror.
pub fn xi2_trace_g_imaginary_from(mirror: Mirror, xi: f64, z: f64, cavity: &CavitySpec, cfg: &GreensConfig, order: Order) -> Result<f64> {
    imaginary_product(Kind::Electric, order, xi, z, cavity, cfg, Some(mirror))
}

/// xi tr curl G(z, z, i xi), 1/(m^2 s). Finite at xi = 0.
pub fn xi_trace_curl_g_imaginary(xi: f64, z: f64, cavity: &CavitySpec, cfg: &GreensConfig, order: Order) -> Result<f64> {
    imaginary_product(Kind::Chiral, order, xi, z, cavity, cfg, None)
}

/// The term of [`xi_trace_curl_g_imaginary`] carrying the decay from one mirror.
pub fn xi_trace_curl_g_imaginary_from(mirror: Mirror, xi: f64, z: f64, cavity: &CavitySpec, cfg: &GreensConfig, order: Order) -> Result<f64> {
    imaginary_product(Kind::Chiral, order, xi, z, cavity, cfg, Some(mirror))
}

fn positive_xi(xi: f64) -> Result<()> {
    if xi > 0.0 {
        Ok(())
    } else {
        Err(Error::domain("the bare trace needs xi > 0; use the product form at xi = 0"))
    }
}

/// tr G(z, z, i xi), 1/m.
pub fn trace_g_imaginary(xi: f64, z: f64, cavity: &CavitySpec, cfg: &GreensConfig) -> Result<f64> {
    positive_xi(xi)?;
    Ok(xi2_trace_g_imaginary(xi, z, cavity, cfg, Order::Value)? / (xi * xi))
}

/// tr curl G(z, z, i xi), 1/m^2.
pub fn trace_curl_g_imaginary(xi: f64, z: f64, cavity: &CavitySpec, cfg: &GreensConfig) -> Result<f64> {
    positive_xi(xi)?;
    Ok(xi_trace_curl_g_imaginary(xi, z, cavity, cfg, Order::Value)? / xi)
}

pub fn traces_imaginary(xi: f64, z: f64, cavity: &CavitySpec, cfg: &GreensConfig) -> Result<GreensTraces> {
    Ok(GreensTraces {
        tr_g: trace_g_imaginary(xi, z, cavity, cfg)?.into(),
        tr_curl_g: trace_curl_g_imaginary(xi, z, cavity, cfg)?.into(),
        branch: FrequencyBranch::Imaginary,
    })
}

/// Traveling part over k in [0, q] minus i times the evanescent part over
/// k = i kappa.
fn split_contour(g: impl Fn(Complex64) -> Complex64, q: f64, distance: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    let rate = 2.0 * distance;
    let traveling = integrate_oscillatory(|k: f64| g(Complex64::new(k, 0.0)), rate, 0.0, q, cfg)?;
    let re = integrate_exponential_tail(|kappa: f64| (-rate * kappa).exp() * g(Complex64::new(0.0, kappa)).re, 0.0, rate, cfg)?;
    let im = integrate_exponential_tail(|kappa: f64| (-rate * kappa).exp() * g(Complex64::new(0.0, kappa)).im, 0.0, rate, cfg)?;
    Ok(traveling.value - Complex64::i() * Complex64::new(re.value, im.value))
}

fn real_side(kind: Kind, order: Order, q: f64, side: &Side, a: f64, cfg: &GreensConfig) -> Result<Complex64> {
    let factor = |k: Complex64| match order {
        Order::Value => Complex64::new(1.0, 0.0),
        Order::DerivativeZ => Complex64::i() * k * (2.0 * side.sign),
    };
    let qc = &cfg.quadrature;
    match cfg.path {
        ReflectionPath::SingleReflection => split_contour(
            |k| real_amplitude(kind, &side.own, k, q) * factor(k),
            q,
            side.distance,
            qc,
        ),
        ReflectionPath::Direct => split_contour(
            |k| {
                let m = resolvent(side, (Complex64::i() * k * (2.0 * a)).exp());
                real_amplitude(kind, &m, k, q) * factor(k)
            },
            q,
            side.distance,
            qc,
        ),
        ReflectionPath::Series => {
            let trip = side.own * side.other;
            let sum = sum_series(
                |n| {
                    let m = trip.powu(n as u32) * side.own;
                    split_contour(
                        |k| real_amplitude(kind, &m, k, q) * factor(k),
                        q,
                        side.distance + n as f64 * a,
                        qc,
                    )
                },
                1.0,
                &cfg.series,
            )?;
            Ok(sum.value)
        }
    }
}

fn real_contour(kind: Kind, order: Order, omega: f64, z: f64, cavity: &CavitySpec, cfg: &GreensConfig) -> Result<Complex64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::domain(format!("real frequency must be > 0, got {omega:e}")));
    }
    check(z, cavity, cfg)?;
    let q = omega / C;
    let mut total = Complex64::new(0.0, 0.0);
    for side in sides(z, cavity) {
        total += real_side(kind, order, q, &side, cavity.width_a, cfg)?;
    }
    Ok(total)
}

/// tr G(z, z, omega), 1/m. Its real part enters the resonant potential.
pub fn trace_g_real(omega: f64, z: f64, cavity: &CavitySpec, cfg: &GreensConfig, order: Order) -> Result<Complex64> {
    let t = real_contour(Kind::Electric, order, omega, z, cavity, cfg)?;
    Ok(Complex64::i() * t / (4.0 * PI))
}

/// tr curl G(z, z, omega), 1/m^2.
pub fn trace_curl_g_real(omega: f64, z: f64, cavity: &CavitySpec, cfg: &GreensConfig, order: Order) -> Result<Complex64> {
    let t = real_contour(Kind::Chiral, order, omega, z, cavity, cfg)?;
    Ok(t * (omega / C / (4.0 * PI)))
}

pub fn traces_real(omega: f64, z: f64, cavity: &CavitySpec, cfg: &GreensConfig) -> Result<GreensTraces> {
    Ok(GreensTraces {
        tr_g: trace_g_real(omega, z, cavity, cfg, Order::Value)?,
        tr_curl_g: trace_curl_g_real(omega, z, cavity, cfg, Order::Value)?,
        branch: FrequencyBranch::Real,
    })
}
