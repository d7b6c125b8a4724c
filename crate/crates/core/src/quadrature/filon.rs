use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::adaptive::{adaptive_driver, Panel};
use super::bessel::spherical_bessel_j;
use super::legendre::{gauss_legendre, legendre_values};
use super::{integrate_finite, Estimate, OscillatoryMethod, QuadValue, QuadratureConfig};
use crate::error::{Error, Result};

const HIGH: usize = 24;
const LOW: usize = 12;
const MAX_HALF_PERIODS: f64 = 1.0e6;

/// Gauss-Legendre nodes, weights and P_k(node) for k < order.
struct Basis {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    legendre: Vec<Vec<f64>>,
}

impl Basis {
    fn new(order: usize) -> Basis {
        let (nodes, weights) = gauss_legendre(order);
        let legendre = nodes
            .iter()
            .map(|&t| {
                let mut p = vec![0.0; order];
                legendre_values(t, &mut p);
                p
            })
            .collect();
        Basis {
            nodes,
            weights,
            legendre,
        }
    }
}

fn bases() -> &'static (Basis, Basis) {
    static CELL: OnceLock<(Basis, Basis)> = OnceLock::new();
    CELL.get_or_init(|| (Basis::new(HIGH), Basis::new(LOW)))
}

/// Filon estimate on one panel from amplitude samples at the basis nodes.
fn filon_sum(basis: &Basis, samples: &[Complex64], mu: f64) -> Complex64 {
    let order = basis.nodes.len();
    let mut j = [0.0; HIGH];
    spherical_bessel_j(mu, &mut j[..order]);
    let mut total = Complex64::new(0.0, 0.0);
    let mut i_pow = Complex64::new(1.0, 0.0);
    for k in 0..order {
        let mut coeff = Complex64::new(0.0, 0.0);
        for (i, s) in samples.iter().enumerate() {
            coeff += s * (basis.weights[i] * basis.legendre[i][k]);
        }
        // (2k+1)/2 * 2 i^k j_k(mu)
        total += coeff * i_pow * ((2 * k + 1) as f64 * j[k]);
        i_pow *= Complex64::i();
    }
    total
}

fn filon_panel<F: Fn(f64) -> Complex64>(g: &F, omega: f64, a: f64, b: f64) -> Panel<Complex64> {
    let (high, low) = bases();
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mu = omega * half;
    let samples_high: Vec<Complex64> = high.nodes.iter().map(|&t| g(center + half * t)).collect();
    let samples_low: Vec<Complex64> = low.nodes.iter().map(|&t| g(center + half * t)).collect();
    let phase = Complex64::from_polar(half, omega * center);
    let i_high = phase * filon_sum(high, &samples_high, mu);
    let i_low = phase * filon_sum(low, &samples_low, mu);
    let abs = half.abs()
        * samples_high
            .iter()
            .zip(&high.weights)
            .map(|(s, w)| w * s.norm())
            .sum::<f64>();
    Panel {
        a,
        b,
        value: i_high,
        error: (i_high - i_low).norm(),
        abs,
    }
}

/// Integral of g(x) exp(i omega x) over [lower, upper].
///
/// The amplitude `g` should be smooth on the scale of the panels; the
/// oscillation itself is integrated exactly by the Filon rule.
pub fn integrate_oscillatory<F>(g: F, omega: f64, lower: f64, upper: f64, cfg: &QuadratureConfig) -> Result<Estimate<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    if !(lower.is_finite() && upper.is_finite() && omega.is_finite()) {
        return Err(Error::domain("oscillatory quadrature needs finite limits and frequency"));
    }
    if lower == upper {
        return Ok(Estimate {
            value: Complex64::zero(),
            error: 0.0,
            evaluations: 0,
        });
    }
    match cfg.oscillatory_method {
        OscillatoryMethod::Filon => adaptive_driver(
            |a, b| filon_panel(&g, omega, a, b),
            lower,
            upper,
            cfg,
            HIGH + LOW,
        ),
        OscillatoryMethod::PanelPerHalfPeriod => half_periods(&g, omega, lower, upper, cfg),
    }
}

fn half_periods<F>(g: &F, omega: f64, lower: f64, upper: f64, cfg: &QuadratureConfig) -> Result<Estimate<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    let integrand = |x: f64| g(x) * Complex64::from_polar(1.0, omega * x);
    let count = ((upper - lower).abs() * omega.abs() / PI).ceil();
    if count > MAX_HALF_PERIODS {
        return Err(Error::domain(format!(
            "{count:e} half periods exceed the panel budget"
        )));
    }
    let count = count.max(1.0) as usize;
    let width = (upper - lower) / count as f64;
    let mut total = Estimate {
        value: Complex64::zero(),
        error: 0.0,
        evaluations: 0,
    };
    for i in 0..count {
        let a = lower + width * i as f64;
        let b = if i + 1 == count { upper } else { a + width };
        total = total.combine(integrate_finite(&integrand, a, b, cfg)?);
    }
    Ok(total)
}
