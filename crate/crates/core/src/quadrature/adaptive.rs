use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Estimate, QuadValue, QuadratureConfig};
use crate::error::{Error, Result};

const EPSILON: f64 = f64::EPSILON;

// 21-point Kronrod extension of the 10-point Gauss rule.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One application of a basic rule on [a, b].
#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel<T> {
    pub a: f64,
    pub b: f64,
    pub value: T,
    pub error: f64,
    /// Estimate of the integral of |f| over the panel.
    pub abs: f64,
}

struct Ranked<T>(Panel<T>);

impl<T> PartialEq for Ranked<T> {
    fn eq(&self, other: &Self) -> bool {
        self.0.error == other.0.error
    }
}
impl<T> Eq for Ranked<T> {}
impl<T> PartialOrd for Ranked<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Ranked<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.error.total_cmp(&other.0.error)
    }
}

fn gauss_kronrod_21<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> Panel<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_k = f_center * WGK[10];
    let mut res_g = T::zero();
    let mut res_abs = WGK[10] * f_center.norm();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k = res_k + (f1 + f2) * WGK[j];
        res_abs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (f_center - mean).norm();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let scale = half.abs();
    let result = res_k * half;
    res_abs *= scale;
    res_asc *= scale;
    let mut err = ((res_k - res_g) * half).norm();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * EPSILON) {
        err = err.max(50.0 * EPSILON * res_abs);
    }
    Panel {
        a,
        b,
        value: result,
        error: err,
        abs: res_abs,
    }
}

/// Global adaptive bisection driven by an arbitrary panel rule.
pub(crate) fn adaptive_driver<T, R>(rule: R, a: f64, b: f64, cfg: &QuadratureConfig, evals_per_panel: usize) -> Result<Estimate<T>>
where
    T: QuadValue,
    R: Fn(f64, f64) -> Panel<T>,
{
    let first = rule(a, b);
    let mut evaluations = evals_per_panel;
    let mut value = first.value;
    let mut error = first.error;
    let mut abs = first.abs;
    let mut heap = BinaryHeap::new();
    heap.push(Ranked(first));
    let mut subdivisions = 1;
    loop {
        let floor = (100.0 * EPSILON * abs).max(f64::MIN_POSITIVE / EPSILON);
        if error <= cfg.tolerance(value.norm()) || error <= floor {
            break;
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::Quadrature {
                estimate: value.scalar(),
                error,
                subdivisions,
            });
        }
        let Some(Ranked(worst)) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Interval cannot be split further in floating point.
            return Err(Error::Quadrature {
                estimate: value.scalar(),
                error,
                subdivisions,
            });
        }
        let left = rule(worst.a, mid);
        let right = rule(mid, worst.b);
        evaluations += 2 * evals_per_panel;
        subdivisions += 1;
        value = value - worst.value + left.value + right.value;
        error = error - worst.error + left.error + right.error;
        abs = abs - worst.abs + left.abs + right.abs;
        heap.push(Ranked(left));
        heap.push(Ranked(right));
        if subdivisions % 64 == 0 {
            // Re-sum to shed accumulated cancellation in the running totals.
            value = heap.iter().fold(T::zero(), |acc, p| acc + p.0.value);
            error = heap.iter().map(|p| p.0.error).sum();
            abs = heap.iter().map(|p| p.0.abs).sum();
        }
    }
    let value = heap.iter().fold(T::zero(), |acc, p| acc + p.0.value);
    let error = heap.iter().map(|p| p.0.error).sum();
    Ok(Estimate {
        value,
        error,
        evaluations,
    })
}

/// Adaptive 21-point Gauss-Kronrod quadrature on a finite interval.
pub fn integrate_finite<T, F>(f: F, lower: f64, upper: f64, cfg: &QuadratureConfig) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if !(lower.is_finite() && upper.is_finite()) {
        return Err(Error::domain("finite quadrature needs finite limits"));
    }
    if lower == upper {
        return Ok(Estimate {
            value: T::zero(),
            error: 0.0,
            evaluations: 0,
        });
    }
    adaptive_driver(|a, b| gauss_kronrod_21(&f, a, b), lower, upper, cfg, 21)
}

/// Integral over [lower, infinity) through x = lower + scale t / (1 - t).
///
/// `scale` should be the length over which the integrand decays; the mapped
/// integrand then varies on the unit interval whatever the physical scale.
pub fn integrate_semi_infinite<T, F>(f: F, lower: f64, scale: f64, cfg: &QuadratureConfig) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain(format!("decay scale must be > 0, got {scale:e}")));
    }
    let mapped = |t: f64| {
        let u = 1.0 - t;
        f(lower + scale * t / u) * (scale / (u * u))
    };
    adaptive_driver(|a, b| gauss_kronrod_21(&mapped, a, b), 0.0, 1.0, cfg, 21)
}

/// Adaptive quadrature on [lower, upper], where `upper` may be +infinity.
///
/// An infinite upper limit uses [`integrate_semi_infinite`] with unit scale;
/// call that directly when the decay length is known.
pub fn integrate_adaptive<T, F>(f: F, lower: f64, upper: f64, cfg: &QuadratureConfig) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if upper == f64::INFINITY {
        integrate_semi_infinite(f, lower, 1.0, cfg)
    } else {
        integrate_finite(f, lower, upper, cfg)
    }
}

/// Integral over [lower, infinity) of an integrand whose envelope decays at
/// least as fast as exp(-rate (x - lower)).
///
/// The interval is cut where the exponential weight has dropped to 1e-18 of
/// its value at `lower`; the remainder is added as the analytic tail
/// f(cut) / rate of a pure exponential.
pub fn integrate_exponential_tail<T, F>(f: F, lower: f64, rate: f64, cfg: &QuadratureConfig) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::domain(format!("decay rate must be > 0, got {rate:e}")));
    }
    let cut = lower + 18.0 * std::f64::consts::LN_10 / rate;
    let body = integrate_finite(&f, lower, cut, cfg)?;
    let tail = f(cut) * (1.0 / rate);
    Ok(Estimate {
        value: body.value + tail,
        error: body.error + tail.norm(),
        evaluations: body.evaluations + 1,
    })
}
