use serde::{Deserialize, Serialize};

use super::QuadValue;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SeriesConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub min_terms: usize,
    pub max_terms: usize,
    /// Number of consecutive negligible terms required before stopping.
    pub tail_check_window: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            min_terms: 3,
            max_terms: 100_000,
            tail_check_window: 3,
        }
    }
}

impl SeriesConfig {
    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        SeriesConfig { rel_tol, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum<T> {
    /// Partial sum plus the estimated tail.
    pub value: T,
    pub error: f64,
    pub terms: usize,
    /// Estimated remainder beyond the last evaluated term.
    pub tail: T,
}

/// Sums `weight_j0 * t(0) + t(1) + t(2) + ...`.
///
/// Stops once `tail_check_window` consecutive terms are negligible against
/// the running sum, then adds a tail estimate: zero for alternating terms,
/// geometric when the last ratio is below 0.95, otherwise a power law
/// C (j + s)^-p fitted to three spaced terms.
pub fn sum_series<T, F>(mut term: F, weight_j0: f64, cfg: &SeriesConfig) -> Result<SeriesSum<T>>
where
    T: QuadValue,
    F: FnMut(usize) -> Result<T>,
{
    if cfg.tail_check_window < 2 {
        return Err(Error::invalid("tail_check_window", "must be at least 2"));
    }
    let mut sum = T::zero();
    let mut terms: Vec<T> = Vec::new();
    let mut quiet = 0usize;
    for j in 0..cfg.max_terms {
        let t = term(j)?;
        let weighted = if j == 0 { t * weight_j0 } else { t };
        if !weighted.norm().is_finite() {
            return Err(Error::domain(format!("series term {j} is not finite")));
        }
        sum = sum + weighted;
        terms.push(weighted);
        let tol = cfg.abs_tol.max(cfg.rel_tol * sum.norm());
        if weighted.norm() <= tol {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if j + 1 >= cfg.min_terms && quiet >= cfg.tail_check_window {
            let tail = tail_estimate(&terms, cfg.tail_check_window)?;
            let last = terms[terms.len() - 1].norm();
            return Ok(SeriesSum {
                value: sum + tail,
                error: last + 0.01 * tail.norm(),
                terms: j + 1,
                tail,
            });
        }
    }
    Err(Error::Series {
        partial: sum.scalar(),
        terms: cfg.max_terms,
    })
}

fn tail_estimate<T: QuadValue>(terms: &[T], window: usize) -> Result<T> {
    let n = terms.len();
    let last = terms[n - 1];
    let recent = &terms[n.saturating_sub(window)..];
    let alternating = recent.windows(2).any(|w| w[0].scalar() * w[1].scalar() < 0.0);
    if last.norm() == 0.0 || alternating {
        return Ok(T::zero());
    }
    let prev = terms[n - 2].norm();
    if prev == 0.0 {
        return Ok(T::zero());
    }
    let ratio = last.norm() / prev;
    if ratio < 0.95 {
        return Ok(last * (ratio / (1.0 - ratio)));
    }
    // Power law through three equally spaced terms.
    let step = (n - 1) / 2;
    if step == 0 {
        return Ok(T::zero());
    }
    let (j1, j2, j3) = ((n - 1 - 2 * step) as f64, (n - 1 - step) as f64, (n - 1) as f64);
    let (a1, a2, a3) = (
        terms[n - 1 - 2 * step].norm(),
        terms[n - 1 - step].norm(),
        last.norm(),
    );
    if !(a1 > a2 && a2 > a3) {
        return Ok(T::zero());
    }
    let target = (a1 / a2).ln() / (a2 / a3).ln();
    let shape = |s: f64| ((j2 + s) / (j1 + s)).ln() / ((j3 + s) / (j2 + s)).ln();
    // shape decreases from its value at s = -j1 toward 1 as s grows
    let mut lo = -j1 + 1e-9;
    let mut hi = 1e9;
    if target <= shape(hi) {
        // Equal log-ratios over equal spans: geometric.
        let rho = (a3 / a2).powf(1.0 / step as f64);
        return Ok(last * (rho / (1.0 - rho)));
    }
    if target >= shape(lo) {
        return Ok(T::zero());
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if shape(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    let p = (a2 / a3).ln() / ((j3 + s) / (j2 + s)).ln();
    if p <= 1.0 {
        return Err(Error::Series {
            partial: terms.iter().fold(T::zero(), |acc, t| acc + *t).scalar(),
            terms: n,
        });
    }
    let c = a3 * (j3 + s).powf(p);
    let tail_norm = c * (j3 + 0.5 + s).powf(1.0 - p) / (p - 1.0);
    Ok(last * (tail_norm / a3))
}
