use num_complex::Complex64;

use super::matrix::Mat2;
use crate::error::{Error, Result};

/// The inverse of D = I - phase R R' together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityRoundTrip {
    pub d_inverse: Mat2,
    /// Geometric-series terms summed; 0 for direct inversion.
    pub series_terms: usize,
}

impl CavityRoundTrip {
    /// Direct 2x2 inversion of D.
    pub fn direct(phase: Complex64, r_a: &Mat2, r_b: &Mat2) -> Result<CavityRoundTrip> {
        let d = Mat2::IDENTITY - (*r_a * *r_b).scale(phase);
        Ok(CavityRoundTrip {
            d_inverse: d.inverse()?,
            series_terms: 0,
        })
    }

    /// Sum of (phase R R')^n until the next term is below `tol` relative.
    pub fn series(phase: Complex64, r_a: &Mat2, r_b: &Mat2, tol: f64, max_terms: usize) -> Result<CavityRoundTrip> {
        let step = (*r_a * *r_b).scale(phase);
        if step.spectral_radius() >= 1.0 {
            return Err(Error::domain("round-trip series diverges: spectral radius >= 1"));
        }
        let mut term = Mat2::IDENTITY;
        let mut sum = Mat2::IDENTITY;
        for n in 1..max_terms {
            term = term * step;
            sum = sum + term;
            if term.max_abs() <= tol * sum.max_abs() {
                return Ok(CavityRoundTrip {
                    d_inverse: sum,
                    series_terms: n + 1,
                });
            }
        }
        Err(Error::Series {
            partial: sum.max_abs(),
            terms: max_terms,
        })
    }
}
