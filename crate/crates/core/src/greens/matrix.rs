use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::physics::MirrorSpec;

/// 2x2 complex matrix in the (s, p) polarization basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub ss: Complex64,
    pub sp: Complex64,
    pub ps: Complex64,
    pub pp: Complex64,
}

/// Reflection matrices are real in this model but share the complex type
/// so they compose directly with round-trip phases.
pub type ReflectionMatrix2x2 = Mat2;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 {
        ss: Complex64::new(0.0, 0.0),
        sp: Complex64::new(0.0, 0.0),
        ps: Complex64::new(0.0, 0.0),
        pp: Complex64::new(0.0, 0.0),
    };

    pub const IDENTITY: Mat2 = Mat2 {
        ss: Complex64::new(1.0, 0.0),
        sp: Complex64::new(0.0, 0.0),
        ps: Complex64::new(0.0, 0.0),
        pp: Complex64::new(1.0, 0.0),
    };

    pub fn real(ss: f64, sp: f64, ps: f64, pp: f64) -> Mat2 {
        Mat2 {
            ss: c(ss),
            sp: c(sp),
            ps: c(ps),
            pp: c(pp),
        }
    }

    /// Mirror at z = 0: [[-r_e, r_c], [-r_c, r_e]].
    pub fn mirror_a(m: &MirrorSpec) -> Mat2 {
        Mat2::real(-m.r_e, m.r_c, -m.r_c, m.r_e)
    }

    /// Mirror at z = a: [[-r_e, -r_c], [r_c, r_e]].
    pub fn mirror_b(m: &MirrorSpec) -> Mat2 {
        Mat2::real(-m.r_e, -m.r_c, m.r_c, m.r_e)
    }

    pub fn scale(self, k: Complex64) -> Mat2 {
        Mat2 {
            ss: self.ss * k,
            sp: self.sp * k,
            ps: self.ps * k,
            pp: self.pp * k,
        }
    }

    pub fn det(&self) -> Complex64 {
        self.ss * self.pp - self.sp * self.ps
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        let size = self.max_abs();
        if det.norm() <= 1e-14 * size * size {
            return Err(Error::domain("singular 2x2 matrix"));
        }
        let inv = det.inv();
        Ok(Mat2 {
            ss: self.pp * inv,
            sp: -self.sp * inv,
            ps: -self.ps * inv,
            pp: self.ss * inv,
        })
    }

    /// Inverse without a singularity check; callers guarantee det != 0.
    pub(crate) fn inverse_unchecked(&self) -> Mat2 {
        let inv = self.det().inv();
        Mat2 {
            ss: self.pp * inv,
            sp: -self.sp * inv,
            ps: -self.ps * inv,
            pp: self.ss * inv,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.ss
            .norm()
            .max(self.sp.norm())
            .max(self.ps.norm())
            .max(self.pp.norm())
    }

    /// Spectral radius from the characteristic polynomial.
    pub fn spectral_radius(&self) -> f64 {
        let tr = self.ss + self.pp;
        let disc = (tr * tr - self.det() * 4.0).sqrt();
        ((tr + disc) * 0.5).norm().max(((tr - disc) * 0.5).norm())
    }

    pub fn powu(&self, n: u32) -> Mat2 {
        let mut result = Mat2::IDENTITY;
        let mut base = *self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            n >>= 1;
        }
        result
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2 {
            ss: self.ss + o.ss,
            sp: self.sp + o.sp,
            ps: self.ps + o.ps,
            pp: self.pp + o.pp,
        }
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2 {
            ss: self.ss - o.ss,
            sp: self.sp - o.sp,
            ps: self.ps - o.ps,
            pp: self.pp - o.pp,
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2 {
            ss: self.ss * o.ss + self.sp * o.ps,
            sp: self.ss * o.sp + self.sp * o.pp,
            ps: self.ps * o.ss + self.pp * o.ps,
            pp: self.ps * o.sp + self.pp * o.pp,
        }
    }
}
