use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which wall of the cavity. Mirror A sits at z = 0, mirror B at z = a.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// A chiral mirror with frequency- and angle-independent reflection.
///
/// Mirror A reflects with `[[-r_e, r_c], [-r_c, r_e]]` in the (s, p) basis,
/// mirror B with `[[-r_e, -r_c], [r_c, r_e]]`. Equal positive `r_c` on both
/// sides therefore describes two mirrors of opposite chirality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MirrorSpec {
    pub r_e: f64,
    pub r_c: f64,
}

impl MirrorSpec {
    pub fn new(r_e: f64, r_c: f64) -> Result<Self> {
        let m = MirrorSpec { r_e, r_c };
        m.validate("mirror")?;
        Ok(m)
    }

    pub const NONE: MirrorSpec = MirrorSpec { r_e: 0.0, r_c: 0.0 };

    pub fn validate(&self, field: &str) -> Result<()> {
        if !(0.0..=1.0).contains(&self.r_e) {
            return Err(Error::invalid(format!("{field}.r_e"), "must lie in [0, 1]"));
        }
        if !(-1.0..=1.0).contains(&self.r_c) {
            return Err(Error::invalid(format!("{field}.r_c"), "must lie in [-1, 1]"));
        }
        if self.r_e * self.r_e + self.r_c * self.r_c > 1.0 + 1e-12 {
            return Err(Error::invalid(
                field.to_string(),
                "r_e^2 + r_c^2 must not exceed 1",
            ));
        }
        Ok(())
    }

    /// Largest singular value of the reflection matrix, |r_e| + |r_c|.
    pub fn spectral_norm(&self) -> f64 {
        self.r_e.abs() + self.r_c.abs()
    }

    pub fn is_reflective(&self) -> bool {
        self.r_e != 0.0 || self.r_c != 0.0
    }

    pub fn flipped_chirality(&self) -> Self {
        MirrorSpec {
            r_e: self.r_e,
            r_c: -self.r_c,
        }
    }
}

/// Two planar mirrors separated by `width_a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySpec {
    /// Mirror separation a, m.
    pub width_a: f64,
    pub mirror_a: MirrorSpec,
    pub mirror_b: MirrorSpec,
}

impl CavitySpec {
    pub fn new(width_a: f64, mirror_a: MirrorSpec, mirror_b: MirrorSpec) -> Result<Self> {
        let c = CavitySpec {
            width_a,
            mirror_a,
            mirror_b,
        };
        c.validate()?;
        Ok(c)
    }

    /// Both mirrors share (r_e, r_c): opposite chirality in the A/B convention.
    pub fn symmetric(width_a: f64, r_e: f64, r_c: f64) -> Result<Self> {
        let m = MirrorSpec::new(r_e, r_c)?;
        Self::new(width_a, m, m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width_a > 0.0 && self.width_a.is_finite()) {
            return Err(Error::invalid("width_a", "must be finite and > 0"));
        }
        self.mirror_a.validate("mirror_a")?;
        self.mirror_b.validate("mirror_b")
    }

    /// Checks 0 < z < a.
    pub fn check_position(&self, z: f64) -> Result<()> {
        if z > 0.0 && z < self.width_a {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "position z = {z:e} m outside the open cavity (0, {:e})",
                self.width_a
            )))
        }
    }

    /// Distance from the given mirror.
    pub fn distance_from(&self, side: Side, z: f64) -> f64 {
        match side {
            Side::A => z,
            Side::B => self.width_a - z,
        }
    }

    /// Position at distance `d` from the given mirror.
    pub fn position_at(&self, side: Side, d: f64) -> f64 {
        match side {
            Side::A => d,
            Side::B => self.width_a - d,
        }
    }

    /// The same cavity with every chirality coefficient negated.
    pub fn flipped_chirality(&self) -> Self {
        CavitySpec {
            width_a: self.width_a,
            mirror_a: self.mirror_a.flipped_chirality(),
            mirror_b: self.mirror_b.flipped_chirality(),
        }
    }

    /// Product of the mirrors' spectral norms; the round-trip series
    /// converges at every frequency when this is below one.
    pub fn round_trip_bound(&self) -> f64 {
        self.mirror_a.spectral_norm() * self.mirror_b.spectral_norm()
    }
}
