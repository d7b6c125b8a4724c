use crate::physics::constants::HBAR;
use crate::physics::MoleculeSpec;

/// Isotropic polarizability and chiral response of a two-level molecule at
/// imaginary frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseFunctions {
    omega10: f64,
    d2: f64,
    r01: f64,
}

impl ResponseFunctions {
    pub fn new(molecule: &MoleculeSpec) -> Self {
        ResponseFunctions {
            omega10: molecule.omega10,
            d2: molecule.dipole_d01 * molecule.dipole_d01,
            r01: molecule.rotatory_r01(),
        }
    }

    /// alpha(i xi), C^2 m^2 / J.
    pub fn alpha(&self, xi: f64) -> f64 {
        2.0 / (3.0 * HBAR) * self.omega10 * self.d2 / (self.omega10 * self.omega10 + xi * xi)
    }

    /// Gamma(i xi), C^2 m^3 / (J s). Odd in R01, zero at xi = 0.
    pub fn gamma(&self, xi: f64) -> f64 {
        -2.0 / (3.0 * HBAR) * xi * self.r01 / (self.omega10 * self.omega10 + xi * xi)
    }
}
