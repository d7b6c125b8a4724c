//! CODATA 2018 constants in SI units.

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permeability, N/A^2.
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Speed of light, m/s.
pub const C: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const KB: f64 = 1.380_649e-23;
/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 1.0 / (MU0 * C * C);
/// Avogadro constant, 1/mol.
pub const AVOGADRO: f64 = 6.022_140_76e23;

/// The constants the potential formulas are written in.
///
/// Values are fixed; there is no way to construct one with other numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mu0: f64,
    pub c: f64,
    pub kb: f64,
}

impl PhysicalConstants {
    pub const SI: PhysicalConstants = PhysicalConstants {
        hbar: HBAR,
        mu0: MU0,
        c: C,
        kb: KB,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}
