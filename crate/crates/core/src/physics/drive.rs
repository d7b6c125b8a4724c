use serde::{Deserialize, Serialize};

use super::constants::{HBAR, KB};
use super::molecule::MoleculeSpec;
use crate::error::{Error, Result};

// Gaussian-unit conversion factors.
const STATC_CM_PER_C_M: f64 = 2.997_924_58e11;
const ERG_S_CM2_PER_W_M2: f64 = 1.0e3;
const C_CGS: f64 = 2.997_924_58e10;
const HBAR_CGS: f64 = HBAR * 1.0e7;

/// Rabi frequency Omega = 2|d01| (2 pi I / c)^{1/2} / hbar.
///
/// The expression is written in Gaussian units, so the SI inputs are
/// converted to statC cm and erg/(s cm^2) before evaluation. The result is
/// in rad/s in either system.
pub fn rabi_from_intensity(d01: f64, intensity: f64) -> Result<f64> {
    if !(d01 >= 0.0) || !(intensity >= 0.0) {
        return Err(Error::domain(format!(
            "rabi_from_intensity needs d01 >= 0 and intensity >= 0, got {d01:e}, {intensity:e}"
        )));
    }
    let d_cgs = d01 * STATC_CM_PER_C_M;
    let i_cgs = intensity * ERG_S_CM2_PER_W_M2;
    Ok(2.0 * d_cgs * (2.0 * std::f64::consts::PI * i_cgs / C_CGS).sqrt() / HBAR_CGS)
}

/// Instantaneous two-level populations (p0, p1) under a constant drive.
pub fn populations(omega_rabi: f64, detuning: f64, t: f64) -> (f64, f64) {
    let w2 = detuning * detuning + omega_rabi * omega_rabi;
    if w2 == 0.0 {
        return (1.0, 0.0);
    }
    let s = (0.5 * w2.sqrt() * t).sin();
    let p1 = omega_rabi * omega_rabi / w2 * s * s;
    (1.0 - p1, p1)
}

/// Cycle-averaged populations; p1 = Omega^2 / (2 (Delta^2 + Omega^2)).
pub fn time_averaged_populations(omega_rabi: f64, detuning: f64) -> (f64, f64) {
    let w2 = detuning * detuning + omega_rabi * omega_rabi;
    if w2 == 0.0 {
        return (1.0, 0.0);
    }
    let p1 = 0.5 * omega_rabi * omega_rabi / w2;
    (1.0 - p1, p1)
}

/// Mean thermal photon number 1 / (exp(hbar omega / kB T) - 1); zero at T = 0.
pub fn thermal_photon_number(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::domain(format!("photon frequency must be > 0, got {omega:e}")));
    }
    if !(temperature >= 0.0) {
        return Err(Error::domain(format!(
            "temperature must be >= 0, got {temperature:e}"
        )));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = HBAR * omega / (KB * temperature);
    Ok(1.0 / x.exp_m1())
}

/// Where the Rabi frequency comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RabiSource {
    /// Laser intensity, W/m^2.
    Intensity(f64),
    /// Rabi frequency, rad/s.
    Rabi(f64),
}

/// Laser drive and ambient temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    pub source: RabiSource,
    /// Delta = omega_L - omega10, rad/s.
    pub detuning: f64,
    /// K; zero selects the zero-temperature potentials.
    pub temperature: f64,
}

impl DriveSpec {
    /// No laser: the molecule stays in its ground state.
    pub fn undriven(temperature: f64) -> Self {
        DriveSpec {
            source: RabiSource::Rabi(0.0),
            detuning: 0.0,
            temperature,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.source {
            RabiSource::Intensity(i) if !(i >= 0.0 && i.is_finite()) => {
                return Err(Error::invalid("drive.intensity", "must be finite and >= 0"))
            }
            RabiSource::Rabi(r) if !(r >= 0.0 && r.is_finite()) => {
                return Err(Error::invalid("drive.rabi", "must be finite and >= 0"))
            }
            _ => {}
        }
        if !self.detuning.is_finite() {
            return Err(Error::invalid("drive.detuning", "must be finite"));
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(Error::invalid("drive.temperature", "must be finite and >= 0"));
        }
        Ok(())
    }

    pub fn rabi_frequency(&self, molecule: &MoleculeSpec) -> Result<f64> {
        match self.source {
            RabiSource::Intensity(i) => rabi_from_intensity(molecule.dipole_d01, i),
            RabiSource::Rabi(r) => Ok(r),
        }
    }

    pub fn averaged_populations(&self, molecule: &MoleculeSpec) -> Result<(f64, f64)> {
        Ok(time_averaged_populations(
            self.rabi_frequency(molecule)?,
            self.detuning,
        ))
    }
}
