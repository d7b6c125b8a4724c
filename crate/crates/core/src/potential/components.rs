use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::response::ResponseFunctions;
use crate::error::{Error, Result};
use crate::greens::{
    trace_curl_g_real, trace_g_real, xi2_trace_g_imaginary_from, xi_trace_curl_g_imaginary_from,
    GreensConfig, Order,
};
use crate::physics::constants::{C, HBAR, KB, MU0};
use crate::physics::{thermal_photon_number, CavitySpec, MoleculeSpec, Side};
use crate::quadrature::{integrate_finite, sum_series, QuadratureConfig, SeriesConfig};

/// Below this mean photon number the thermal formulas are replaced by the
/// zero-temperature ones.
pub const NEGLIGIBLE_PHOTON_NUMBER: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PotentialConfig {
    pub greens: GreensConfig,
    /// Quadrature over imaginary frequency.
    pub frequency: QuadratureConfig,
    /// Matsubara summation.
    pub matsubara: SeriesConfig,
}

impl Default for PotentialConfig {
    fn default() -> Self {
        PotentialConfig {
            greens: GreensConfig::default(),
            frequency: QuadratureConfig::default(),
            matsubara: SeriesConfig {
                rel_tol: 1e-12,
                max_terms: 2_000_000,
                ..SeriesConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum State {
    Ground,
    Excited,
}

/// A potential component split into its virtual-photon (imaginary
/// frequency) and real-photon (resonant) parts, J.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Split {
    pub nonresonant: f64,
    pub resonant: f64,
}

impl Split {
    pub fn total(&self) -> f64 {
        self.nonresonant + self.resonant
    }
}

/// Ground- and excited-state potentials at one position, or their
/// z-derivatives when computed with [`Order::DerivativeZ`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialComponents {
    pub z: f64,
    pub thermal: bool,
    pub temperature: f64,
    pub u0e: Split,
    pub u1e: Split,
    pub u0c: Split,
    pub u1c: Split,
}

impl PotentialComponents {
    pub fn u0(&self) -> f64 {
        self.u0e.total() + self.u0c.total()
    }

    pub fn u1(&self) -> f64 {
        self.u1e.total() + self.u1c.total()
    }

    pub fn state(&self, state: State) -> f64 {
        match state {
            State::Ground => self.u0(),
            State::Excited => self.u1(),
        }
    }

    /// p0 U0 + p1 U1.
    pub fn weighted(&self, p0: f64, p1: f64) -> f64 {
        p0 * self.u0() + p1 * self.u1()
    }

    /// The same components for the other enantiomer: chiral parts negated.
    pub fn mirror_image(&self) -> PotentialComponents {
        let neg = |s: Split| Split {
            nonresonant: -s.nonresonant,
            resonant: -s.resonant,
        };
        PotentialComponents {
            u0c: neg(self.u0c),
            u1c: neg(self.u1c),
            ..*self
        }
    }
}

/// Ground-state nonresonant parts and the resonant building blocks.
#[derive(Debug, Clone, Copy)]
struct Raw {
    nr_e: f64,
    nr_c: f64,
    res_e: f64,
    res_c: f64,
}

fn assemble(raw: Raw, z: f64, temperature: f64, n: Option<f64>) -> PotentialComponents {
    let n_val = n.unwrap_or(0.0);
    PotentialComponents {
        z,
        thermal: n.is_some(),
        temperature,
        u0e: Split {
            nonresonant: raw.nr_e,
            resonant: -n_val * raw.res_e,
        },
        u1e: Split {
            nonresonant: -raw.nr_e,
            resonant: (2.0 * n_val + 1.0) * raw.res_e,
        },
        u0c: Split {
            nonresonant: raw.nr_c,
            resonant: -n_val * raw.res_c,
        },
        u1c: Split {
            nonresonant: -raw.nr_c,
            resonant: (2.0 * n_val + 1.0) * raw.res_c,
        },
    }
}

/// Real-photon terms: -(mu0/3) w^2 |d|^2 Re tr G and (2 mu0 w R01/3) Re tr curl G.
fn resonant(molecule: &MoleculeSpec, cavity: &CavitySpec, z: f64, cfg: &PotentialConfig, order: Order) -> Result<(f64, f64)> {
    let w = molecule.omega10;
    let d2 = molecule.dipole_d01 * molecule.dipole_d01;
    let g = trace_g_real(w, z, cavity, &cfg.greens, order)?;
    let res_e = -MU0 / 3.0 * w * w * d2 * g.re;
    let res_c = if molecule.rotatory_r01_over_c == 0.0 {
        0.0
    } else {
        let cg = trace_curl_g_real(w, z, cavity, &cfg.greens, order)?;
        2.0 * MU0 * w * molecule.rotatory_r01() / 3.0 * cg.re
    };
    Ok((res_e, res_c))
}

/// Integrates a fallible integrand, surfacing the first failure.
fn integrate_fallible(f: impl Fn(f64) -> Result<f64>, lower: f64, upper: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let est = integrate_finite(
        |x: f64| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        lower,
        upper,
        cfg,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(est?.value)
}

/// Breakpoints in u = atan(xi / w10) around the decay scale c / 2d, so no
/// sub-interval hides a narrow peak.
fn frequency_breakpoints(omega10: f64, distance: f64) -> Vec<f64> {
    let xi_c = C / (2.0 * distance);
    let mut u: Vec<f64> = [omega10, 0.1 * xi_c, xi_c, 10.0 * xi_c]
        .iter()
        .map(|xi| (xi / omega10).atan())
        .collect();
    u.push(0.0);
    u.push(FRAC_PI_2);
    u.sort_by(f64::total_cmp);
    u.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    u
}

// The two mirrors are integrated and summed separately: at the centre of a
// cavity with opposite-handed mirrors their chiral terms cancel, and a
// relative tolerance on the sum could never be met.

fn nonresonant_zero_t(molecule: &MoleculeSpec, cavity: &CavitySpec, z: f64, cfg: &PotentialConfig, order: Order) -> Result<(f64, f64)> {
    let w = molecule.omega10;
    let d2 = molecule.dipole_d01 * molecule.dipole_d01;
    let r01 = molecule.rotatory_r01();
    let mut electric = 0.0;
    let mut chiral = 0.0;
    for side in [Side::A, Side::B] {
        let cuts = frequency_breakpoints(w, cavity.distance_from(side, z));
        for pair in cuts.windows(2) {
            // xi = w tan(u) makes alpha dxi = (2/3 hbar) |d|^2 du
            electric += integrate_fallible(
                |u| xi2_trace_g_imaginary_from(side, w * u.tan(), z, cavity, &cfg.greens, order),
                pair[0],
                pair[1],
                &cfg.frequency,
            )?;
            if r01 != 0.0 {
                chiral += integrate_fallible(
                    |u| Ok(u.tan() * xi_trace_curl_g_imaginary_from(side, w * u.tan(), z, cavity, &cfg.greens, order)?),
                    pair[0],
                    pair[1],
                    &cfg.frequency,
                )?;
            }
        }
    }
    Ok((MU0 * d2 / (3.0 * PI) * electric, 2.0 * MU0 * r01 / (3.0 * PI) * chiral))
}

fn nonresonant_thermal(molecule: &MoleculeSpec, cavity: &CavitySpec, z: f64, temperature: f64, cfg: &PotentialConfig, order: Order) -> Result<(f64, f64)> {
    let response = ResponseFunctions::new(molecule);
    let step = 2.0 * PI * KB * temperature / HBAR;
    let mut electric = 0.0;
    let mut chiral = 0.0;
    for side in [Side::A, Side::B] {
        electric += sum_series(
            |j| {
                let xi = step * j as f64;
                Ok(response.alpha(xi) * xi2_trace_g_imaginary_from(side, xi, z, cavity, &cfg.greens, order)?)
            },
            0.5,
            &cfg.matsubara,
        )?
        .value;
        if molecule.rotatory_r01_over_c != 0.0 {
            chiral += sum_series(
                |j| {
                    if j == 0 {
                        return Ok(0.0);
                    }
                    let xi = step * j as f64;
                    Ok(response.gamma(xi) * xi_trace_curl_g_imaginary_from(side, xi, z, cavity, &cfg.greens, order)?)
                },
                0.5,
                &cfg.matsubara,
            )?
            .value;
        }
    }
    let kt = KB * temperature;
    Ok((MU0 * kt * electric, -2.0 * MU0 * kt * chiral))
}

/// Zero-temperature potentials of both states.
pub fn potential_zero_t(molecule: &MoleculeSpec, cavity: &CavitySpec, z: f64, cfg: &PotentialConfig) -> Result<PotentialComponents> {
    zero_t(molecule, cavity, z, cfg, Order::Value)
}

fn zero_t(molecule: &MoleculeSpec, cavity: &CavitySpec, z: f64, cfg: &PotentialConfig, order: Order) -> Result<PotentialComponents> {
    molecule.validate()?;
    let (res_e, res_c) = resonant(molecule, cavity, z, cfg, order)?;
    let (nr_e, nr_c) = nonresonant_zero_t(molecule, cavity, z, cfg, order)?;
    Ok(assemble(Raw { nr_e, nr_c, res_e, res_c }, z, 0.0, None))
}

/// Thermal potentials with the photon number taken from the temperature.
pub fn potential_thermal(molecule: &MoleculeSpec, cavity: &CavitySpec, z: f64, temperature: f64, cfg: &PotentialConfig) -> Result<PotentialComponents> {
    let n = thermal_photon_number(molecule.omega10, temperature)?;
    potential_thermal_with_photon_number(molecule, cavity, z, temperature, n, cfg)
}

/// Thermal potentials with an explicit mean photon number at the
/// transition frequency.
pub fn potential_thermal_with_photon_number(molecule: &MoleculeSpec, cavity: &CavitySpec, z: f64, temperature: f64, n: f64, cfg: &PotentialConfig) -> Result<PotentialComponents> {
    thermal(molecule, cavity, z, temperature, n, cfg, Order::Value)
}

fn thermal(molecule: &MoleculeSpec, cavity: &CavitySpec, z: f64, temperature: f64, n: f64, cfg: &PotentialConfig, order: Order) -> Result<PotentialComponents> {
    molecule.validate()?;
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::domain(format!("thermal potentials need T > 0, got {temperature}")));
    }
    if !(n >= 0.0 && n.is_finite()) {
        return Err(Error::domain(format!("photon number must be >= 0, got {n}")));
    }
    let (res_e, res_c) = resonant(molecule, cavity, z, cfg, order)?;
    let (nr_e, nr_c) = nonresonant_thermal(molecule, cavity, z, temperature, cfg, order)?;
    Ok(assemble(Raw { nr_e, nr_c, res_e, res_c }, z, temperature, Some(n)))
}

/// True when the zero-temperature formulas apply at `temperature`.
pub fn uses_zero_temperature(molecule: &MoleculeSpec, temperature: f64) -> Result<bool> {
    if temperature == 0.0 {
        return Ok(true);
    }
    Ok(thermal_photon_number(molecule.omega10, temperature)? < NEGLIGIBLE_PHOTON_NUMBER)
}

/// Potentials, or their z-derivatives, with the temperature regime chosen
/// automatically.
pub fn potential_components(molecule: &MoleculeSpec, cavity: &CavitySpec, z: f64, temperature: f64, cfg: &PotentialConfig, order: Order) -> Result<PotentialComponents> {
    if uses_zero_temperature(molecule, temperature)? {
        let mut c = zero_t(molecule, cavity, z, cfg, order)?;
        c.temperature = temperature;
        Ok(c)
    } else {
        let n = thermal_photon_number(molecule.omega10, temperature)?;
        thermal(molecule, cavity, z, temperature, n, cfg, order)
    }
}
