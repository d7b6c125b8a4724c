//! Scenario files: one TOML document per run.
//!
//! Every table rejects unknown keys. Units are SI throughout; the drive
//! intensity is in W/m^2 (5 W/cm^2 = 5e4).

use std::path::PathBuf;

use chiral_cp::dynamics::{EnsembleSpec, IntegratorControls, GRID_POINTS};
use chiral_cp::physics::{CavitySpec, DriveSpec, Enantiomer, MirrorSpec, MoleculeSpec, RabiSource};
use chiral_cp::potential::{PotentialConfig, Z_MIN};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Lowest and highest cavity order accepted by the enhancement sweep.
pub const NU_RANGE: (u32, u32) = (2, 20);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub molecule: MoleculeConfig,
    pub cavity: CavityConfig,
    #[serde(default, skip_serializing_if = "DriveConfig::is_undriven")]
    pub drive: DriveConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enhancement: Option<EnhancementConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerics: Option<NumericsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

/// A built-in molecule, an explicit one, or a built-in with overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default = "positive", skip_serializing_if = "is_positive")]
    pub enantiomer: Enantiomer,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// |d01|, C m.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dipole_d01: Option<f64>,
    /// |R01|/c, C^2 m^2. The sign comes from `enantiomer`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotatory_r01_over_c: Option<f64>,
    /// rad/s.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega10: Option<f64>,
    /// kg.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
}

fn positive() -> Enantiomer {
    Enantiomer::Positive
}

fn is_positive(e: &Enantiomer) -> bool {
    *e == Enantiomer::Positive
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityConfig {
    /// Mirror separation, m. Set per order by the enhancement sweep, so it
    /// must be left out there.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width_a: Option<f64>,
    pub mirror_a: MirrorSpec,
    pub mirror_b: MirrorSpec,
}

/// No `intensity` and no `rabi` means an undriven ground-state molecule.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    /// W/m^2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intensity: Option<f64>,
    /// rad/s.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi: Option<f64>,
    /// omega_L - omega10, rad/s.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub detuning: f64,
    /// K.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub temperature: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0 && x.is_sign_positive()
}

impl DriveConfig {
    fn is_undriven(&self) -> bool {
        *self == DriveConfig::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

/// Positions for the `potential` command, measured from mirror A.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub z_min: f64,
    pub z_max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
    /// One curve per temperature, replacing `drive.temperature`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperatures: Option<Vec<f64>>,
    /// Also scan for the barriers at both mirrors.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub barriers: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnhancementConfig {
    pub nu_min: u32,
    pub nu_max: u32,
    /// Samples across a/2 +- lambda10/8 from which the amplitude is taken.
    #[serde(default = "default_window_points")]
    pub window_points: usize,
}

fn default_window_points() -> usize {
    41
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub n_molecules: usize,
    /// Launch position, m; the cavity centre when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z0: Option<f64>,
    /// m/s, positive towards mirror B.
    pub v_mean: f64,
    pub v_sigma: f64,
    /// s.
    pub t_max: f64,
    pub rng_seed: u64,
    #[serde(default = "both_enantiomers")]
    pub enantiomers: Vec<Enantiomer>,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub write_trajectories: bool,
}

fn both_enantiomers() -> Vec<Enantiomer> {
    vec![Enantiomer::Positive, Enantiomer::Negative]
}

fn default_grid_points() -> usize {
    GRID_POINTS
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    #[serde(default)]
    pub potential: PotentialConfig,
    #[serde(default)]
    pub integrator: IntegratorControls,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

/// The physical inputs of a scenario, checked and converted to core types.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub molecule: MoleculeSpec,
    pub mirror_a: MirrorSpec,
    pub mirror_b: MirrorSpec,
    pub drive: DriveSpec,
    pub potential: PotentialConfig,
    pub integrator: IntegratorControls,
}

fn bad(field: &str, reason: impl Into<String>) -> CliError {
    CliError::Config {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn positive_finite(field: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(bad(field, format!("must be finite and > 0, got {x}")))
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario configs always serialize")
    }

    /// Checks everything that does not depend on the command.
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let molecule = self.molecule.resolve()?;
        let mirror_a = self.cavity.mirror_a;
        let mirror_b = self.cavity.mirror_b;
        mirror_a.validate("cavity.mirror_a")?;
        mirror_b.validate("cavity.mirror_b")?;
        let drive = self.drive.resolve()?;
        let numerics = self.numerics.unwrap_or_default();
        Ok(Resolved {
            molecule,
            mirror_a,
            mirror_b,
            drive,
            potential: numerics.potential,
            integrator: numerics.integrator,
        })
    }

    /// The cavity for commands that need a fixed width.
    pub fn cavity(&self, r: &Resolved) -> Result<CavitySpec, CliError> {
        let a = self.cavity.width_a.ok_or_else(|| bad("cavity.width_a", "required by this command"))?;
        let a = positive_finite("cavity.width_a", a)?;
        if a <= 2.0 * Z_MIN {
            return Err(bad("cavity.width_a", format!("must exceed {:e} m", 2.0 * Z_MIN)));
        }
        Ok(CavitySpec::new(a, r.mirror_a, r.mirror_b)?)
    }

    pub fn grid(&self, cavity: &CavitySpec) -> Result<&GridConfig, CliError> {
        let g = self.grid.as_ref().ok_or_else(|| bad("grid", "the potential command needs a [grid] table"))?;
        positive_finite("grid.z_min", g.z_min)?;
        if !(g.z_max > g.z_min && g.z_max.is_finite()) {
            return Err(bad("grid.z_max", "must be finite and > grid.z_min"));
        }
        if g.z_max >= cavity.width_a {
            return Err(bad("grid.z_max", "must lie inside the cavity (< cavity.width_a)"));
        }
        if g.points < 2 {
            return Err(bad("grid.points", "need at least 2"));
        }
        if let Some(ts) = &g.temperatures {
            if ts.is_empty() {
                return Err(bad("grid.temperatures", "must not be empty when given"));
            }
            if let Some(t) = ts.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
                return Err(bad("grid.temperatures", format!("must be finite and >= 0, got {t}")));
            }
            if self.drive.temperature != 0.0 {
                return Err(bad("drive.temperature", "conflicts with grid.temperatures; give one of them"));
            }
        }
        Ok(g)
    }

    pub fn enhancement(&self) -> Result<EnhancementConfig, CliError> {
        let e = self
            .enhancement
            .ok_or_else(|| bad("enhancement", "the enhancement command needs an [enhancement] table"))?;
        let (lo, hi) = NU_RANGE;
        if !(lo..=hi).contains(&e.nu_min) {
            return Err(bad("enhancement.nu_min", format!("must lie in [{lo}, {hi}]")));
        }
        if !(e.nu_min..=hi).contains(&e.nu_max) {
            return Err(bad("enhancement.nu_max", format!("must lie in [enhancement.nu_min, {hi}]")));
        }
        if e.window_points == 0 {
            return Err(bad("enhancement.window_points", "need at least 1"));
        }
        if self.cavity.width_a.is_some() {
            return Err(bad("cavity.width_a", "the enhancement sweep sets a = nu lambda10 / 4; leave it out"));
        }
        Ok(e)
    }

    /// One spec per requested enantiomer.
    pub fn ensemble(&self, cavity: &CavitySpec) -> Result<(Vec<EnsembleSpec>, &EnsembleConfig), CliError> {
        let e = self.ensemble.as_ref().ok_or_else(|| bad("ensemble", "the ensemble command needs an [ensemble] table"))?;
        if e.enantiomers.is_empty() {
            return Err(bad("ensemble.enantiomers", "must name at least one enantiomer"));
        }
        if e.enantiomers.len() == 2 && e.enantiomers[0] == e.enantiomers[1] || e.enantiomers.len() > 2 {
            return Err(bad("ensemble.enantiomers", "list each enantiomer at most once"));
        }
        if e.grid_points < 8 {
            return Err(bad("ensemble.grid_points", "need at least 8"));
        }
        let specs = e
            .enantiomers
            .iter()
            .map(|&enantiomer| {
                let spec = EnsembleSpec {
                    n_molecules: e.n_molecules,
                    z0: e.z0.unwrap_or(0.5 * cavity.width_a),
                    v_mean: e.v_mean,
                    v_sigma: e.v_sigma,
                    rng_seed: e.rng_seed,
                    t_max: e.t_max,
                    enantiomer,
                };
                spec.validate().map_err(|err| match err {
                    chiral_cp::Error::Validation { field, reason } => bad(&format!("ensemble.{field}"), reason),
                    other => other.into(),
                })?;
                Ok(spec)
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok((specs, e))
    }

    pub fn seed(&self) -> Option<u64> {
        self.ensemble.as_ref().map(|e| e.rng_seed)
    }
}

impl MoleculeConfig {
    pub fn resolve(&self) -> Result<MoleculeSpec, CliError> {
        let mut m = match &self.preset {
            Some(p) => MoleculeSpec::preset(p, Enantiomer::Positive).ok_or_else(|| {
                bad(
                    "molecule.preset",
                    format!("unknown preset {p:?}; known: {}", MoleculeSpec::PRESET_NAMES.join(", ")),
                )
            })?,
            None => {
                let need = |field: &str, v: Option<f64>| v.ok_or_else(|| bad(field, "required without molecule.preset"));
                MoleculeSpec {
                    name: self.name.clone().unwrap_or_else(|| "custom".into()),
                    dipole_d01: need("molecule.dipole_d01", self.dipole_d01)?,
                    rotatory_r01_over_c: need("molecule.rotatory_r01_over_c", self.rotatory_r01_over_c)?,
                    omega10: need("molecule.omega10", self.omega10)?,
                    mass: need("molecule.mass", self.mass)?,
                }
            }
        };
        if let Some(name) = &self.name {
            m.name = name.clone();
        }
        if let Some(d) = self.dipole_d01 {
            m.dipole_d01 = d;
        }
        if let Some(r) = self.rotatory_r01_over_c {
            if !(r >= 0.0) {
                return Err(bad(
                    "molecule.rotatory_r01_over_c",
                    "give the magnitude; select the handedness with molecule.enantiomer",
                ));
            }
            m.rotatory_r01_over_c = r;
        }
        if let Some(w) = self.omega10 {
            m.omega10 = w;
        }
        if let Some(mass) = self.mass {
            m.mass = mass;
        }
        m.rotatory_r01_over_c = self.enantiomer.sign() * m.rotatory_r01_over_c.abs();
        m.validate().map_err(|err| match err {
            chiral_cp::Error::Validation { field, reason } => bad(&prefixed("molecule", &field), reason),
            other => other.into(),
        })?;
        Ok(m)
    }
}

fn prefixed(table: &str, field: &str) -> String {
    if field.starts_with(table) {
        field.to_string()
    } else {
        format!("{table}.{field}")
    }
}

impl DriveConfig {
    pub fn resolve(&self) -> Result<DriveSpec, CliError> {
        let source = match (self.intensity, self.rabi) {
            (Some(_), Some(_)) => return Err(bad("drive.rabi", "give drive.intensity or drive.rabi, not both")),
            (Some(i), None) => RabiSource::Intensity(i),
            (None, Some(r)) => RabiSource::Rabi(r),
            (None, None) => RabiSource::Rabi(0.0),
        };
        let d = DriveSpec {
            source,
            detuning: self.detuning,
            temperature: self.temperature,
        };
        d.validate()?;
        Ok(d)
    }
}

impl EnhancementConfig {
    /// Cavity width for order `nu`.
    pub fn width(nu: u32, molecule: &MoleculeSpec) -> f64 {
        nu as f64 * molecule.wavelength() / 4.0
    }

    /// Positions spanning a/2 +- lambda10/8.
    pub fn window(&self, width_a: f64, molecule: &MoleculeSpec) -> Vec<f64> {
        let half_span = molecule.wavelength() / 8.0;
        let n = self.window_points;
        if n == 1 {
            return vec![0.5 * width_a];
        }
        (0..n)
            .map(|i| 0.5 * width_a + half_span * (2.0 * i as f64 / (n - 1) as f64 - 1.0))
            .collect()
    }
}
