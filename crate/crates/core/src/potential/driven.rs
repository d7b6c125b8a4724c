use super::components::{potential_components, PotentialComponents, PotentialConfig};
use crate::error::Result;
use crate::greens::Order;
use crate::physics::{CavitySpec, DriveSpec, MoleculeSpec};

/// Closest approach to either mirror, m. Curves, barrier scans and
/// trajectories all stop here.
pub const Z_MIN: f64 = 10e-9;

/// Population-weighted potential p0 U0 + p1 U1 with cycle-averaged
/// populations, J.
pub fn driven_potential(molecule: &MoleculeSpec, cavity: &CavitySpec, drive: &DriveSpec, z: f64, cfg: &PotentialConfig) -> Result<f64> {
    let (p0, p1) = drive.averaged_populations(molecule)?;
    Ok(driven_components(molecule, cavity, drive, z, cfg, Order::Value)?.weighted(p0, p1))
}

/// -dU/dz of the driven potential from the differentiated trace integrals, N.
pub fn force(molecule: &MoleculeSpec, cavity: &CavitySpec, drive: &DriveSpec, z: f64, cfg: &PotentialConfig) -> Result<f64> {
    let (p0, p1) = drive.averaged_populations(molecule)?;
    Ok(-driven_components(molecule, cavity, drive, z, cfg, Order::DerivativeZ)?.weighted(p0, p1))
}

pub(crate) fn driven_components(molecule: &MoleculeSpec, cavity: &CavitySpec, drive: &DriveSpec, z: f64, cfg: &PotentialConfig, order: Order) -> Result<PotentialComponents> {
    drive.validate()?;
    cavity.validate()?;
    potential_components(molecule, cavity, z, drive.temperature, cfg, order)
}
