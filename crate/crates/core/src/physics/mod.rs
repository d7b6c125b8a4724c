//! Physical constants and the descriptions of molecules, mirrors, cavities
//! and the driving laser.

mod cavity;
pub mod constants;
mod drive;
mod molecule;

pub use cavity::{CavitySpec, MirrorSpec, Side};
pub use constants::PhysicalConstants;
pub use drive::{
    populations, rabi_from_intensity, thermal_photon_number, time_averaged_populations, DriveSpec,
    RabiSource,
};
pub use molecule::{Enantiomer, MoleculeSpec};
