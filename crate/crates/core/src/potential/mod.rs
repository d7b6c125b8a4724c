//! Casimir-Polder potentials of a two-level chiral molecule in the cavity,
//! the laser-driven combination of ground and excited states, the force
//! and the barrier analysis.

mod barrier;
mod components;
mod curve;
mod driven;
mod response;

pub use barrier::{barrier_report, Barrier, BarrierReport, SCAN_POINTS};
pub use components::{
    potential_components, potential_thermal, potential_thermal_with_photon_number,
    potential_zero_t, uses_zero_temperature, PotentialComponents, PotentialConfig, Split, State,
    NEGLIGIBLE_PHOTON_NUMBER,
};
pub use curve::{linear_spaced, log_spaced, CurveRow, PotentialCurve};
pub use driven::{driven_potential, force, Z_MIN};
pub use response::ResponseFunctions;
