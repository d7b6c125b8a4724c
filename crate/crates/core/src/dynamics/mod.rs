//! One-dimensional motion across the cavity under the driven potential.
//!
//! The potential is tabulated once on a grid that is dense near the mirrors
//! and splined; trajectories then only evaluate the spline.

mod ensemble;
mod field;
mod integrator;
mod spline;

pub use ensemble::{
    run_ensemble, run_ensemble_in_field, separation_report, write_trajectory_csv, EnsembleResult, EnsembleSpec, SeparationReport, SeparationStats,
    TrajectoryRecord, TRAJECTORY_CSV_HEADER,
};
pub use field::{hybrid_grid, DrivenField, EnantiomerField, ForceField, UniformForce, GRID_POINTS};
pub use integrator::{integrate_trajectory, Fate, IntegratorControls, Trajectory, TrajectoryFailure, TrajectoryState};
pub use spline::CubicSpline;
