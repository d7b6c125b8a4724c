//! Casimir-Polder potentials of laser-driven chiral molecules between two
//! chiral mirrors, and the molecular-beam dynamics they induce.
//!
//! The crate is layered bottom-up:
//!
//! * [`physics`] - constants, molecule/mirror/cavity/drive descriptions,
//!   Rabi populations and thermal photon numbers.
//! * [`quadrature`] - adaptive Gauss-Kronrod, Filon-type oscillatory
//!   quadrature and convergence-controlled series summation.
//! * [`greens`] - traces of the cavity scattering Green's tensor and its
//!   curl at imaginary and real frequency.
//! * [`potential`] - electric/chiral, ground/excited, zero-temperature and
//!   thermal potential components, the driven potential, force and barriers.
//! * [`dynamics`] - trajectory integration on an interpolated potential and
//!   ensemble separation statistics.

pub mod dynamics;
pub mod error;
pub mod greens;
pub mod physics;
pub mod potential;
pub mod quadrature;

pub use error::{Error, Result};
