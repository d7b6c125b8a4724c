use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::components::{PotentialComponents, PotentialConfig};
use super::driven::driven_components;
use crate::error::{Error, Result};
use crate::greens::Order;
use crate::physics::{CavitySpec, DriveSpec, MoleculeSpec};

/// `n` points from `lo` to `hi` inclusive, evenly spaced in log.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i == n - 1 {
                        hi
                    } else {
                        (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// `n` points from `lo` to `hi` inclusive, evenly spaced.
pub fn linear_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub z: f64,
    pub components: PotentialComponents,
    /// p0 U0 + p1 U1 for the molecule as given.
    pub driven: f64,
    /// The same for its mirror image.
    pub driven_opposite: f64,
}

/// Potential components sampled on a z grid. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialCurve {
    pub p0: f64,
    pub p1: f64,
    pub rows: Vec<CurveRow>,
}

impl PotentialCurve {
    pub const CSV_HEADER: &'static str = "z_m,U0e_J,U1e_J,U0c_J,U1c_J,U_driven_J,U_driven_opposite_J";

    /// Evaluates every grid point in parallel.
    pub fn compute(molecule: &MoleculeSpec, cavity: &CavitySpec, drive: &DriveSpec, zs: &[f64], cfg: &PotentialConfig) -> Result<PotentialCurve> {
        if zs.is_empty() {
            return Err(Error::invalid("z grid", "must contain at least one point"));
        }
        let (p0, p1) = drive.averaged_populations(molecule)?;
        let rows = zs
            .par_iter()
            .map(|&z| {
                let c = driven_components(molecule, cavity, drive, z, cfg, Order::Value)?;
                Ok(CurveRow {
                    z,
                    components: c,
                    driven: c.weighted(p0, p1),
                    driven_opposite: c.mirror_image().weighted(p0, p1),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PotentialCurve { p0, p1, rows })
    }

    pub fn zs(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.z).collect()
    }

    pub fn driven(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.driven).collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for r in &self.rows {
            let c = &r.components;
            writeln!(
                out,
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                r.z,
                c.u0e.total(),
                c.u1e.total(),
                c.u0c.total(),
                c.u1c.total(),
                r.driven,
                r.driven_opposite
            )?;
        }
        Ok(())
    }
}
