use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::components::{PotentialComponents, PotentialConfig};
use super::curve::log_spaced;
use super::driven::{driven_components, Z_MIN};
use crate::error::{Error, Result};
use crate::greens::Order;
use crate::physics::{CavitySpec, DriveSpec, Enantiomer, MoleculeSpec, Side};

/// Points in the coarse scan from the mirror to the cavity centre.
pub const SCAN_POINTS: usize = 400;

/// The potential maximum met on the way from the cavity centre to a mirror.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Barrier {
    /// Height above the potential at the cavity centre, J. Zero when the
    /// approach is barrierless.
    pub height: f64,
    /// Position of the maximum, m; `None` when barrierless.
    pub position: Option<f64>,
    /// sqrt(2 height / m), m/s.
    pub threshold_speed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierReport {
    pub side: Side,
    pub positive: Barrier,
    pub negative: Barrier,
}

impl BarrierReport {
    /// The higher of the two barriers.
    pub fn v_plus(&self) -> &Barrier {
        if self.positive.height >= self.negative.height {
            &self.positive
        } else {
            &self.negative
        }
    }

    /// The lower of the two barriers.
    pub fn v_minus(&self) -> &Barrier {
        if self.positive.height >= self.negative.height {
            &self.negative
        } else {
            &self.positive
        }
    }

    /// Enantiomer facing the higher barrier, i.e. repelled by this mirror.
    pub fn repelled(&self) -> Enantiomer {
        if self.positive.height >= self.negative.height {
            Enantiomer::Positive
        } else {
            Enantiomer::Negative
        }
    }

    pub fn barrier(&self, e: Enantiomer) -> &Barrier {
        match e {
            Enantiomer::Positive => &self.positive,
            Enantiomer::Negative => &self.negative,
        }
    }
}

struct Scan<'a> {
    molecule: MoleculeSpec,
    cavity: &'a CavitySpec,
    drive: &'a DriveSpec,
    cfg: &'a PotentialConfig,
    side: Side,
    p0: f64,
    p1: f64,
}

impl Scan<'_> {
    fn components(&self, d: f64) -> Result<PotentialComponents> {
        let z = self.cavity.position_at(self.side, d);
        driven_components(&self.molecule, self.cavity, self.drive, z, self.cfg, Order::Value)
    }

    fn energy(&self, d: f64, e: Enantiomer) -> Result<f64> {
        let c = self.components(d)?;
        let c = match e {
            Enantiomer::Positive => c,
            Enantiomer::Negative => c.mirror_image(),
        };
        Ok(c.weighted(self.p0, self.p1))
    }

    fn refine(&self, mut lo: f64, mut hi: f64, e: Enantiomer) -> Result<(f64, f64)> {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let mut f1 = self.energy(x1, e)?;
        let mut f2 = self.energy(x2, e)?;
        while hi - lo > 1e-3 * lo {
            if f1 > f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = self.energy(x1, e)?;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = self.energy(x2, e)?;
            }
        }
        Ok(if f1 > f2 { (x1, f1) } else { (x2, f2) })
    }

    fn barrier(&self, ds: &[f64], energies: &[f64], e: Enantiomer) -> Result<Barrier> {
        let last = ds.len() - 1;
        let reference = energies[last];
        let (i, &top) = energies
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("scan is non-empty");
        if i == last || top <= reference {
            return Ok(Barrier {
                height: 0.0,
                position: None,
                threshold_speed: 0.0,
            });
        }
        let lo = ds[i.saturating_sub(1)];
        let hi = ds[(i + 1).min(last)];
        let (d, peak) = self.refine(lo, hi, e)?;
        let (d, peak) = if peak >= top { (d, peak) } else { (ds[i], top) };
        let height = peak - reference;
        Ok(Barrier {
            height,
            position: Some(self.cavity.position_at(self.side, d)),
            threshold_speed: (2.0 * height / self.molecule.mass).sqrt(),
        })
    }
}

/// Scans the driven potential from `Z_MIN` to the cavity centre on the
/// given side and reports the barrier each enantiomer meets.
pub fn barrier_report(molecule: &MoleculeSpec, cavity: &CavitySpec, drive: &DriveSpec, side: Side, cfg: &PotentialConfig) -> Result<BarrierReport> {
    let half = 0.5 * cavity.width_a;
    if half <= Z_MIN {
        return Err(Error::domain("cavity too narrow for a barrier scan"));
    }
    let positive = molecule.with_enantiomer(Enantiomer::Positive);
    let (p0, p1) = drive.averaged_populations(&positive)?;
    let scan = Scan {
        molecule: positive,
        cavity,
        drive,
        cfg,
        side,
        p0,
        p1,
    };
    // the centre itself lies on the open interval only for d < a/2
    let ds = log_spaced(Z_MIN, half * (1.0 - 1e-12), SCAN_POINTS);
    let comps: Vec<PotentialComponents> = ds.par_iter().map(|&d| scan.components(d)).collect::<Result<_>>()?;
    let pos: Vec<f64> = comps.iter().map(|c| c.weighted(p0, p1)).collect();
    let neg: Vec<f64> = comps.iter().map(|c| c.mirror_image().weighted(p0, p1)).collect();
    Ok(BarrierReport {
        side,
        positive: scan.barrier(&ds, &pos, Enantiomer::Positive)?,
        negative: scan.barrier(&ds, &neg, Enantiomer::Negative)?,
    })
}
