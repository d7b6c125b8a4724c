use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::{DrivenField, ForceField, GRID_POINTS};
use super::integrator::{integrate_trajectory, Fate, IntegratorControls, TrajectoryState};
use crate::error::{Error, Result};
use crate::physics::{CavitySpec, DriveSpec, Enantiomer, MoleculeSpec, Side};
use crate::potential::PotentialConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub n_molecules: usize,
    /// Launch position, m.
    pub z0: f64,
    /// m/s.
    pub v_mean: f64,
    /// m/s.
    pub v_sigma: f64,
    pub rng_seed: u64,
    /// s.
    pub t_max: f64,
    pub enantiomer: Enantiomer,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_molecules < 1 {
            return Err(Error::invalid("n_molecules", "must be >= 1"));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::invalid("t_max", "must be finite and > 0"));
        }
        if !(self.v_sigma >= 0.0 && self.v_sigma.is_finite()) || !self.v_mean.is_finite() {
            return Err(Error::invalid("v_sigma", "velocity distribution must be finite with sigma >= 0"));
        }
        if !self.z0.is_finite() {
            return Err(Error::invalid("z0", "must be finite"));
        }
        Ok(())
    }

    /// Launch velocity of trajectory `index`; depends only on the seed and the index.
    pub fn sample_velocity(&self, index: usize) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        rng.set_stream(index as u64);
        let normal = Normal::new(self.v_mean, self.v_sigma).expect("validated sigma");
        normal.sample(&mut rng)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub index: usize,
    /// Launch state, then every accepted step if requested, then the end state.
    pub history: Vec<TrajectoryState>,
    /// Set when the integrator gave up; `history` then ends where it stopped.
    pub error: Option<String>,
}

impl TrajectoryRecord {
    pub fn last(&self) -> &TrajectoryState {
        self.history.last().expect("history holds at least the launch state")
    }
}

/// Failed trajectories count as in flight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationStats {
    pub spec: EnsembleSpec,
    pub designated: Side,
    pub count_a: usize,
    pub count_b: usize,
    pub count_in_flight: usize,
    pub count_failed: usize,
    pub fraction_a: f64,
    pub fraction_b: f64,
    pub fraction_in_flight: f64,
    /// Collected at the designated mirror over all collected; `None` if nothing was collected.
    pub side_purity: Option<f64>,
    /// s; `None` if nothing was collected.
    pub median_collection_time: Option<f64>,
}

impl SeparationStats {
    pub fn from_records(spec: EnsembleSpec, designated: Side, records: &[TrajectoryRecord]) -> SeparationStats {
        let mut count_a = 0;
        let mut count_b = 0;
        let mut times = Vec::new();
        for r in records {
            let end = r.last();
            match end.fate {
                Fate::CollectedA => count_a += 1,
                Fate::CollectedB => count_b += 1,
                Fate::InFlight => continue,
            }
            times.push(end.t);
        }
        let n = records.len();
        let count_in_flight = n - count_a - count_b;
        let collected = count_a + count_b;
        let at_designated = match designated {
            Side::A => count_a,
            Side::B => count_b,
        };
        times.sort_by(f64::total_cmp);
        let median = match times.len() {
            0 => None,
            m if m % 2 == 1 => Some(times[m / 2]),
            m => Some(0.5 * (times[m / 2 - 1] + times[m / 2])),
        };
        let nf = n.max(1) as f64;
        SeparationStats {
            spec,
            designated,
            count_a,
            count_b,
            count_in_flight,
            count_failed: records.iter().filter(|r| r.error.is_some()).count(),
            fraction_a: count_a as f64 / nf,
            fraction_b: count_b as f64 / nf,
            fraction_in_flight: count_in_flight as f64 / nf,
            side_purity: (collected > 0).then(|| at_designated as f64 / collected as f64),
            median_collection_time: median,
        }
    }

    pub fn count_at(&self, side: Side) -> usize {
        match side {
            Side::A => self.count_a,
            Side::B => self.count_b,
        }
    }

    pub fn fraction_at(&self, side: Side) -> f64 {
        match side {
            Side::A => self.fraction_a,
            Side::B => self.fraction_b,
        }
    }

    pub fn collected_fraction(&self) -> f64 {
        self.fraction_a + self.fraction_b
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub stats: SeparationStats,
    pub records: Vec<TrajectoryRecord>,
}

/// Runs every trajectory of `spec` in the shared field, in parallel on the
/// current rayon pool. Results are in index order and independent of the
/// pool size.
pub fn run_ensemble_in_field(spec: &EnsembleSpec, field: &DrivenField, mass: f64, controls: &IntegratorControls) -> Result<EnsembleResult> {
    spec.validate()?;
    let view = field.enantiomer(spec.enantiomer);
    let (lower, upper) = view.bounds();
    if !(spec.z0 > lower && spec.z0 < upper) {
        return Err(Error::invalid("z0", format!("must lie in ({lower:e}, {upper:e}) m")));
    }
    let records: Vec<TrajectoryRecord> = (0..spec.n_molecules)
        .into_par_iter()
        .map(|index| {
            let init = TrajectoryState::launch(spec.z0, spec.sample_velocity(index));
            match integrate_trajectory(init, &view, mass, spec.t_max, controls) {
                Ok(t) => TrajectoryRecord { index, history: t.history, error: None },
                Err(f) => TrajectoryRecord { index, history: f.history, error: Some(f.error.to_string()) },
            }
        })
        .collect();
    let stats = SeparationStats::from_records(*spec, field.designated_mirror(spec.enantiomer), &records);
    Ok(EnsembleResult { stats, records })
}

/// Tabulates the driven field for this configuration, then runs the ensemble.
pub fn run_ensemble(spec: &EnsembleSpec, molecule: &MoleculeSpec, cavity: &CavitySpec, drive: &DriveSpec, cfg: &PotentialConfig, controls: &IntegratorControls) -> Result<EnsembleResult> {
    spec.validate()?;
    let (field, _) = DrivenField::compute(molecule, cavity, drive, cfg, GRID_POINTS)?;
    run_ensemble_in_field(spec, &field, molecule.mass, controls)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    /// Enantiomer designated to each mirror.
    pub designated_a: Enantiomer,
    pub designated_b: Enantiomer,
    /// (n_correct - n_wrong) / (n_correct + n_wrong); `None` without collections.
    pub excess_a: Option<f64>,
    pub excess_b: Option<f64>,
}

/// Per-mirror enantiomeric excess from one run of each enantiomer.
pub fn separation_report(run_pos: &SeparationStats, run_neg: &SeparationStats) -> Result<SeparationReport> {
    let (p, n) = (&run_pos.spec, &run_neg.spec);
    if p.enantiomer != Enantiomer::Positive || n.enantiomer != Enantiomer::Negative {
        return Err(Error::invalid("separation runs", "need one positive and one negative run, in that order"));
    }
    let same = p.n_molecules == n.n_molecules
        && p.z0 == n.z0
        && p.v_mean == n.v_mean
        && p.v_sigma == n.v_sigma
        && p.rng_seed == n.rng_seed
        && p.t_max == n.t_max;
    if !same {
        return Err(Error::invalid("separation runs", "ensemble specs differ beyond the enantiomer"));
    }
    if run_pos.designated == run_neg.designated {
        return Err(Error::invalid("separation runs", "both enantiomers are designated to the same mirror"));
    }
    let excess = |side: Side| {
        let (correct, wrong) = if run_pos.designated == side {
            (run_pos.count_at(side), run_neg.count_at(side))
        } else {
            (run_neg.count_at(side), run_pos.count_at(side))
        };
        let total = correct + wrong;
        (total > 0).then(|| (correct as f64 - wrong as f64) / total as f64)
    };
    let pick = |side: Side| if run_pos.designated == side { Enantiomer::Positive } else { Enantiomer::Negative };
    Ok(SeparationReport {
        designated_a: pick(Side::A),
        designated_b: pick(Side::B),
        excess_a: excess(Side::A),
        excess_b: excess(Side::B),
    })
}

pub const TRAJECTORY_CSV_HEADER: &str = "traj_id,t_s,z_m,vz_m_per_s,fate";

pub fn write_trajectory_csv<W: Write>(records: &[TrajectoryRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{TRAJECTORY_CSV_HEADER}")?;
    for r in records {
        for s in &r.history {
            writeln!(out, "{},{:e},{:e},{:e},{}", r.index, s.t, s.z, s.v_z, s.fate.as_str())?;
        }
    }
    Ok(())
}
