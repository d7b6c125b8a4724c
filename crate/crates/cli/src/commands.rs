//! The four computations. Each returns its summary and its data files in
//! memory; nothing here touches the filesystem.

use std::fmt::Write as _;

use chiral_cp::dynamics::{run_ensemble_in_field, separation_report, write_trajectory_csv, DrivenField, SeparationReport, SeparationStats};
use chiral_cp::greens::{Order, ReflectionPath};
use chiral_cp::physics::{thermal_photon_number, CavitySpec, DriveSpec, Enantiomer, MoleculeSpec, Side};
use chiral_cp::potential::{barrier_report, linear_spaced, log_spaced, potential_components, uses_zero_temperature, BarrierReport, PotentialCurve};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{EnhancementConfig, Resolved, ScenarioConfig, Spacing};
use crate::error::CliError;

/// A named output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn csv(name: impl Into<String>, write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Artifact {
        let mut bytes = Vec::new();
        write(&mut bytes).expect("writing to a Vec cannot fail");
        Artifact { name: name.into(), bytes }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoleculeSummary {
    pub name: String,
    pub enantiomer: Enantiomer,
    pub wavelength_m: f64,
    pub rabi_frequency: f64,
    pub p0: f64,
    pub p1: f64,
}

impl MoleculeSummary {
    fn new(m: &MoleculeSpec, drive: &DriveSpec) -> Result<Self, CliError> {
        let (p0, p1) = drive.averaged_populations(m)?;
        Ok(MoleculeSummary {
            name: m.name.clone(),
            enantiomer: m.enantiomer(),
            wavelength_m: m.wavelength(),
            rabi_frequency: drive.rabi_frequency(m)?,
            p0,
            p1,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    ZeroTemperature,
    Thermal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSummary {
    pub file: String,
    pub temperature: f64,
    pub thermal_photon_number: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialSummary {
    pub molecule: MoleculeSummary,
    pub columns: &'static str,
    pub curves: Vec<CurveSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub barriers: Option<Vec<BarrierReport>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialRun {
    pub summary: PotentialSummary,
    pub curves: Vec<PotentialCurve>,
}

pub fn potential(config: &ScenarioConfig) -> Result<PotentialRun, CliError> {
    let r = config.resolve()?;
    let cavity = config.cavity(&r)?;
    let grid = config.grid(&cavity)?;
    let zs = match grid.spacing {
        Spacing::Log => log_spaced(grid.z_min, grid.z_max, grid.points),
        Spacing::Linear => linear_spaced(grid.z_min, grid.z_max, grid.points),
    };
    let temperatures = grid.temperatures.clone();
    let runs: Vec<(String, f64)> = match &temperatures {
        Some(ts) => ts.iter().map(|&t| (format!("potential_T{t}K.csv"), t)).collect(),
        None => vec![("potential.csv".to_string(), r.drive.temperature)],
    };
    let mut curves = Vec::with_capacity(runs.len());
    let mut summaries = Vec::with_capacity(runs.len());
    for (file, t) in runs {
        let drive = DriveSpec { temperature: t, ..r.drive };
        curves.push(PotentialCurve::compute(&r.molecule, &cavity, &drive, &zs, &r.potential)?);
        summaries.push(CurveSummary {
            file,
            temperature: t,
            thermal_photon_number: thermal_photon_number(r.molecule.omega10, t)?,
            regime: if uses_zero_temperature(&r.molecule, t)? {
                Regime::ZeroTemperature
            } else {
                Regime::Thermal
            },
        });
    }
    let barriers = if grid.barriers {
        Some(both_barriers(&r, &cavity)?)
    } else {
        None
    };
    Ok(PotentialRun {
        summary: PotentialSummary {
            molecule: MoleculeSummary::new(&r.molecule, &r.drive)?,
            columns: PotentialCurve::CSV_HEADER,
            curves: summaries,
            barriers,
        },
        curves,
    })
}

impl PotentialRun {
    pub fn artifacts(&self) -> Vec<Artifact> {
        self.summary
            .curves
            .iter()
            .zip(&self.curves)
            .map(|(s, c)| Artifact::csv(&s.file, |out| c.write_csv(out)))
            .collect()
    }
}

pub const ENHANCEMENT_CSV_HEADER: &str = "nu,width_a_m,electric_resonant_J,chiral_resonant_J,electric_centre_J,chiral_centre_J";

/// Excited-state resonant components for one cavity order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnhancementRow {
    pub nu: u32,
    pub width_a: f64,
    /// Largest |U1e resonant| across the central window, J.
    pub electric: f64,
    /// Largest |U1c resonant| across the central window, J.
    pub chiral: f64,
    pub electric_centre: f64,
    pub chiral_centre: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnhancementSummary {
    pub molecule: MoleculeSummary,
    pub file: &'static str,
    pub window_half_width_m: f64,
    pub window_points: usize,
    pub rows: Vec<EnhancementRow>,
}

impl EnhancementSummary {
    pub fn row(&self, nu: u32) -> Option<&EnhancementRow> {
        self.rows.iter().find(|r| r.nu == nu)
    }

    pub fn artifacts(&self) -> Vec<Artifact> {
        vec![Artifact::csv(self.file, |out| {
            use std::io::Write;
            writeln!(out, "{ENHANCEMENT_CSV_HEADER}")?;
            for r in &self.rows {
                writeln!(
                    out,
                    "{},{:e},{:e},{:e},{:e},{:e}",
                    r.nu, r.width_a, r.electric, r.chiral, r.electric_centre, r.chiral_centre
                )?;
            }
            Ok(())
        })]
    }
}

/// The multiple-reflection path is forced: the sweep is about cavity modes.
pub fn enhancement(config: &ScenarioConfig) -> Result<EnhancementSummary, CliError> {
    let r = config.resolve()?;
    let e = config.enhancement()?;
    let mut cfg = r.potential;
    cfg.greens = cfg.greens.with_path(ReflectionPath::Direct);
    let mol = &r.molecule;
    let t = r.drive.temperature;
    let rows = (e.nu_min..=e.nu_max)
        .into_par_iter()
        .map(|nu| {
            let a = EnhancementConfig::width(nu, mol);
            let cavity = CavitySpec::new(a, r.mirror_a, r.mirror_b)?;
            let window = e.window(a, mol);
            let parts = window
                .par_iter()
                .map(|&z| {
                    let c = potential_components(mol, &cavity, z, t, &cfg, Order::Value)?;
                    Ok((c.u1e.resonant, c.u1c.resonant))
                })
                .collect::<Result<Vec<_>, chiral_cp::Error>>()?;
            let centre = potential_components(mol, &cavity, 0.5 * a, t, &cfg, Order::Value)?;
            Ok(EnhancementRow {
                nu,
                width_a: a,
                electric: parts.iter().map(|p| p.0.abs()).fold(0.0, f64::max),
                chiral: parts.iter().map(|p| p.1.abs()).fold(0.0, f64::max),
                electric_centre: centre.u1e.resonant,
                chiral_centre: centre.u1c.resonant,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(EnhancementSummary {
        molecule: MoleculeSummary::new(mol, &r.drive)?,
        file: "enhancement.csv",
        window_half_width_m: mol.wavelength() / 8.0,
        window_points: e.window_points,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSummary {
    pub grid_points: usize,
    pub designated_positive: Side,
    pub designated_negative: Side,
    /// Barrier heights at mirrors A and B, J.
    pub barriers_positive: (f64, f64),
    pub barriers_negative: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSummary {
    pub molecule: MoleculeSummary,
    pub field: FieldSummary,
    pub runs: Vec<SeparationStats>,
    /// Present when both enantiomers ran and went to different mirrors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation: Option<SeparationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation_unavailable: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trajectory_files: Vec<String>,
}

impl EnsembleSummary {
    pub fn run(&self, e: Enantiomer) -> Option<&SeparationStats> {
        self.runs.iter().find(|s| s.spec.enantiomer == e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleRun {
    pub summary: EnsembleSummary,
    pub artifacts: Vec<Artifact>,
}

fn enantiomer_label(e: Enantiomer) -> &'static str {
    match e {
        Enantiomer::Positive => "positive",
        Enantiomer::Negative => "negative",
    }
}

pub fn ensemble(config: &ScenarioConfig) -> Result<EnsembleRun, CliError> {
    let r = config.resolve()?;
    let cavity = config.cavity(&r)?;
    let (specs, e) = config.ensemble(&cavity)?;
    for s in &specs {
        cavity.check_position(s.z0).map_err(|err| CliError::Config {
            field: "ensemble.z0".into(),
            reason: err.to_string(),
        })?;
    }
    let (field, _) = DrivenField::compute(&r.molecule, &cavity, &r.drive, &r.potential, e.grid_points)?;
    let controls = r.integrator;
    let mut runs = Vec::with_capacity(specs.len());
    let mut artifacts = Vec::new();
    let mut trajectory_files = Vec::new();
    for spec in &specs {
        let result = run_ensemble_in_field(spec, &field, r.molecule.mass, &controls)?;
        if e.write_trajectories {
            let name = format!("trajectories_{}.csv", enantiomer_label(spec.enantiomer));
            artifacts.push(Artifact::csv(&name, |out| write_trajectory_csv(&result.records, out)));
            trajectory_files.push(name);
        }
        runs.push(result.stats);
    }
    let (separation, separation_unavailable) = match runs.as_slice() {
        [a, b] => {
            let (pos, neg) = if a.spec.enantiomer == Enantiomer::Positive { (a, b) } else { (b, a) };
            match separation_report(pos, neg) {
                Ok(s) => (Some(s), None),
                Err(err) => (None, Some(err.to_string())),
            }
        }
        _ => (None, Some("only one enantiomer was run".to_string())),
    };
    let summary = EnsembleSummary {
        molecule: MoleculeSummary::new(&r.molecule, &r.drive)?,
        field: FieldSummary {
            grid_points: e.grid_points,
            designated_positive: field.designated_mirror(Enantiomer::Positive),
            designated_negative: field.designated_mirror(Enantiomer::Negative),
            barriers_positive: field.barrier_heights(Enantiomer::Positive),
            barriers_negative: field.barrier_heights(Enantiomer::Negative),
        },
        runs,
        separation,
        separation_unavailable,
        trajectory_files,
    };
    Ok(EnsembleRun { summary, artifacts })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarrierSummary {
    pub molecule: MoleculeSummary,
    pub reports: Vec<BarrierReport>,
}

impl BarrierSummary {
    pub fn at(&self, side: Side) -> &BarrierReport {
        self.reports.iter().find(|r| r.side == side).expect("both sides are scanned")
    }

    pub fn text(&self) -> String {
        barrier_text(&self.reports)
    }
}

/// Human-readable lines, one per mirror.
pub fn barrier_text(reports: &[BarrierReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let side = match r.side {
            Side::A => "A",
            Side::B => "B",
        };
        if r.positive.height == 0.0 && r.negative.height == 0.0 {
            let _ = writeln!(s, "mirror {side}: barrierless for both enantiomers");
            continue;
        }
        let (hi, lo) = (r.v_plus(), r.v_minus());
        let repelled = enantiomer_label(r.repelled());
        let attracted = enantiomer_label(r.repelled().opposite());
        let _ = writeln!(
            s,
            "mirror {side}: V+ = {:.4e} J ({repelled}, threshold {:.4e} m/s), V- = {:.4e} J ({attracted}, threshold {:.4e} m/s)",
            hi.height, hi.threshold_speed, lo.height, lo.threshold_speed
        );
    }
    s
}

fn both_barriers(r: &Resolved, cavity: &CavitySpec) -> Result<Vec<BarrierReport>, CliError> {
    [Side::A, Side::B]
        .iter()
        .map(|&side| Ok(barrier_report(&r.molecule, cavity, &r.drive, side, &r.potential)?))
        .collect()
}

pub fn barrier(config: &ScenarioConfig) -> Result<BarrierSummary, CliError> {
    let r = config.resolve()?;
    let cavity = config.cavity(&r)?;
    Ok(BarrierSummary {
        molecule: MoleculeSummary::new(&r.molecule, &r.drive)?,
        reports: both_barriers(&r, &cavity)?,
    })
}
