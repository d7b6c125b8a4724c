use super::spline::CubicSpline;
use crate::error::{Error, Result};
use crate::physics::{CavitySpec, DriveSpec, Enantiomer, MoleculeSpec, Side};
use crate::potential::{linear_spaced, log_spaced, PotentialConfig, PotentialCurve, Z_MIN};

/// Grid points in the default force table.
pub const GRID_POINTS: usize = 4000;

/// A conservative 1-D force on [lower, upper].
pub trait ForceField: Sync {
    fn potential(&self, z: f64) -> f64;
    fn force(&self, z: f64) -> f64;
    /// Collection boundaries near mirrors A and B.
    fn bounds(&self) -> (f64, f64);
    /// Sorted positions where the force is less smooth than elsewhere.
    /// The integrator ends steps on them.
    fn breakpoints(&self) -> &[f64] {
        &[]
    }
}

/// Constant force, mainly for checks of the integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformForce {
    pub force: f64,
    pub lower: f64,
    pub upper: f64,
}

impl ForceField for UniformForce {
    fn potential(&self, z: f64) -> f64 {
        -self.force * z
    }
    fn force(&self, _z: f64) -> f64 {
        self.force
    }
    fn bounds(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }
}

/// `n` positions from `z_min` to `a - z_min`: log-spaced within `span` of
/// each mirror and linear in between. Falls back to log spacing towards the
/// centre from both sides when the cavity is narrower than `4 span`.
pub fn hybrid_grid(width_a: f64, span: f64, z_min: f64, n: usize) -> Result<Vec<f64>> {
    if n < 8 {
        return Err(Error::invalid("grid points", "need at least 8"));
    }
    if !(width_a > 2.0 * z_min && span > z_min) {
        return Err(Error::invalid("grid", "cavity must be wider than 2 z_min and span > z_min"));
    }
    let half = 0.5 * width_a;
    let mut z;
    if 2.0 * span >= half {
        let per_side = n / 2;
        let left = log_spaced(z_min, half, per_side);
        z = left.clone();
        let mut right: Vec<f64> = log_spaced(z_min, half, n - per_side + 1)
            .into_iter()
            .rev()
            .skip(1)
            .map(|d| width_a - d)
            .collect();
        z.append(&mut right);
    } else {
        let per_side = 3 * n / 8;
        let middle = n - 2 * per_side;
        z = log_spaced(z_min, span, per_side);
        let inner = linear_spaced(span, width_a - span, middle + 2);
        z.extend_from_slice(&inner[1..inner.len() - 1]);
        let mut right: Vec<f64> = log_spaced(z_min, span, per_side).into_iter().rev().map(|d| width_a - d).collect();
        z.append(&mut right);
    }
    z.dedup_by(|a, b| *a <= *b);
    Ok(z)
}

/// Splined driven potentials of both enantiomers, shared by all
/// trajectories of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct DrivenField {
    positive: CubicSpline,
    negative: CubicSpline,
    lower: f64,
    upper: f64,
    width_a: f64,
}

impl DrivenField {
    /// Tabulates the driven potential on the hybrid grid.
    pub fn compute(molecule: &MoleculeSpec, cavity: &CavitySpec, drive: &DriveSpec, cfg: &PotentialConfig, points: usize) -> Result<(DrivenField, PotentialCurve)> {
        let positive = molecule.with_enantiomer(Enantiomer::Positive);
        let zs = hybrid_grid(cavity.width_a, 2.0 * positive.wavelength(), Z_MIN, points)?;
        let curve = PotentialCurve::compute(&positive, cavity, drive, &zs, cfg)?;
        Ok((DrivenField::from_curve(&curve, cavity)?, curve))
    }

    /// From a curve computed for the positive enantiomer.
    pub fn from_curve(curve: &PotentialCurve, cavity: &CavitySpec) -> Result<DrivenField> {
        let zs = curve.zs();
        let pos = curve.driven();
        let neg = curve.rows.iter().map(|r| r.driven_opposite).collect();
        Ok(DrivenField {
            lower: zs[0],
            upper: zs[zs.len() - 1],
            positive: CubicSpline::natural(zs.clone(), pos)?,
            negative: CubicSpline::natural(zs, neg)?,
            width_a: cavity.width_a,
        })
    }

    pub fn enantiomer(&self, e: Enantiomer) -> EnantiomerField<'_> {
        EnantiomerField {
            spline: match e {
                Enantiomer::Positive => &self.positive,
                Enantiomer::Negative => &self.negative,
            },
            lower: self.lower,
            upper: self.upper,
        }
    }

    /// Potential maximum above the centre value on each half, (A, B), from
    /// the tabulated knots.
    pub fn barrier_heights(&self, e: Enantiomer) -> (f64, f64) {
        let s = self.enantiomer(e).spline;
        let centre = s.value(0.5 * self.width_a);
        let (mut a, mut b) = (0.0f64, 0.0f64);
        for (&z, &u) in s.knots() {
            if z < 0.5 * self.width_a {
                a = a.max(u - centre);
            } else {
                b = b.max(u - centre);
            }
        }
        (a, b)
    }

    /// The mirror this enantiomer reaches over the lower barrier.
    pub fn designated_mirror(&self, e: Enantiomer) -> Side {
        let (a, b) = self.barrier_heights(e);
        if a <= b {
            Side::A
        } else {
            Side::B
        }
    }
}

/// One enantiomer's view of a [`DrivenField`].
#[derive(Debug, Clone, Copy)]
pub struct EnantiomerField<'a> {
    spline: &'a CubicSpline,
    lower: f64,
    upper: f64,
}

impl ForceField for EnantiomerField<'_> {
    fn potential(&self, z: f64) -> f64 {
        self.spline.value(z)
    }
    fn force(&self, z: f64) -> f64 {
        -self.spline.derivative(z)
    }
    fn bounds(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }
    fn breakpoints(&self) -> &[f64] {
        self.spline.abscissae()
    }
}
