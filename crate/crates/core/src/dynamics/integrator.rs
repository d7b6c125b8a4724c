use serde::{Deserialize, Serialize};

use super::field::ForceField;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fate {
    InFlight,
    CollectedA,
    CollectedB,
}

impl Fate {
    pub fn as_str(self) -> &'static str {
        match self {
            Fate::InFlight => "in_flight",
            Fate::CollectedA => "collected_A",
            Fate::CollectedB => "collected_B",
        }
    }

    pub fn is_collected(self) -> bool {
        self != Fate::InFlight
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryState {
    /// m.
    pub z: f64,
    /// m/s.
    pub v_z: f64,
    /// s.
    pub t: f64,
    pub fate: Fate,
}

impl TrajectoryState {
    pub fn launch(z: f64, v_z: f64) -> Self {
        TrajectoryState {
            z,
            v_z,
            t: 0.0,
            fate: Fate::InFlight,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorControls {
    pub rel_tol: f64,
    /// Absolute tolerance on z, m.
    pub abs_tol_z: f64,
    /// Absolute tolerance on v_z, m/s.
    pub abs_tol_v: f64,
    pub max_steps: usize,
    /// Keep every accepted step, not just the end points.
    pub record_history: bool,
}

impl Default for IntegratorControls {
    fn default() -> Self {
        IntegratorControls {
            rel_tol: 1e-9,
            abs_tol_z: 1e-18,
            abs_tol_v: 1e-16,
            max_steps: 2_000_000,
            record_history: false,
        }
    }
}

/// Accepted states from launch to the final one, inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub history: Vec<TrajectoryState>,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectoryState {
        self.history.last().expect("history holds at least the launch state")
    }
}

/// An integration that stopped early, with what was computed before.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryFailure {
    pub error: Error,
    pub history: Vec<TrajectoryState>,
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

type Y = [f64; 2];

fn axpy(y: Y, h: f64, terms: &[(f64, Y)]) -> Y {
    let mut out = y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Cubic Hermite position between two accepted states.
fn hermite(s0: &TrajectoryState, s1: &TrajectoryState, t: f64) -> (f64, f64) {
    let h = s1.t - s0.t;
    let u = (t - s0.t) / h;
    let (h00, h10, h01, h11) = (
        2.0 * u * u * u - 3.0 * u * u + 1.0,
        u * u * u - 2.0 * u * u + u,
        -2.0 * u * u * u + 3.0 * u * u,
        u * u * u - u * u,
    );
    let z = h00 * s0.z + h10 * h * s0.v_z + h01 * s1.z + h11 * h * s1.v_z;
    let dh00 = (6.0 * u * u - 6.0 * u) / h;
    let dh10 = 3.0 * u * u - 4.0 * u + 1.0;
    let dh01 = (-6.0 * u * u + 6.0 * u) / h;
    let dh11 = 3.0 * u * u - 2.0 * u;
    let v = dh00 * s0.z + dh10 * s0.v_z + dh01 * s1.z + dh11 * s1.v_z;
    (z, v)
}

/// Time at which the interpolant between two states reaches `boundary`.
fn crossing(s0: &TrajectoryState, s1: &TrajectoryState, boundary: f64) -> TrajectoryState {
    let side = |t: f64| hermite(s0, s1, t).0 - boundary;
    let (mut lo, mut hi) = (s0.t, s1.t);
    let f_lo = side(lo);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if side(mid).signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (_, v) = hermite(s0, s1, hi);
    TrajectoryState {
        z: boundary,
        v_z: v,
        t: hi,
        fate: s1.fate,
    }
}

/// Time to the next breakpoint ahead of the motion, from the local
/// quadratic z(t). `None` if there is none or the motion turns first.
fn time_to_breakpoint(breaks: &[f64], z: f64, v: f64, a: f64) -> Option<f64> {
    let dir = if v != 0.0 { v.signum() } else if a != 0.0 { a.signum() } else { return None };
    // knots closer than this count as already crossed, so a step that lands
    // a hair short does not force a vanishing follow-up step
    let guard = 1e-9 * z.abs().max(1e-12);
    let target = if dir > 0.0 {
        let i = breaks.partition_point(|&k| k <= z + guard);
        *breaks.get(i)?
    } else {
        let i = breaks.partition_point(|&k| k < z - guard);
        *breaks.get(i.checked_sub(1)?)?
    };
    let (d, u, b) = ((target - z).abs(), dir * v, dir * a);
    let disc = u * u + 2.0 * b * d;
    if disc < 0.0 {
        return None;
    }
    Some(2.0 * d / (u + disc.sqrt()))
}

/// Integrates m dv/dt = F(z), dz/dt = v with adaptive Dormand-Prince 5(4)
/// until `t_max` or until z reaches a collection boundary.
pub fn integrate_trajectory<F: ForceField + ?Sized>(init: TrajectoryState, field: &F, mass: f64, t_max: f64, controls: &IntegratorControls) -> std::result::Result<Trajectory, TrajectoryFailure> {
    let fail = |error: Error, history: Vec<TrajectoryState>| TrajectoryFailure { error, history };
    let (lower, upper) = field.bounds();
    if !(mass > 0.0 && t_max > 0.0 && t_max.is_finite()) {
        return Err(fail(Error::invalid("trajectory", "mass and t_max must be > 0"), vec![init]));
    }
    if init.fate != Fate::InFlight || !(init.z > lower && init.z < upper) || !init.v_z.is_finite() {
        return Err(fail(
            Error::domain(format!("launch state z = {:e} m outside ({lower:e}, {upper:e})", init.z)),
            vec![init],
        ));
    }
    // lets the final approach overshoot the boundary instead of creeping up to it
    let margin = 0.05 * lower.max(1e-12);
    let rhs = |y: Y| -> Y { [y[1], field.force(y[0]) / mass] };
    let mut history = vec![init];
    let mut state = init;
    let mut y: Y = [init.z, init.v_z];
    let mut k1 = rhs(y);
    let mut h = {
        let scale = (controls.abs_tol_z + controls.rel_tol * y[0].abs()) / (y[1].abs() + 1e-30);
        (0.01 * t_max).min(1e3 * scale).max(1e-12 * t_max)
    };
    let mut steps = 0usize;
    while state.t < t_max {
        steps += 1;
        if steps > controls.max_steps {
            return Err(fail(Error::StepBudget { steps: controls.max_steps, t: state.t, z: y[0] }, history));
        }
        let dist = (y[0] - lower).min(upper - y[0]) + margin;
        let limit = 0.25 * dist / (y[1].abs() + (k1[1].abs() * dist).sqrt() + 1e-300);
        h = h.min(limit);
        if let Some(tk) = time_to_breakpoint(field.breakpoints(), y[0], y[1], k1[1]) {
            // land just past the knot so the straddled piece is negligible
            h = h.min(tk * (1.0 + 1e-6));
        }
        h = h.min(t_max - state.t);
        if h <= 1e-14 * state.t.max(1e-6) {
            return Err(fail(Error::StepUnderflow { t: state.t, z: y[0] }, history));
        }
        let k2 = rhs(axpy(y, h, &[(A21, k1)]));
        let k3 = rhs(axpy(y, h, &[(A31, k1), (A32, k2)]));
        let k4 = rhs(axpy(y, h, &[(A41, k1), (A42, k2), (A43, k3)]));
        let k5 = rhs(axpy(y, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]));
        let k6 = rhs(axpy(y, h, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)]));
        let y_new = axpy(y, h, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
        let k7 = rhs(y_new);
        let err_vec = axpy([0.0, 0.0], h, &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)]);
        let tol = [controls.abs_tol_z, controls.abs_tol_v];
        let mut err = 0.0f64;
        for i in 0..2 {
            let sc = tol[i] + controls.rel_tol * y[i].abs().max(y_new[i].abs());
            err += (err_vec[i] / sc).powi(2);
        }
        let err = (0.5 * err).sqrt();
        if !err.is_finite() {
            h *= 0.1;
            continue;
        }
        if err > 1.0 {
            h *= (0.9 * err.powf(-0.2)).max(0.2);
            continue;
        }
        let next = TrajectoryState {
            z: y_new[0],
            v_z: y_new[1],
            t: if t_max - (state.t + h) < 1e-15 * t_max { t_max } else { state.t + h },
            fate: Fate::InFlight,
        };
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if next.z <= lower || next.z >= upper {
            let (boundary, fate) = if next.z <= lower { (lower, Fate::CollectedA) } else { (upper, Fate::CollectedB) };
            let end = crossing(&state, &TrajectoryState { fate, ..next }, boundary);
            history.push(end);
            return Ok(Trajectory { history });
        }
        if controls.record_history {
            history.push(next);
        }
        state = next;
        y = y_new;
        k1 = k7;
    }
    if !controls.record_history {
        history.push(state);
    }
    Ok(Trajectory { history })
}
