//! Roll/pitch dynamics about hover, integrated with semi-implicit Euler.
//!
//! Body axes: x toward rotor 0, y toward rotor 2, z up. A thrust `F` at
//! `(x, y)` produces torque `(F·y, −F·x)` about (roll, pitch); the arm's
//! point mass at `(xa, ya)` contributes `(−m·g·ya, m·g·xa)`.

use serde::{Deserialize, Serialize};

use super::{FlightError, Result, STANDARD_GRAVITY};
use crate::fuzzy::stabilizer::{rotor_azimuth, Stabilizer, DEFAULT_TILT_BANDWIDTH, ROTORS};

/// Arm pose at time `t`: azimuth in degrees, extension as a fraction of
/// full reach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Keyframe {
    pub t: f64,
    pub azimuth: f64,
    pub extension: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub mass_kg: f64,
    pub rotor_radius_m: f64,
    /// Roll and pitch inertia, kg·m².
    pub inertia_kg_m2: f64,
    pub arm_mass_kg: f64,
    pub arm_reach_m: f64,
    pub dt_s: f64,
    pub duration_s: f64,
    pub controller: bool,
    /// The controller feeds back `angle + lead·rate`.
    pub lead_s: f64,
    /// Natural frequency of the calibrated tilt loop, rad/s.
    pub tilt_bandwidth: f64,
    /// Linearly interpolated; held constant outside its time span.
    pub trajectory: Vec<Keyframe>,
}

impl Default for SimConfig {
    /// 32.019 kg airframe, 0.5 m rotor radius, 0.8 kg·m², 0.94 kg arm at up
    /// to 0.6 m, 1 ms steps for 10 s, controller off, one full arm sweep.
    fn default() -> Self {
        Self {
            mass_kg: 32.019,
            rotor_radius_m: 0.5,
            inertia_kg_m2: 0.8,
            arm_mass_kg: 0.94,
            arm_reach_m: 0.6,
            dt_s: 0.001,
            duration_s: 10.0,
            controller: false,
            lead_s: 0.2,
            tilt_bandwidth: DEFAULT_TILT_BANDWIDTH,
            trajectory: vec![
                Keyframe {
                    t: 0.0,
                    azimuth: 0.0,
                    extension: 1.0,
                },
                Keyframe {
                    t: 10.0,
                    azimuth: 360.0,
                    extension: 1.0,
                },
            ],
        }
    }
}

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| FlightError::ConfigInvalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(FlightError::ConfigInvalid(m.into()));
        let positive = |v: f64| v.is_finite() && v > 0.0;
        let non_negative = |v: f64| v.is_finite() && v >= 0.0;
        if !positive(self.mass_kg)
            || !positive(self.rotor_radius_m)
            || !positive(self.inertia_kg_m2)
        {
            return bad("mass, rotor radius and inertia must be positive");
        }
        if !non_negative(self.arm_mass_kg) || !non_negative(self.arm_reach_m) {
            return bad("arm mass and reach must be non-negative");
        }
        if !positive(self.dt_s) {
            return bad("time step must be positive");
        }
        if !self.duration_s.is_finite() || self.duration_s < self.dt_s {
            return bad("duration must be at least one time step");
        }
        if !non_negative(self.lead_s) || !positive(self.tilt_bandwidth) {
            return bad("lead must be non-negative and bandwidth positive");
        }
        if self.trajectory.is_empty() {
            return bad("trajectory needs at least one keyframe");
        }
        for k in &self.trajectory {
            if !k.t.is_finite() || !k.azimuth.is_finite() || !(0.0..=1.0).contains(&k.extension) {
                return bad("keyframes need finite times and azimuths and extension in [0, 1]");
            }
        }
        if self.trajectory.windows(2).any(|w| w[1].t < w[0].t) {
            return bad("keyframe times must be non-decreasing");
        }
        Ok(())
    }

    /// Number of integration steps.
    pub fn steps(&self) -> usize {
        (self.duration_s / self.dt_s).round() as usize
    }

    /// Interpolated (azimuth, extension) at time `t`.
    pub fn arm_pose(&self, t: f64) -> (f64, f64) {
        let k = &self.trajectory;
        let first = k[0];
        if t <= first.t {
            return (first.azimuth, first.extension);
        }
        let next = k.partition_point(|f| f.t <= t);
        if next == k.len() {
            let last = k[k.len() - 1];
            return (last.azimuth, last.extension);
        }
        let (a, b) = (k[next - 1], k[next]);
        let s = (t - a.t) / (b.t - a.t);
        (
            a.azimuth + s * (b.azimuth - a.azimuth),
            a.extension + s * (b.extension - a.extension),
        )
    }

    pub fn stabilizer(&self) -> Stabilizer {
        Stabilizer::calibrated(
            self.arm_mass_kg,
            self.arm_reach_m,
            self.rotor_radius_m,
            self.inertia_kg_m2,
            self.tilt_bandwidth,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoverState {
    pub t: f64,
    pub roll: f64,
    pub pitch: f64,
    pub roll_rate: f64,
    pub pitch_rate: f64,
    pub thrusts: [f64; ROTORS],
    pub arm_azimuth: f64,
    pub arm_extension: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub steps: usize,
    /// Largest |roll| or |pitch| over the run, rad.
    pub max_tilt: f64,
    pub final_roll: f64,
    pub final_pitch: f64,
    /// Largest |Σ thrust − m·g| over the run, N.
    pub max_thrust_imbalance: f64,
}

impl SimSummary {
    pub fn of(cfg: &SimConfig, trace: &[HoverState]) -> Self {
        let weight = cfg.mass_kg * STANDARD_GRAVITY;
        let last = trace.last().expect("trace is never empty");
        Self {
            steps: trace.len() - 1,
            max_tilt: trace
                .iter()
                .map(|s| s.roll.abs().max(s.pitch.abs()))
                .fold(0.0, f64::max),
            final_roll: last.roll,
            final_pitch: last.pitch,
            max_thrust_imbalance: trace
                .iter()
                .map(|s| (s.thrusts.iter().sum::<f64>() - weight).abs())
                .fold(0.0, f64::max),
        }
    }
}

/// Runs the simulation and returns one state per step, from `t = 0` to the
/// end inclusive. Each state carries the thrusts applied from that instant.
pub fn simulate_hover(cfg: &SimConfig) -> Result<Vec<HoverState>> {
    cfg.validate()?;
    let stabilizer = cfg.controller.then(|| cfg.stabilizer());
    let hover = cfg.mass_kg * STANDARD_GRAVITY / ROTORS as f64;
    if let Some(s) = &stabilizer {
        if s.max_delta() > hover {
            return Err(FlightError::ConfigInvalid(format!(
                "controller authority {:.3} N exceeds hover thrust {hover:.3} N per rotor",
                s.max_delta()
            )));
        }
    }
    // Rotors i and i+4 are exact mirror images, so hover thrust produces
    // exactly zero torque.
    let positions: Vec<(f64, f64)> = (0..ROTORS / 2)
        .map(|i| {
            let phi = rotor_azimuth(i).to_radians();
            (
                cfg.rotor_radius_m * phi.cos(),
                cfg.rotor_radius_m * phi.sin(),
            )
        })
        .collect();
    let arm_weight = cfg.arm_mass_kg * STANDARD_GRAVITY;

    let steps = cfg.steps();
    let mut trace = Vec::with_capacity(steps + 1);
    let (mut roll, mut pitch, mut roll_rate, mut pitch_rate) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for k in 0..=steps {
        let t = k as f64 * cfg.dt_s;
        let (azimuth, extension) = cfg.arm_pose(t);
        let mut thrusts = [hover; ROTORS];
        if let Some(s) = &stabilizer {
            let error = (
                roll + cfg.lead_s * roll_rate,
                pitch + cfg.lead_s * pitch_rate,
            );
            let deltas = s.deltas(azimuth, extension, error)?;
            for (f, d) in thrusts.iter_mut().zip(deltas) {
                *f += d;
            }
        }
        trace.push(HoverState {
            t,
            roll,
            pitch,
            roll_rate,
            pitch_rate,
            thrusts,
            arm_azimuth: azimuth,
            arm_extension: extension,
        });
        if k == steps {
            break;
        }
        let (mut tau_roll, mut tau_pitch) = (0.0, 0.0);
        for (i, &(x, y)) in positions.iter().enumerate() {
            let net = thrusts[i] - thrusts[i + ROTORS / 2];
            tau_roll += net * y;
            tau_pitch -= net * x;
        }
        let a = azimuth.to_radians();
        let r = cfg.arm_reach_m * extension;
        tau_roll -= arm_weight * r * a.sin();
        tau_pitch += arm_weight * r * a.cos();

        roll_rate += tau_roll / cfg.inertia_kg_m2 * cfg.dt_s;
        pitch_rate += tau_pitch / cfg.inertia_kg_m2 * cfg.dt_s;
        roll += roll_rate * cfg.dt_s;
        pitch += pitch_rate * cfg.dt_s;
    }
    Ok(trace)
}

pub fn trace_csv(trace: &[HoverState]) -> String {
    let mut out = String::from("t,roll,pitch,roll_rate,pitch_rate");
    for i in 0..ROTORS {
        out.push_str(&format!(",thrust_{i}"));
    }
    out.push_str(",arm_azimuth,arm_extension\n");
    for s in trace {
        out.push_str(&format!(
            "{},{},{},{},{}",
            s.t, s.roll, s.pitch, s.roll_rate, s.pitch_rate
        ));
        for f in &s.thrusts {
            out.push_str(&format!(",{f}"));
        }
        out.push_str(&format!(",{},{}\n", s.arm_azimuth, s.arm_extension));
    }
    out
}
