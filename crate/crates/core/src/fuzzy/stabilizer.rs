//! Thrust redistribution for an octocopter carrying a moving arm.
//!
//! Rotors sit at azimuths 45°·i. For the four rotors 0–3 a fuzzy lift share
//! is evaluated for the rotor itself and for its opposite partner; the
//! difference, scaled by a gain, is the rotor's delta and its partner gets
//! the exact negation. Total thrust is therefore unchanged for any input.

use serde::{Deserialize, Serialize};

use super::{
    FuzzyError, FuzzySystem, FuzzyVariable, MembershipFunction, Result, Rule, DEFAULT_SAMPLES,
};
use crate::flight::STANDARD_GRAVITY;
use MembershipFunction::Triangular;

pub const ROTORS: usize = 8;

const ARM_INPUTS: &[&str] = &["proximity", "extension"];
const TILT_INPUTS: &[&str] = &["tilt_error"];

/// Default natural frequency of the calibrated tilt loop, rad/s.
pub const DEFAULT_TILT_BANDWIDTH: f64 = 7.0;

pub fn rotor_azimuth(i: usize) -> f64 {
    45.0 * (i % ROTORS) as f64
}

/// Unsigned angle between two azimuths in degrees, in [0, 180].
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stabilizer {
    /// Inputs `proximity` (deg from the arm, 0..180) and `extension`
    /// (0..1); one output, a lift share.
    pub arm: FuzzySystem,
    /// Input `tilt_error` (rad); one output, a signed correction.
    pub tilt: FuzzySystem,
    /// Newtons per unit of arm lift-share difference.
    pub arm_gain: f64,
    /// Newtons per unit of tilt correction difference.
    pub tilt_gain: f64,
}

/// Near/Far proximity and Short/Long extension onto a lift share in [0, 1].
pub fn default_arm_system() -> FuzzySystem {
    let proximity = FuzzyVariable::new(
        "proximity",
        [0.0, 180.0],
        "deg",
        &[
            ("near", Triangular([0.0, 0.0, 180.0])),
            ("far", Triangular([0.0, 180.0, 180.0])),
        ],
    );
    let extension = FuzzyVariable::new(
        "extension",
        [0.0, 1.0],
        "fraction",
        &[
            ("short", Triangular([0.0, 0.0, 1.0])),
            ("long", Triangular([0.0, 1.0, 1.0])),
        ],
    );
    let lift = FuzzyVariable::new(
        "lift",
        [0.0, 1.0],
        "",
        &[
            ("zero", Triangular([0.0, 0.0, 0.5])),
            ("large", Triangular([0.5, 1.0, 1.0])),
        ],
    );
    let rules = vec![
        Rule::new(&[("extension", "short")], ("lift", "zero")),
        Rule::new(
            &[("proximity", "near"), ("extension", "long")],
            ("lift", "large"),
        ),
        Rule::new(
            &[("proximity", "far"), ("extension", "long")],
            ("lift", "zero"),
        ),
    ];
    FuzzySystem::new(
        vec![proximity, extension],
        vec![lift],
        rules,
        DEFAULT_SAMPLES,
    )
    .expect("default arm system is valid")
}

/// Negative/Zero/Positive tilt error onto Decrease/Hold/Increase.
pub fn default_tilt_system() -> FuzzySystem {
    let error = FuzzyVariable::new(
        "tilt_error",
        [-0.3, 0.3],
        "rad",
        &[
            ("negative", Triangular([-0.3, -0.3, 0.0])),
            ("zero", Triangular([-0.3, 0.0, 0.3])),
            ("positive", Triangular([0.0, 0.3, 0.3])),
        ],
    );
    let correction = FuzzyVariable::new(
        "correction",
        [-1.0, 1.0],
        "",
        &[
            ("decrease", Triangular([-1.0, -1.0, -0.5])),
            ("hold", Triangular([-0.5, 0.0, 0.5])),
            ("increase", Triangular([0.5, 1.0, 1.0])),
        ],
    );
    let rules = vec![
        Rule::new(&[("tilt_error", "negative")], ("correction", "decrease")),
        Rule::new(&[("tilt_error", "zero")], ("correction", "hold")),
        Rule::new(&[("tilt_error", "positive")], ("correction", "increase")),
    ];
    FuzzySystem::new(vec![error], vec![correction], rules, DEFAULT_SAMPLES)
        .expect("default tilt system is valid")
}

fn check_shape(sys: &FuzzySystem, inputs: &'static [&'static str]) -> Result<()> {
    let names: Vec<&str> = sys.inputs().iter().map(|v| v.name.as_str()).collect();
    if names != inputs || sys.outputs().len() != 1 {
        return Err(FuzzyError::BadStabilizerSystem { inputs });
    }
    Ok(())
}

impl Stabilizer {
    pub fn new(arm: FuzzySystem, tilt: FuzzySystem, arm_gain: f64, tilt_gain: f64) -> Result<Self> {
        check_shape(&arm, ARM_INPUTS)?;
        check_shape(&tilt, TILT_INPUTS)?;
        Ok(Self {
            arm,
            tilt,
            arm_gain,
            tilt_gain,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self =
            serde_json::from_str(text).map_err(|e| FuzzyError::BadDocument(e.to_string()))?;
        Self::new(s.arm, s.tilt, s.arm_gain, s.tilt_gain)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Default rulebases with gains set for a given airframe:
    /// - the arm gain makes the deltas cancel the arm's gravity torque
    ///   exactly when the fully extended arm points at a rotor;
    /// - the tilt gain gives the small-error tilt loop a natural frequency
    ///   of `bandwidth` rad/s on inertia `inertia`.
    pub fn calibrated(
        arm_mass: f64,
        arm_reach: f64,
        rotor_radius: f64,
        inertia: f64,
        bandwidth: f64,
    ) -> Self {
        let mut s = Self {
            arm: default_arm_system(),
            tilt: default_tilt_system(),
            arm_gain: 1.0,
            tilt_gain: 1.0,
        };
        // Pitch-axis lever of unit-gain deltas with the arm over rotor 0:
        // Σ over all eight rotors of δᵢ·R·cos φᵢ.
        let unit = s
            .arm_deltas(0.0, 1.0)
            .expect("default systems cover their universes");
        let lever: f64 = (0..ROTORS)
            .map(|i| unit[i] * rotor_radius * rotor_azimuth(i).to_radians().cos())
            .sum();
        s.arm_gain = arm_mass * STANDARD_GRAVITY * arm_reach / lever;

        // With δᵢ ≈ c·uᵢ the pitch torque is −4·R·c·e_pitch.
        let h = 1e-4;
        let slope = s
            .tilt_difference(h)
            .expect("default systems cover their universes")
            / h;
        let c = inertia * bandwidth * bandwidth / (4.0 * rotor_radius);
        s.tilt_gain = c / slope;
        s
    }

    fn lift(&self, proximity: f64, extension: f64) -> Result<f64> {
        Ok(self.arm.infer_values(&[proximity, extension])?[0])
    }

    fn tilt_difference(&self, u: f64) -> Result<f64> {
        Ok(self.tilt.infer_values(&[u])?[0] - self.tilt.infer_values(&[-u])?[0])
    }

    fn antisymmetric(mut f: impl FnMut(usize) -> Result<f64>) -> Result<[f64; ROTORS]> {
        let mut d = [0.0; ROTORS];
        for i in 0..ROTORS / 2 {
            d[i] = f(i)?;
            d[i + ROTORS / 2] = -d[i];
        }
        Ok(d)
    }

    /// Arm-pose contribution alone.
    pub fn arm_deltas(&self, arm_azimuth: f64, extension: f64) -> Result<[f64; ROTORS]> {
        Self::antisymmetric(|i| {
            let d = angular_distance(rotor_azimuth(i), arm_azimuth);
            Ok(self.arm_gain * (self.lift(d, extension)? - self.lift(180.0 - d, extension)?))
        })
    }

    /// Tilt-error contribution alone; `tilt_error` is (roll, pitch) in rad.
    pub fn tilt_deltas(&self, tilt_error: (f64, f64)) -> Result<[f64; ROTORS]> {
        let (roll, pitch) = tilt_error;
        Self::antisymmetric(|i| {
            let phi = rotor_azimuth(i).to_radians();
            let u = pitch * phi.cos() - roll * phi.sin();
            Ok(self.tilt_gain * self.tilt_difference(u)?)
        })
    }

    /// Per-rotor thrust deltas in newtons. Rotor `i + 4` always receives the
    /// negation of rotor `i`.
    pub fn deltas(
        &self,
        arm_azimuth: f64,
        arm_extension: f64,
        tilt_error: (f64, f64),
    ) -> Result<[f64; ROTORS]> {
        let arm = self.arm_deltas(arm_azimuth, arm_extension)?;
        let tilt = self.tilt_deltas(tilt_error)?;
        Self::antisymmetric(|i| Ok(arm[i] + tilt[i]))
    }

    /// Largest |delta| any input can produce, from the output universes.
    pub fn max_delta(&self) -> f64 {
        let span = |s: &FuzzySystem| {
            let [lo, hi] = s.outputs()[0].range;
            hi - lo
        };
        self.arm_gain.abs() * span(&self.arm) + self.tilt_gain.abs() * span(&self.tilt)
    }
}

/// `rotor_index,delta` rows.
pub fn deltas_csv(deltas: &[f64]) -> String {
    let mut out = String::from("rotor_index,delta\n");
    for (i, d) in deltas.iter().enumerate() {
        out.push_str(&format!("{i},{d}\n"));
    }
    out
}
