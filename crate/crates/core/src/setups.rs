//! Standard experiment layouts: a jammer on the table with a microphone on
//! a ring around it and the talker beside the jammer.

use std::f64::consts::FRAC_PI_2;

use crate::error::Result;
use crate::field::{angular_sweep, Ring};
use crate::geometry::{Pose, Vec3};
use crate::metrics::{calibrate_tau, WerModel};
use crate::motion::{sjr_timeseries, Trajectory};
use crate::presets::{build_preset, PresetId, WRIST_HEIGHT};
use crate::scenario::{MicPlacement, Scenario, SpeechSource, MIC_HEIGHT};

/// Frame rate used for SJR series.
pub const WER_FRAME_RATE: f64 = 100.0;
/// Length of the calibration recording, s (100 words).
pub const CALIBRATION_DURATION: f64 = 40.0;
/// Jammer-to-microphone distance of the angle experiments, m.
pub const RING_RADIUS: f64 = 1.0;

/// Jammer pose for a preset: arrays sit on the table, bracelets at wrist
/// height; both face +y.
pub fn jammer_pose(preset: PresetId) -> Pose {
    let z = match preset {
        PresetId::Bracelet12 | PresetId::Bracelet24 => WRIST_HEIGHT,
        _ => MIC_HEIGHT,
    };
    Pose::new(Vec3::new(0.0, 0.0, z), FRAC_PI_2, 0.0)
}

/// Jammer only, at its standard pose.
pub fn jammer_scenario(preset: PresetId, sources: u32) -> Scenario {
    Scenario::single(build_preset(preset).with_sources(sources), jammer_pose(preset))
}

/// Jammer plus one microphone at angular separation `alpha_deg` on a ring
/// of `radius`, and the talker at the jammer.
pub fn angle_setup(preset: PresetId, sources: u32, alpha_deg: f64, radius: f64) -> Result<Scenario> {
    let mut s = jammer_scenario(preset, sources);
    let ring = Ring::for_scenario(&s, radius)?;
    s.mics.push(MicPlacement::at(ring.point(alpha_deg)));
    s.speech = Some(SpeechSource::at(Vec3::new(ring.center.x, ring.center.y, MIC_HEIGHT)));
    Ok(s)
}

/// The on-axis anchor: Backdoor 3x3, microphone 1 m away at alpha = 0.
pub fn calibration_scenario() -> Result<Scenario> {
    angle_setup(PresetId::Backdoor3x3, 1, 0.0, RING_RADIUS)
}

/// Stationary trajectory at the scenario's reference pose.
pub fn still(scenario: &Scenario, duration: f64) -> Result<Trajectory> {
    Trajectory::stationary(scenario.jammers[0].reference_pose(), duration, WER_FRAME_RATE)
}

/// Calibrated tau for `model` on the on-axis anchor, with word loudness
/// drawn from `seed`.
pub fn calibrated_tau(target_wer: f64, model: &WerModel, seed: u64) -> Result<f64> {
    let mut s = calibration_scenario()?;
    s.seed = seed;
    let sjr = sjr_timeseries(&s, &still(&s, CALIBRATION_DURATION)?, 0)?;
    calibrate_tau(&sjr, target_wer, model)
}

/// Angle (degrees, within `[0, 180]`) of the weakest point of the static
/// ring profile.
pub fn deepest_null(scenario: &Scenario, radius: f64, step: f64) -> Result<f64> {
    let p = angular_sweep(scenario, radius, step)?;
    let (i, _) = p
        .values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    Ok(p.angles[i])
}
