use std::f64::consts::PI;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::trajectory::{frame_count, Trajectory, TrajectoryKind};
use crate::error::{Error, Result};
use crate::geometry::{Pose, Vec3};
use crate::rng::{self, streams};

/// Gesture kinematics. Amplitudes are peak excursions from the base pose.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GestureParams {
    pub point_amplitude_deg: f64,
    pub point_rate_hz: f64,
    pub wave_amplitude_deg: f64,
    pub wave_rate_hz: f64,
    /// Peak sideways hand travel, m.
    pub wave_lateral_m: f64,
    /// Yaw excursion of the precessing ring axis.
    pub rotate_amplitude_deg: f64,
    /// Tilt of the ring axis, a quarter cycle out of phase with the yaw.
    pub rotate_tilt_deg: f64,
    pub rotate_rate_hz: f64,
    /// Hard bound on the random yaw offset.
    pub random_range_deg: f64,
    /// Mean-reversion time constant, s.
    pub random_time_constant: f64,
    /// Stationary standard deviation as a fraction of the range.
    pub random_spread: f64,
    /// Moving-average length applied to the random path, s.
    pub random_smoothing: f64,
    pub walk_path_length: f64,
    /// m/s.
    pub walk_speed: f64,
    pub walk_swing_deg: f64,
    /// Distance walked per full arm-swing cycle, m.
    pub walk_stride: f64,
}

impl Default for GestureParams {
    fn default() -> Self {
        Self {
            point_amplitude_deg: 30.0,
            point_rate_hz: 0.5,
            wave_amplitude_deg: 45.0,
            wave_rate_hz: 1.0,
            wave_lateral_m: 0.02,
            rotate_amplitude_deg: 45.0,
            rotate_tilt_deg: 15.0,
            rotate_rate_hz: 0.5,
            random_range_deg: 45.0,
            random_time_constant: 0.2,
            random_spread: 0.6,
            random_smoothing: 0.1,
            walk_path_length: 1.0,
            walk_speed: 0.5,
            walk_swing_deg: 20.0,
            walk_stride: 1.0,
        }
    }
}

/// Internal rate of the random-rotation process, independent of the
/// requested frame rate so that resampling does not change the path.
pub const RANDOM_PROCESS_RATE: f64 = 1_000.0;
/// Farthest a walking wearer gets from the reference point, m.
pub const WALK_MAX_DISTANCE: f64 = 0.8;

fn stream_index(kind: TrajectoryKind) -> u64 {
    TrajectoryKind::ALL.iter().position(|k| *k == kind).unwrap_or(0) as u64
}

/// Ornstein-Uhlenbeck path on [-1, 1] (reflecting), starting at 0, then
/// smoothed by a causal moving average of `smoothing` seconds.
fn unit_ou(duration: f64, tau: f64, spread: f64, smoothing: f64, seed: u64) -> Vec<f64> {
    let n = (duration * RANDOM_PROCESS_RATE).ceil() as usize + 2;
    let dt = 1.0 / RANDOM_PROCESS_RATE;
    let sigma = spread * (2.0 / tau).sqrt();
    let decay = (-dt / tau).exp();
    // exact discretization of the OU step
    let step_sd = sigma * ((1.0 - decay * decay) * tau / 2.0).sqrt();
    let mut rng = rng::stream(seed, streams::TRAJECTORY, stream_index(TrajectoryKind::RandomRotation));
    let mut x = 0.0f64;
    let mut out = Vec::with_capacity(n);
    out.push(x);
    for _ in 1..n {
        let z: f64 = StandardNormal.sample(&mut rng);
        x = x * decay + step_sd * z;
        // fold back into [-1, 1]
        while x.abs() > 1.0 {
            x = x.signum() * 2.0 - x;
        }
        out.push(x);
    }
    let w = (smoothing * RANDOM_PROCESS_RATE).round().max(1.0) as usize;
    let mut acc = 0.0;
    let mut smooth = Vec::with_capacity(n);
    for i in 0..n {
        acc += out[i];
        if i >= w {
            acc -= out[i - w];
        }
        smooth.push(acc / (i + 1).min(w) as f64);
    }
    smooth
}

fn sample_path(path: &[f64], t: f64) -> f64 {
    let x = t * RANDOM_PROCESS_RATE;
    let i = (x.floor() as usize).min(path.len() - 2);
    let u = x - i as f64;
    path[i] * (1.0 - u) + path[i + 1] * u
}

/// Wrist gesture around `base`. `walk` uses the walking parameters.
pub fn gen_gesture_trajectory(
    kind: TrajectoryKind,
    base: Pose,
    duration: f64,
    frame_rate: f64,
    seed: u64,
    params: &GestureParams,
) -> Result<Trajectory> {
    if kind == TrajectoryKind::Walk {
        return gen_walk_trajectory(
            base,
            params.walk_path_length,
            params.walk_speed,
            frame_rate,
            duration,
            params,
        );
    }
    let n = frame_count(duration, frame_rate)?;
    let side = Vec3::new(-base.yaw.sin(), base.yaw.cos(), 0.0);
    let random = (kind == TrajectoryKind::RandomRotation).then(|| {
        if !(params.random_time_constant > 0.0) {
            return Err(Error::param("random_time_constant", "must be positive"));
        }
        Ok(unit_ou(
            duration,
            params.random_time_constant,
            params.random_spread,
            params.random_smoothing,
            seed,
        ))
    });
    let random = match random {
        Some(r) => Some(r?),
        None => None,
    };
    let frames = (0..n)
        .map(|i| {
            let t = i as f64 / frame_rate;
            let (dyaw, dpitch, lateral) = match kind {
                TrajectoryKind::Static | TrajectoryKind::Walk => (0.0, 0.0, 0.0),
                TrajectoryKind::Point => {
                    let w = 2.0 * PI * params.point_rate_hz * t;
                    (params.point_amplitude_deg.to_radians() * w.sin(), 0.0, 0.0)
                }
                TrajectoryKind::Wave => {
                    let w = 2.0 * PI * params.wave_rate_hz * t;
                    (
                        params.wave_amplitude_deg.to_radians() * w.sin(),
                        0.0,
                        params.wave_lateral_m * w.sin(),
                    )
                }
                TrajectoryKind::Rotate => {
                    let w = 2.0 * PI * params.rotate_rate_hz * t;
                    (
                        params.rotate_amplitude_deg.to_radians() * w.sin(),
                        params.rotate_tilt_deg.to_radians() * (1.0 - w.cos()) / 2.0,
                        0.0,
                    )
                }
                TrajectoryKind::RandomRotation => {
                    let path = random.as_deref().unwrap_or(&[0.0, 0.0]);
                    (params.random_range_deg.to_radians() * sample_path(path, t), 0.0, 0.0)
                }
            };
            Pose::new(base.position + side * lateral, base.yaw + dyaw, base.pitch + dpitch)
        })
        .collect();
    Ok(Trajectory {
        frame_rate,
        frames,
        kind,
    })
}

/// Back-and-forth walk along the base heading, centred on the base
/// position, with arm swing tied to distance walked. The segment is
/// clamped to stay within [`WALK_MAX_DISTANCE`] of the base.
pub fn gen_walk_trajectory(
    base: Pose,
    path_length: f64,
    speed: f64,
    frame_rate: f64,
    duration: f64,
    params: &GestureParams,
) -> Result<Trajectory> {
    if !(speed > 0.0) {
        return Err(Error::param("speed", format!("{speed} m/s must be positive")));
    }
    if !(path_length >= 0.0) {
        return Err(Error::param(
            "path_length",
            format!("{path_length} m must be non-negative"),
        ));
    }
    let n = frame_count(duration, frame_rate)?;
    let len = path_length.min(2.0 * WALK_MAX_DISTANCE);
    let dir = Vec3::new(base.yaw.cos(), base.yaw.sin(), 0.0);
    let swing = params.walk_swing_deg.to_radians();
    let frames = (0..n)
        .map(|i| {
            if len == 0.0 {
                return base;
            }
            let t = i as f64 / frame_rate;
            let travelled = speed * t;
            let phase = travelled % (2.0 * len);
            let s = if phase <= len { phase } else { 2.0 * len - phase };
            let yaw = base.yaw + swing * (2.0 * PI * travelled / params.walk_stride).sin();
            Pose::new(base.position + dir * (s - len / 2.0), yaw, base.pitch)
        })
        .collect();
    Ok(Trajectory {
        frame_rate,
        frames,
        kind: TrajectoryKind::Walk,
    })
}
